#pragma once

#include "stlcbf/formula.hpp"
#include "stlcbf/signal.hpp"

namespace stlcbf {

/// Boolean satisfaction of f by s at time t. Temporal operators quantify over
/// the samples inside the shifted window [t+a, t+b] (endpoints padded by half
/// a sampling step). Requires the signal to cover [t, t + horizon(f)];
/// throws SignalError otherwise.
bool eval_boolean(const Formula& f, const Signal& s, double t,
                  const WorldView* world = nullptr);

/// Quantitative semantics: predicates give h, negation flips sign, conjunction
/// takes min, F/G take max/min over the window, U the usual max-min form.
/// Same coverage precondition as eval_boolean.
double eval_robustness(const Formula& f, const Signal& s, double t,
                       const WorldView* world = nullptr);

enum class Verdict { Satisfied, Violated, Undetermined };

/// Three-valued verdict that tolerates truncated signals: returns Satisfied or
/// Violated as soon as the prefix decides the formula (an F with a witness is
/// decided even if the log stops early) and Undetermined when the verdict
/// depends on samples past the end of the signal.
Verdict monitor_verdict(const Formula& f, const Signal& s, double t,
                        const WorldView* world = nullptr);

const char* verdict_name(Verdict v);

}  // namespace stlcbf
