#include "stlcbf/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stlcbf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_coverage(const Formula& f, const Signal& s, double t) {
  const double need = t + horizon(f);
  if (s.start() > t + s.slack() || s.end() < need - s.slack())
    throw SignalError("signal too short: covers [" + std::to_string(s.start()) + ", " +
                      std::to_string(s.end()) + "] but needs [" + std::to_string(t) +
                      ", " + std::to_string(need) + "]");
}

bool eval_b(const Formula& f, const Signal& s, std::size_t idx, const WorldView* world) {
  const double t = s.time(idx);
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::Pred:
      return eval_predicate(f.predicate(), s.state(idx), t, world) >= 0.0;
    case Formula::Kind::NotPred:
      return eval_predicate(f.predicate(), s.state(idx), t, world) < 0.0;
    case Formula::Kind::And:
      return eval_b(f.left(), s, idx, world) && eval_b(f.right(), s, idx, world);
    case Formula::Kind::Eventually: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        if (eval_b(f.left(), s, j, world)) return true;
      return false;
    }
    case Formula::Kind::Always: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        if (!eval_b(f.left(), s, j, world)) return false;
      return true;
    }
    case Formula::Kind::Until: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j) {
        if (!eval_b(f.right(), s, j, world)) continue;
        bool left_holds = true;
        const auto [l2, h2] = s.window(t, s.time(j));
        for (std::size_t k = l2; k <= h2 && h2 < s.size(); ++k) {
          if (!eval_b(f.left(), s, k, world)) {
            left_holds = false;
            break;
          }
        }
        if (left_holds) return true;
      }
      return false;
    }
  }
  return false;
}

double eval_r(const Formula& f, const Signal& s, std::size_t idx, const WorldView* world) {
  const double t = s.time(idx);
  switch (f.kind()) {
    case Formula::Kind::True:
      return kInf;
    case Formula::Kind::Pred:
      return eval_predicate(f.predicate(), s.state(idx), t, world);
    case Formula::Kind::NotPred:
      return -eval_predicate(f.predicate(), s.state(idx), t, world);
    case Formula::Kind::And:
      return std::min(eval_r(f.left(), s, idx, world), eval_r(f.right(), s, idx, world));
    case Formula::Kind::Eventually: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      double best = -kInf;
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        best = std::max(best, eval_r(f.left(), s, j, world));
      return best;
    }
    case Formula::Kind::Always: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      double worst = kInf;
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        worst = std::min(worst, eval_r(f.left(), s, j, world));
      return worst;
    }
    case Formula::Kind::Until: {
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      double best = -kInf;
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j) {
        double cand = eval_r(f.right(), s, j, world);
        const auto [l2, h2] = s.window(t, s.time(j));
        for (std::size_t k = l2; k <= h2 && h2 < s.size(); ++k)
          cand = std::min(cand, eval_r(f.left(), s, k, world));
        best = std::max(best, cand);
      }
      return best;
    }
  }
  return -kInf;
}

enum class Tri { False, True, Unknown };

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}

Tri eval_tri(const Formula& f, const Signal& s, std::size_t idx, const WorldView* world) {
  const double t = s.time(idx);
  const double covered_until = s.end() + s.slack();
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::Pred:
    case Formula::Kind::NotPred:
      return tri_of(eval_b(f, s, idx, world));
    case Formula::Kind::And:
      return tri_and(eval_tri(f.left(), s, idx, world), eval_tri(f.right(), s, idx, world));
    case Formula::Kind::Eventually: {
      const bool full = t + f.interval().b <= covered_until;
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        if (eval_b(f.left(), s, j, world)) return Tri::True;
      return full ? Tri::False : Tri::Unknown;
    }
    case Formula::Kind::Always: {
      const bool full = t + f.interval().b <= covered_until;
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j)
        if (!eval_b(f.left(), s, j, world)) return Tri::False;
      return full ? Tri::True : Tri::Unknown;
    }
    case Formula::Kind::Until: {
      const bool full = t + f.interval().b <= covered_until;
      const auto [lo, hi] = s.window(t + f.interval().a, t + f.interval().b);
      // First sample in [t, t+b] where the left operand fails, if any: no
      // witness at or after it can work, which may decide a truncated log.
      double t_break = kInf;
      {
        const auto [l2, h2] = s.window(t, t + f.interval().b);
        for (std::size_t k = l2; k <= h2 && h2 < s.size(); ++k) {
          if (!eval_b(f.left(), s, k, world)) {
            t_break = s.time(k);
            break;
          }
        }
      }
      for (std::size_t j = lo; j <= hi && hi < s.size(); ++j) {
        if (s.time(j) >= t_break) break;
        if (eval_b(f.right(), s, j, world)) return Tri::True;
      }
      if (full || t_break <= covered_until) return Tri::False;
      return Tri::Unknown;
    }
  }
  return Tri::Unknown;
}

}  // namespace

bool eval_boolean(const Formula& f, const Signal& s, double t, const WorldView* world) {
  require_coverage(f, s, t);
  return eval_b(f, s, s.sample_at(t), world);
}

double eval_robustness(const Formula& f, const Signal& s, double t, const WorldView* world) {
  require_coverage(f, s, t);
  return eval_r(f, s, s.sample_at(t), world);
}

Verdict monitor_verdict(const Formula& f, const Signal& s, double t, const WorldView* world) {
  std::size_t idx;
  try {
    idx = s.sample_at(t);
  } catch (const SignalError&) {
    return Verdict::Undetermined;
  }
  switch (eval_tri(f, s, idx, world)) {
    case Tri::True:
      return Verdict::Satisfied;
    case Tri::False:
      return Verdict::Violated;
    default:
      return Verdict::Undetermined;
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

}  // namespace stlcbf
