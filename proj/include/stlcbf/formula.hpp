#pragma once

#include <memory>
#include <string>

#include "stlcbf/predicate.hpp"

namespace stlcbf {

/// Closed time interval attached to a temporal operator, 0 <= a <= b < inf.
struct Interval {
  double a = 0.0;
  double b = 0.0;

  Interval() = default;
  Interval(double a_, double b_);
  double length() const { return b - a; }
  bool operator==(const Interval& o) const { return a == o.a && b == o.b; }
};

/// Immutable formula AST restricted to the supported fragment:
///   psi ::= true | mu | !mu | psi && psi
///   phi ::= G[a,b] psi | F[a,b] psi | psi U[a,b] psi | phi && phi
/// Negation only applies to predicates and temporal operators never nest;
/// the factories enforce this structurally.
class Formula {
 public:
  enum class Kind { True, Pred, NotPred, And, Always, Eventually, Until };

  static Formula boolean_true();
  static Formula pred(Predicate p);
  static Formula not_pred(Predicate p);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula always(Interval iv, Formula inner);
  static Formula eventually(Interval iv, Formula inner);
  static Formula until(Interval iv, Formula lhs, Formula rhs);

  Kind kind() const;
  const Predicate& predicate() const;  // Pred / NotPred
  const Interval& interval() const;    // Always / Eventually / Until
  Formula left() const;                // And lhs, temporal body, Until lhs
  Formula right() const;               // And rhs, Until rhs

  /// True when the subtree is temporal-operator-free (psi class).
  bool is_psi() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Minimum lookahead needed to decide the formula; max upper interval bound.
double horizon(const Formula& f);

/// Concrete syntax emitter; parse_formula(format_formula(f)) == f.
std::string format_formula(const Formula& f);

/// Shortest decimal representation that round-trips through parsing.
std::string format_number(double v);

}  // namespace stlcbf
