#include "stlcbf/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "stlcbf/errors.hpp"

namespace stlcbf {

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error("unbounded interval: bounds must be finite");
  if (a < 0.0 || a > b) throw Error("invalid interval: need 0 <= a <= b");
}

struct Formula::Node {
  Kind kind;
  Predicate pred;
  Interval iv;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

namespace {

const char* kind_name(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::Pred: return "predicate";
    case Formula::Kind::NotPred: return "negated predicate";
    case Formula::Kind::And: return "conjunction";
    case Formula::Kind::Always: return "G";
    case Formula::Kind::Eventually: return "F";
    case Formula::Kind::Until: return "U";
  }
  return "?";
}

}  // namespace

Formula Formula::boolean_true() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::True;
  return Formula(std::move(n));
}

Formula Formula::pred(Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pred;
  n->pred = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::not_pred(Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::NotPred;
  n->pred = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  const bool lp = lhs.is_psi(), rp = rhs.is_psi();
  if (lp != rp)
    throw FragmentError(
        std::string("conjunction mixes a temporal-operator-free formula with a ") +
        kind_name(lp ? rhs.kind() : lhs.kind()) + " formula");
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->left = lhs.node_;
  n->right = rhs.node_;
  return Formula(std::move(n));
}

Formula Formula::always(Interval iv, Formula inner) {
  if (!inner.is_psi())
    throw FragmentError(std::string("temporal operator G applied to ") +
                        kind_name(inner.kind()) + "; body must be temporal-operator-free");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Always;
  n->iv = iv;
  n->left = inner.node_;
  return Formula(std::move(n));
}

Formula Formula::eventually(Interval iv, Formula inner) {
  if (!inner.is_psi())
    throw FragmentError(std::string("temporal operator F applied to ") +
                        kind_name(inner.kind()) + "; body must be temporal-operator-free");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eventually;
  n->iv = iv;
  n->left = inner.node_;
  return Formula(std::move(n));
}

Formula Formula::until(Interval iv, Formula lhs, Formula rhs) {
  if (!lhs.is_psi())
    throw FragmentError(std::string("left operand of U is ") + kind_name(lhs.kind()) +
                        "; must be temporal-operator-free");
  if (!rhs.is_psi())
    throw FragmentError(std::string("right operand of U is ") + kind_name(rhs.kind()) +
                        "; must be temporal-operator-free");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Until;
  n->iv = iv;
  n->left = lhs.node_;
  n->right = rhs.node_;
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Predicate& Formula::predicate() const {
  if (node_->kind != Kind::Pred && node_->kind != Kind::NotPred)
    throw Error("formula node has no predicate");
  return node_->pred;
}

const Interval& Formula::interval() const {
  if (node_->kind != Kind::Always && node_->kind != Kind::Eventually &&
      node_->kind != Kind::Until)
    throw Error("formula node has no interval");
  return node_->iv;
}

Formula Formula::left() const {
  if (!node_->left) throw Error("formula node has no left child");
  return Formula(node_->left);
}

Formula Formula::right() const {
  if (!node_->right) throw Error("formula node has no right child");
  return Formula(node_->right);
}

bool Formula::is_psi() const {
  switch (node_->kind) {
    case Kind::True:
    case Kind::Pred:
    case Kind::NotPred:
      return true;
    case Kind::And:
      return Formula(node_->left).is_psi() && Formula(node_->right).is_psi();
    default:
      return false;
  }
}

namespace {

bool node_equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::Pred:
    case Formula::Kind::NotPred:
      return a.predicate() == b.predicate();
    case Formula::Kind::And:
      return node_equal(a.left(), b.left()) && node_equal(a.right(), b.right());
    case Formula::Kind::Always:
    case Formula::Kind::Eventually:
      return a.interval() == b.interval() && node_equal(a.left(), b.left());
    case Formula::Kind::Until:
      return a.interval() == b.interval() && node_equal(a.left(), b.left()) &&
             node_equal(a.right(), b.right());
  }
  return false;
}

}  // namespace

bool Formula::operator==(const Formula& other) const {
  return node_equal(*this, other);
}

double horizon(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::Pred:
    case Formula::Kind::NotPred:
      return 0.0;
    case Formula::Kind::And:
      return std::max(horizon(f.left()), horizon(f.right()));
    case Formula::Kind::Always:
    case Formula::Kind::Eventually:
      return f.interval().b + horizon(f.left());
    case Formula::Kind::Until:
      return f.interval().b + std::max(horizon(f.left()), horizon(f.right()));
  }
  return 0.0;
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_vec(const Eigen::Vector2d& v) {
  return "[" + format_number(v.x()) + "," + format_number(v.y()) + "]";
}

std::string format_pred(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::BallReach:
      return "ball(" + format_vec(p.center) + ", " + format_number(p.epsilon) + ")";
    case Predicate::Kind::Clearance:
      return "clear(" + p.obstacle_id + ", " + format_number(p.safe_distance) + ")";
    case Predicate::Kind::Halfspace:
      return "half(" + format_vec(p.normal) + ", " + format_number(p.offset) + ")";
  }
  return "?";
}

std::string format_interval(const Interval& iv) {
  return "[" + format_number(iv.a) + "," + format_number(iv.b) + "]";
}

}  // namespace

std::string format_formula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return "true";
    case Formula::Kind::Pred:
      return format_pred(f.predicate());
    case Formula::Kind::NotPred:
      return "!" + format_pred(f.predicate());
    case Formula::Kind::And:
      return "(" + format_formula(f.left()) + ") && (" + format_formula(f.right()) + ")";
    case Formula::Kind::Always:
      return "G" + format_interval(f.interval()) + "(" + format_formula(f.left()) + ")";
    case Formula::Kind::Eventually:
      return "F" + format_interval(f.interval()) + "(" + format_formula(f.left()) + ")";
    case Formula::Kind::Until:
      return "(" + format_formula(f.left()) + ") U" + format_interval(f.interval()) +
             " (" + format_formula(f.right()) + ")";
  }
  return "?";
}

}  // namespace stlcbf
