#include <random>

#include "doctest.h"
#include "stlcbf/parser.hpp"
#include "stlcbf/semantics.hpp"
#include "test_helpers.hpp"

using namespace stlcbf;

namespace {

Signal line_signal(double t_end, double dt, double x0, double vx) {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  for (double t = 0.0; t <= t_end + 1e-9; t += dt) {
    Eigen::VectorXd s(3);
    s << x0 + vx * t, 0.0, 0.0;
    times.push_back(t);
    states.push_back(s);
  }
  return Signal(std::move(times), std::move(states));
}

}  // namespace

TEST_CASE("eventually satisfied by a mid-window crossing") {
  // Enters the ball around t = 6.51 moving at 1.382 m/s from 9 m out.
  const Formula f = parse_formula("F[0,10](ball([9,0], 0.2))");
  const Signal s = line_signal(10.0, 0.01, 0.0, (9.0 - 0.2 + 0.2) / 6.51);
  CHECK(eval_boolean(f, s, 0.0));
}

TEST_CASE("always over the window, and windows exclude outside samples") {
  const Formula g = parse_formula("G[2,4](half([1,0], 5))");
  const Signal inside = line_signal(5.0, 0.1, 0.0, 0.5);   // x <= 2.5 < 5
  CHECK(eval_boolean(g, inside, 0.0));
  const Signal breach = line_signal(5.0, 0.1, 0.0, 2.0);   // x = 5 at t = 2.5
  CHECK_FALSE(eval_boolean(g, breach, 0.0));

  // mu true only at t=4 does not satisfy F[5,6]
  const Formula f = parse_formula("F[5,6](ball([4,0], 0.5))");
  const Signal s = line_signal(6.0, 1.0, 0.0, 1.0);  // at x=4 only at t=4
  CHECK_FALSE(eval_boolean(f, s, 0.0));
}

TEST_CASE("signal too short raises") {
  const Formula f = parse_formula("F[0,10](ball([9,0], 0.2))");
  const Signal s = line_signal(4.0, 0.1, 0.0, 1.0);
  CHECK_THROWS_AS(eval_boolean(f, s, 0.0), SignalError);
  CHECK_THROWS_AS(eval_robustness(f, s, 0.0), SignalError);
}

TEST_CASE("robustness of predicates and negation") {
  const Signal s = line_signal(1.0, 0.5, 3.0, 0.0);
  const Formula mu = parse_formula("ball([3,0], 1)");
  CHECK(eval_robustness(mu, s, 0.0) == doctest::Approx(1.0));
  const Formula nmu = parse_formula("!ball([3,0], 1)");
  CHECK(eval_robustness(nmu, s, 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("conjunction robustness is the min of the conjuncts") {
  const Signal s = line_signal(1.0, 0.5, 0.0, 0.0);
  // h1 = 0.3 (ball eps 0.3 at center), h2 = 0.1
  const Formula f = parse_formula("ball([0,0], 0.3) && ball([0,0], 0.1)");
  const double lhs = eval_robustness(parse_formula("ball([0,0], 0.3)"), s, 0.0);
  const double rhs = eval_robustness(parse_formula("ball([0,0], 0.1)"), s, 0.0);
  CHECK(eval_robustness(f, s, 0.0) == doctest::Approx(std::min(lhs, rhs)));
  CHECK(eval_robustness(f, s, 0.0) == doctest::Approx(0.1));
}

TEST_CASE("until max-min form on a hand signal") {
  // left: stay below x=5; right: reach ball at x=3
  const Formula f = parse_formula("(half([1,0], 5)) U[0,4] (ball([3,0], 0.4))");
  const Signal s = line_signal(4.0, 0.5, 0.0, 1.0);
  CHECK(eval_boolean(f, s, 0.0));
  // brute-force the max-min form
  double best = -1e300;
  for (std::size_t j = 0; j <= 8; ++j) {  // t1 = 0.5*j in [0,4]
    const double t1 = 0.5 * j;
    double cand = 0.4 - std::abs(3.0 - t1);
    for (std::size_t k = 0; k <= j; ++k) cand = std::min(cand, 5.0 - 0.5 * k);
    best = std::max(best, cand);
  }
  CHECK(eval_robustness(f, s, 0.0) == doctest::Approx(best));
}

TEST_CASE("F/G robustness equals the brute-force window fold") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Signal s = testutil::random_signal(rng, 8.0);
    const Predicate p = testutil::random_static_pred(rng);
    std::uniform_real_distribution<double> a0(0.0, 3.0), dur(0.5, 4.0);
    const double a = a0(rng);
    const Interval iv(a, a + dur(rng));
    const Formula fe = Formula::eventually(iv, Formula::pred(p));
    const Formula fg = Formula::always(iv, Formula::pred(p));

    double mx = -1e300, mn = 1e300;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.time(i) < iv.a - s.slack() || s.time(i) > iv.b + s.slack()) continue;
      const double h = eval_predicate(p, s.state(i), s.time(i), nullptr);
      mx = std::max(mx, h);
      mn = std::min(mn, h);
    }
    CHECK(eval_robustness(fe, s, 0.0) == doctest::Approx(mx));
    CHECK(eval_robustness(fg, s, 0.0) == doctest::Approx(mn));
  }
}

TEST_CASE("soundness: rho > 0 implies true and true implies rho >= 0") {
  std::mt19937 rng(23);
  int positive_cases = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Formula f = testutil::random_fragment_formula(rng);
    const Signal s = testutil::random_signal(rng, horizon(f) + 1.0);
    const bool sat = eval_boolean(f, s, 0.0);
    const double rho = eval_robustness(f, s, 0.0);
    if (rho > 0.0) {
      CHECK(sat);
      ++positive_cases;
    }
    if (sat) CHECK(rho >= 0.0);
  }
  CHECK(positive_cases > 20);  // the generator produces a healthy mix
}

TEST_CASE("three-valued verdict on truncated logs") {
  const Formula f = parse_formula("F[0,10](ball([3,0], 0.5))");
  // Satisfied early: log stops at t=5 but the witness exists.
  const Signal hit = line_signal(5.0, 0.1, 0.0, 1.0);
  CHECK(monitor_verdict(f, hit, 0.0) == Verdict::Satisfied);
  // No witness yet and window not covered: undetermined.
  const Signal miss = line_signal(5.0, 0.1, 10.0, 1.0);
  CHECK(monitor_verdict(f, miss, 0.0) == Verdict::Undetermined);
  // Window fully covered and no witness: violated.
  const Signal full = line_signal(11.0, 0.1, 10.0, 1.0);
  CHECK(monitor_verdict(f, full, 0.0) == Verdict::Violated);
  // Complete signals agree with the two-valued monitor.
  std::mt19937 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Formula rf = testutil::random_fragment_formula(rng);
    const Signal s = testutil::random_signal(rng, horizon(rf) + 1.0);
    const Verdict v = monitor_verdict(rf, s, 0.0);
    CHECK(v == (eval_boolean(rf, s, 0.0) ? Verdict::Satisfied : Verdict::Violated));
  }
}
