#include <cmath>
#include <limits>
#include <vector>

#include "catch2/catch_amalgamated.hpp"

#include "hcx/quadratic_hidden.hpp"
#include "support/oracles.hpp"

using hcx::ConvexSetDescriptor;
using hcx::QuadraticProblem;
using hcx::SymMatrix;

namespace {

SymMatrix random_sym(hcx::detail::Rng& g, std::size_t d) {
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      const auto roll = g.next() % 4;
      m.set(i, j, roll == 0 ? 0.0 : g.uniform(-2.0, 2.0));
    }
  return m;
}

std::vector<double> random_vec(hcx::detail::Rng& g, std::size_t d, double lo, double hi) {
  std::vector<double> v(d);
  for (double& x : v) x = g.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("symmetric matrix storage") {
  SymMatrix m(3);
  m.set(0, 2, 1.5);
  REQUIRE(m(2, 0) == 1.5);
  REQUIRE(m(0, 2) == 1.5);
  REQUIRE(m(1, 1) == 0.0);
  REQUIRE_THROWS_AS(m.set(0, 3, 1.0), std::out_of_range);
  REQUIRE_THROWS_AS(m.set(0, 0, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  REQUIRE_THROWS_AS(SymMatrix(0), std::invalid_argument);

  const std::vector<double> upper = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const SymMatrix u = SymMatrix::from_upper(3, upper);
  REQUIRE(u(0, 1) == 2.0);
  REQUIRE(u(1, 0) == 2.0);
  REQUIRE(u(2, 2) == 6.0);
  REQUIRE(u.upper() == upper);
  REQUIRE_THROWS_AS(SymMatrix::from_upper(3, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("quadratic evaluation matches the written-out sum") {
  hcx::detail::Rng g(401);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + g.index(5);
    const SymMatrix m = random_sym(g, d);
    const auto b = random_vec(g, d, -2.0, 2.0);
    const auto x = random_vec(g, d, -3.0, 3.0);
    REQUIRE(hcx::q_eval(m, b, x) == Catch::Approx(oracles::quad_value(m, b, x)).margin(1e-12));
  }
  REQUIRE_THROWS_AS(hcx::q_eval(SymMatrix(2), {0.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("square map") {
  REQUIRE(hcx::square_map({-2.0, 0.5, 0.0}) == std::vector<double>{4.0, 0.25, 0.0});
}

TEST_CASE("exact fiber minimum equals brute-force sign enumeration") {
  hcx::detail::Rng g(402);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + g.index(6);
    const SymMatrix m = random_sym(g, d);
    const auto b = random_vec(g, d, -2.0, 2.0);
    auto y = random_vec(g, d, 0.0, 4.0);
    if (g.coin()) y[g.index(d)] = 0.0;
    const double mine = hcx::cond_inf_exact(m, b, y);
    const double ref = oracles::brute_fiber_min(m, b, y);
    REQUIRE(mine == Catch::Approx(ref).margin(1e-10));
  }
  REQUIRE_THROWS_AS(hcx::cond_inf_exact(SymMatrix(1), {0.0}, {-0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::cond_inf_exact(SymMatrix(26), std::vector<double>(26, 0.0),
                                        std::vector<double>(26, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("sign pattern search agrees with exhaustive search on existence") {
  hcx::detail::Rng g(403);
  std::size_t found = 0, missing = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t d = 1 + g.index(6);
    const SymMatrix m = random_sym(g, d);
    std::vector<double> b(d);
    for (double& v : b) v = (g.next() % 3 == 0) ? 0.0 : g.uniform(-2.0, 2.0);
    const auto mine = hcx::find_sign_pattern(m, b);
    const auto ref = oracles::exhaustive_sign_pattern(m, b);
    REQUIRE(mine.has_value() == ref.has_value());
    if (mine) {
      REQUIRE(oracles::signs_ok(m, b, mine->eps));
      REQUIRE(hcx::sign_pattern_is_valid(m, b, mine->eps));
      ++found;
    } else {
      ++missing;
    }
  }
  REQUIRE(found > 20);
  REQUIRE(missing > 20);
}

TEST_CASE("sign pattern hand cases") {
  // all couplings negative: the all-plus vector works
  SymMatrix m(2);
  m.set(0, 1, -1.0);
  auto s = hcx::find_sign_pattern(m, {-1.0, 0.0});
  REQUIRE(s.has_value());
  REQUIRE(s->eps == std::vector<int>{1, 1});

  // positive coupling forces opposite signs; b pins the first coordinate
  m.set(0, 1, 2.0);
  s = hcx::find_sign_pattern(m, {-1.0, 0.0});
  REQUIRE(s.has_value());
  REQUIRE(s->eps == std::vector<int>{1, -1});

  // conflicting requirements: both b entries want +1, the coupling wants a flip
  REQUIRE_FALSE(hcx::find_sign_pattern(m, {-1.0, -1.0}).has_value());

  // frustrated triangle with no linear term
  SymMatrix t(3);
  t.set(0, 1, 1.0);
  t.set(0, 2, 1.0);
  t.set(1, 2, 1.0);
  REQUIRE_FALSE(hcx::find_sign_pattern(t, {0.0, 0.0, 0.0}).has_value());

  // unconstrained coordinates resolve to +1
  const auto free = hcx::find_sign_pattern(SymMatrix(3), {0.0, 0.0, 0.0});
  REQUIRE(free->eps == std::vector<int>{1, 1, 1});
}

TEST_CASE("surrogate minorizes the exact fiber minimum and is tight when signable") {
  hcx::detail::Rng g(404);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + g.index(4);
    const SymMatrix m = random_sym(g, d);
    const auto b = random_vec(g, d, -2.0, 2.0);
    const auto y = random_vec(g, d, 0.0, 4.0);
    const double sur = hcx::surrogate_value(m, b, y);
    const double exact = hcx::cond_inf_exact(m, b, y);
    const double slack = 1e-9 * (1.0 + std::abs(exact));
    REQUIRE(sur <= exact + slack);
    if (hcx::find_sign_pattern(m, b)) REQUIRE(sur == Catch::Approx(exact).margin(1e-9));
  }
}

TEST_CASE("surrogate worked example in one dimension") {
  SymMatrix m(1);
  m.set(0, 0, 1.0);
  const std::vector<double> b = {-2.0};
  REQUIRE(hcx::surrogate_value(m, b, {4.0}) == 0.0);
  REQUIRE(hcx::cond_inf_exact(m, b, {4.0}) == 0.0);
  const auto grad = hcx::surrogate_subgradient(m, b, {4.0}, 0.0);
  REQUIRE(grad.size() == 1);
  REQUIRE(grad[0] == 0.5);
  REQUIRE(hcx::surrogate_eval(m, b, {-1.0}).is_pos_inf());
  REQUIRE(hcx::surrogate_eval(m, b, {4.0}) == hcx::ExtReal(0.0));
}

TEST_CASE("smoothed surrogate converges to the exact one and is differentiable") {
  hcx::detail::Rng g(405);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + g.index(3);
    const SymMatrix m = random_sym(g, d);
    const auto b = random_vec(g, d, -2.0, 2.0);
    const auto y = random_vec(g, d, 0.1, 3.0);
    REQUIRE(hcx::surrogate_value_smoothed(m, b, y, 0.0) ==
            Catch::Approx(hcx::surrogate_value(m, b, y)).margin(1e-12));
    // each smoothed sqrt sits within sqrt(mu) of the exact one, so the gap is
    // bounded by sqrt(mu) times the total weight on the sqrt terms
    double weight = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      weight += std::abs(b[i]);
      for (std::size_t j = i + 1; j < d; ++j) weight += 2.0 * std::abs(m(i, j));
    }
    REQUIRE(std::abs(hcx::surrogate_value_smoothed(m, b, y, 1e-8) -
                     hcx::surrogate_value(m, b, y)) <= 1e-4 * (weight + 1e-6));
    for (double mu : {1e-3, 1e-6, 0.0}) {
      const auto grad = hcx::surrogate_subgradient(m, b, y, mu);
      const auto ref = oracles::central_difference(
          [&](const std::vector<double>& z) { return hcx::surrogate_value_smoothed(m, b, z, mu); },
          y, 1e-7);
      for (std::size_t k = 0; k < d; ++k)
        REQUIRE(grad[k] == Catch::Approx(ref[k]).margin(2e-4));
    }
  }
  REQUIRE_THROWS_AS(hcx::surrogate_subgradient(SymMatrix(1), {1.0}, {0.0}, 0.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::surrogate_subgradient(SymMatrix(1), {1.0}, {1.0}, -1.0),
                    std::invalid_argument);
}

TEST_CASE("convexity certificate: signable instances are certified convex") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 2.0);
  m.set(0, 1, -0.5);
  const auto cert = hcx::convexity_certificate(m, {-1.0, 0.0}, 1, 1000);
  REQUIRE(cert.verdict == hcx::ConvexityCertificate::Verdict::convex);
  REQUIRE(cert.sign.has_value());
  REQUIRE(cert.samples_used == 0);
}

TEST_CASE("convexity certificate: a frustrated instance yields a checked witness") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 1.0);
  m.set(0, 1, 1.0);
  const std::vector<double> b = {-1.0, -1.0};
  REQUIRE_FALSE(hcx::find_sign_pattern(m, b).has_value());
  const auto cert = hcx::convexity_certificate(m, b, 1, 50000);
  REQUIRE(cert.verdict == hcx::ConvexityCertificate::Verdict::violation_found);
  REQUIRE(cert.witness.has_value());
  const auto& w = *cert.witness;
  REQUIRE(w.value1 == Catch::Approx(oracles::brute_fiber_min(m, b, w.y1)).margin(1e-10));
  REQUIRE(w.value2 == Catch::Approx(oracles::brute_fiber_min(m, b, w.y2)).margin(1e-10));
  REQUIRE(w.value_mid == Catch::Approx(oracles::brute_fiber_min(m, b, w.midpoint)).margin(1e-10));
  REQUIRE(w.value_mid > 0.5 * (w.value1 + w.value2));
  REQUIRE(cert.samples_used >= 1);
  REQUIRE(cert.samples_used <= 50000);
}

TEST_CASE("solve: one-dimensional box instance hits the known optimum") {
  SymMatrix m(1);
  m.set(0, 0, 1.0);
  const QuadraticProblem p(m, {-2.0}, ConvexSetDescriptor::box({0.0}, {9.0}));
  const auto rep = hcx::solve(p);
  REQUIRE(rep.status == hcx::SolveStatus::signable);
  REQUIRE(rep.sign->eps == std::vector<int>{1});
  REQUIRE(std::abs(rep.surrogate_value - (-1.0)) <= 1e-6);
  REQUIRE(std::abs(rep.y_star[0] - 1.0) <= 1e-3);
  REQUIRE(std::abs(rep.x_star[0] - 1.0) <= 1e-3);
  REQUIRE(std::abs(rep.q_at_x_star - rep.surrogate_value) <= 1e-9);
  REQUIRE(rep.feasibility_residual <= 1e-8);
  REQUIRE(rep.converged);
}

TEST_CASE("solve: lifted point evaluates to the surrogate value exactly") {
  hcx::detail::Rng g(406);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 1 + g.index(3);
    SymMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
      m.set(i, i, g.uniform(0.5, 2.0));
      for (std::size_t j = i + 1; j < d; ++j) m.set(i, j, g.uniform(-0.2, 0.2));
    }
    std::vector<double> b(d);
    for (double& v : b) v = g.uniform(-2.0, 2.0);
    if (!hcx::find_sign_pattern(m, b)) continue;
    const QuadraticProblem p(m, b,
                             ConvexSetDescriptor::box(std::vector<double>(d, 0.0),
                                                      std::vector<double>(d, 4.0)));
    const auto rep = hcx::solve(p);
    REQUIRE(rep.status == hcx::SolveStatus::signable);
    const double tol = 1e-9 * (1.0 + std::abs(rep.surrogate_value));
    REQUIRE(std::abs(rep.q_at_x_star - rep.surrogate_value) <= tol);
    REQUIRE(rep.feasibility_residual <= 1e-8);
    REQUIRE(hcx::surrogate_value(p.m, p.b, rep.y_star) ==
            Catch::Approx(rep.surrogate_value).margin(1e-12));
  }
}

TEST_CASE("solve: box optimum matches the exhaustive grid within tolerance") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 2.0);
  m.set(0, 1, -1.0);
  const std::vector<double> b = {-1.0, 0.0};
  const QuadraticProblem p(m, b, ConvexSetDescriptor::box({0.0, 0.0}, {4.0, 4.0}));
  const auto rep = hcx::solve(p);
  const auto grid = hcx::oracle_grid(p, 401, {4.0, 4.0});
  REQUIRE(rep.surrogate_value <= grid.value + 1e-6);
  REQUIRE(rep.surrogate_value >= grid.value - 0.01);
}

TEST_CASE("solve: band instance stays feasible and beats the grid") {
  SymMatrix m(2);
  m.set(0, 0, 1.5);
  m.set(1, 1, 1.0);
  m.set(0, 1, -0.25);
  const std::vector<double> b = {-2.0, -1.0};
  const QuadraticProblem p(m, b, ConvexSetDescriptor::band({1.0, 1.0}, 0.5, 2.0));
  REQUIRE(hcx::find_sign_pattern(m, b).has_value());
  const auto rep = hcx::solve(p);
  REQUIRE(rep.status == hcx::SolveStatus::signable);
  REQUIRE(rep.feasibility_residual <= 1e-8);
  const auto grid = hcx::oracle_grid(p, 801, {2.0, 2.0});
  REQUIRE(rep.surrogate_value <= grid.value + 1e-6);
  REQUIRE(rep.surrogate_value >= grid.value - 0.01);
}

TEST_CASE("solve: non-signable input reports without inventing a point") {
  SymMatrix m(2);
  m.set(0, 1, 1.0);
  const QuadraticProblem p(m, {-1.0, -1.0},
                           ConvexSetDescriptor::box({0.0, 0.0}, {1.0, 1.0}));
  const auto rep = hcx::solve(p);
  REQUIRE(rep.status == hcx::SolveStatus::not_signable);
  REQUIRE_FALSE(rep.sign.has_value());
  REQUIRE(rep.y_star.empty());
  REQUIRE(rep.x_star.empty());
}

TEST_CASE("solve: empty feasible set fails loudly") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  const QuadraticProblem p(m, {0.0, 0.0},
                           ConvexSetDescriptor::box({-3.0, -3.0}, {-1.0, -1.0}));
  REQUIRE_THROWS_AS(hcx::solve(p), hcx::InfeasibleSetError);
}

TEST_CASE("solve is deterministic for a fixed seed") {
  SymMatrix m(3);
  m.set(0, 0, 1.0);
  m.set(1, 1, 1.5);
  m.set(2, 2, 0.75);
  m.set(0, 1, -0.1);
  m.set(1, 2, 0.15);
  const QuadraticProblem p(m, {-1.0, 0.5, -0.25},
                           ConvexSetDescriptor::box({0.0, 0.0, 0.0}, {3.0, 3.0, 3.0}));
  hcx::SolveParams params;
  params.seed = 11;
  const auto a = hcx::solve(p, params);
  const auto b = hcx::solve(p, params);
  REQUIRE(a.y_star == b.y_star);
  REQUIRE(a.x_star == b.x_star);
  REQUIRE(a.surrogate_value == b.surrogate_value);
  REQUIRE(a.iterations == b.iterations);
}

TEST_CASE("grid oracle: exact on an aligned one-dimensional instance") {
  SymMatrix m(1);
  m.set(0, 0, 1.0);
  const QuadraticProblem p(m, {-2.0}, ConvexSetDescriptor::box({0.0}, {9.0}));
  const auto res = hcx::oracle_grid(p, 10, {9.0});
  REQUIRE(res.total_points == 10);
  REQUIRE(res.feasible_points == 10);
  REQUIRE(res.value == -1.0);
  REQUIRE(res.y == std::vector<double>{1.0});
}

TEST_CASE("grid oracle: membership widens with the grid step") {
  SymMatrix m(1);
  m.set(0, 0, 1.0);
  const QuadraticProblem p(m, {0.0}, ConvexSetDescriptor::box({0.0}, {0.44}));
  const auto res = hcx::oracle_grid(p, 11, {1.0});
  REQUIRE(res.total_points == 11);
  REQUIRE(res.feasible_points == 5);  // includes 0.4, excludes 0.5 at half-step slack
  REQUIRE(res.y == std::vector<double>{0.0});
}

TEST_CASE("grid oracle: ties go to the lexicographically smallest point") {
  const QuadraticProblem p(SymMatrix(2), {0.0, 0.0},
                           ConvexSetDescriptor::box({0.0, 0.0}, {1.0, 1.0}));
  const auto res = hcx::oracle_grid(p, 5, {1.0, 1.0});
  REQUIRE(res.value == 0.0);
  REQUIRE(res.y == std::vector<double>{0.0, 0.0});
}

TEST_CASE("grid oracle: guards") {
  SymMatrix m(1);
  m.set(0, 0, 1.0);
  const QuadraticProblem p(m, {0.0}, ConvexSetDescriptor::box({0.0}, {1.0}));
  REQUIRE_THROWS_AS(hcx::oracle_grid(p, 1, {1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::oracle_grid(p, 10, {1.0, 1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::oracle_grid(p, 10, {-1.0}), std::invalid_argument);

  const QuadraticProblem big(SymMatrix(7), std::vector<double>(7, 0.0),
                             ConvexSetDescriptor::box(std::vector<double>(7, 0.0),
                                                      std::vector<double>(7, 1.0)));
  REQUIRE_THROWS_AS(hcx::oracle_grid(big, 3, std::vector<double>(7, 1.0)), std::invalid_argument);

  const QuadraticProblem wide(SymMatrix(3), std::vector<double>(3, 0.0),
                              ConvexSetDescriptor::box(std::vector<double>(3, 0.0),
                                                       std::vector<double>(3, 1.0)));
  REQUIRE_THROWS_AS(hcx::oracle_grid(wide, 4001, std::vector<double>(3, 1.0)),
                    std::invalid_argument);

  SymMatrix m2(2);
  const QuadraticProblem far(m2, {0.0, 0.0}, ConvexSetDescriptor::ball({10.0, 10.0}, 0.1));
  REQUIRE_THROWS_AS(hcx::oracle_grid(far, 3, {1.0, 1.0}), hcx::InfeasibleSetError);
}

TEST_CASE("grid oracle agrees with brute fiber minima on random feasible instances") {
  hcx::detail::Rng g(407);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + g.index(2);
    SymMatrix m = random_sym(g, d);
    const auto b = random_vec(g, d, -1.5, 1.5);
    const QuadraticProblem p(m, b,
                             ConvexSetDescriptor::box(std::vector<double>(d, 0.0),
                                                      std::vector<double>(d, 2.0)));
    const auto res = hcx::oracle_grid(p, 41, std::vector<double>(d, 2.0));
    // recompute the reported value independently
    REQUIRE(res.value == Catch::Approx(oracles::brute_fiber_min(m, b, res.y)).margin(1e-10));
    // scanning a strictly finer grid can only improve or match
    const auto fine = hcx::oracle_grid(p, 81, std::vector<double>(d, 2.0));
    REQUIRE(fine.value <= res.value + 1e-12);
  }
}

TEST_CASE("direction example: closed form equals the one-dimensional reference") {
  hcx::detail::Rng g(408);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + g.index(4), cols = 1 + g.index(4);
    std::vector<double> data(rows * cols);
    for (double& v : data) v = g.uniform(-2.0, 2.0);
    const hcx::DenseMatrix a(rows, cols, data);
    std::vector<double> b(rows), x(cols, 0.0);
    for (double& v : b) v = g.uniform(-2.0, 2.0);
    if (trial % 4 != 0)
      for (double& v : x) v = g.uniform(-2.0, 2.0);
    const double closed = hcx::direction_example_eval(a, b, x);
    const double ref = hcx::direction_oracle_1d(a, b, x);
    REQUIRE(closed == Catch::Approx(ref).margin(1e-9 * (1.0 + std::abs(ref))));
  }
}

TEST_CASE("direction example: kernel directions give the full norm") {
  const hcx::DenseMatrix a(1, 2, {1.0, -1.0});
  const std::vector<double> b = {3.0};
  REQUIRE(hcx::direction_example_eval(a, b, {1.0, 1.0}) == Catch::Approx(9.0));
  REQUIRE(hcx::direction_oracle_1d(a, b, {1.0, 1.0}) == Catch::Approx(9.0));
  // a direction aligned with b zeroes the residual
  const hcx::DenseMatrix id(2, 2, {1.0, 0.0, 0.0, 1.0});
  REQUIRE(hcx::direction_example_eval(id, {2.0, 4.0}, {1.0, 2.0}) ==
          Catch::Approx(0.0).margin(1e-12));
  REQUIRE_THROWS_AS(hcx::direction_example_eval(id, {1.0}, {1.0, 1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::DenseMatrix(2, 2, {1.0}), std::invalid_argument);
}

TEST_CASE("hidden convexity report carries the surrogate coefficients") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 2.0);
  m.set(0, 1, -3.0);
  const QuadraticProblem p(m, {4.0, 0.0}, ConvexSetDescriptor::box({0.0, 0.0}, {1.0, 1.0}));
  const auto rep = hcx::hidden_convexity_report(p, 1, 100);
  REQUIRE(rep.signable);
  REQUIRE(rep.sign.has_value());
  REQUIRE(rep.surrogate_diagonal == std::vector<double>{1.0, 2.0});
  REQUIRE(rep.surrogate_cross == std::vector<double>{-6.0});
  REQUIRE(rep.surrogate_linear == std::vector<double>{-4.0, 0.0});

  SymMatrix frustrated(2);
  frustrated.set(0, 1, 1.0);
  const QuadraticProblem q(frustrated, {-1.0, -1.0},
                           ConvexSetDescriptor::box({0.0, 0.0}, {1.0, 1.0}));
  const auto bad = hcx::hidden_convexity_report(q, 1, 50000);
  REQUIRE_FALSE(bad.signable);
  REQUIRE(bad.certificate.verdict == hcx::ConvexityCertificate::Verdict::violation_found);
}
