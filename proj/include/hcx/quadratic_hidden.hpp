#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcx/convex_solver.hpp"
#include "hcx/detail/rng.hpp"
#include "hcx/ext_real.hpp"

namespace hcx {

/// Symmetric d x d matrix stored densely; writes mirror automatically.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim) : d_(dim), a_(dim * dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("SymMatrix: dimension must be positive");
  }

  /// Builds from the row-major upper triangle (length d(d+1)/2).
  static SymMatrix from_upper(std::size_t dim, const std::vector<double>& upper) {
    SymMatrix m(dim);
    if (upper.size() != dim * (dim + 1) / 2)
      throw std::invalid_argument("SymMatrix: upper triangle has wrong length");
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) m.set(i, j, upper[k++]);
    return m;
  }

  std::size_t dim() const { return d_; }

  double operator()(std::size_t i, std::size_t j) const {
    if (i >= d_ || j >= d_) throw std::out_of_range("SymMatrix: index out of bounds");
    return a_[i * d_ + j];
  }

  void set(std::size_t i, std::size_t j, double v) {
    if (i >= d_ || j >= d_) throw std::out_of_range("SymMatrix: index out of bounds");
    if (!std::isfinite(v)) throw std::invalid_argument("SymMatrix: entries must be finite");
    a_[i * d_ + j] = v;
    a_[j * d_ + i] = v;
  }

  std::vector<double> upper() const {
    std::vector<double> out;
    out.reserve(d_ * (d_ + 1) / 2);
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i; j < d_; ++j) out.push_back(a_[i * d_ + j]);
    return out;
  }

 private:
  std::size_t d_;
  std::vector<double> a_;
};

/// x' M x + b . x.
inline double q_eval(const SymMatrix& m, const std::vector<double>& b, const std::vector<double>& x) {
  const std::size_t d = m.dim();
  if (b.size() != d || x.size() != d) throw std::invalid_argument("q_eval: dimension mismatch");
  double out = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    out += b[i] * x[i];
    for (std::size_t j = 0; j < d; ++j) out += x[i] * m(i, j) * x[j];
  }
  return out;
}

inline std::vector<double> square_map(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i];
  return out;
}

/// Exact value of the quadratic minimized over the fiber of the square map
/// at y: the minimum of q over all sign choices of (+-sqrt(y_i)). Costs
/// 2^d evaluations; guarded at d <= 25. Requires y >= 0.
inline double cond_inf_exact(const SymMatrix& m, const std::vector<double>& b,
                             const std::vector<double>& y) {
  const std::size_t d = m.dim();
  if (b.size() != d || y.size() != d) throw std::invalid_argument("cond_inf_exact: dimension mismatch");
  if (d > 25) throw std::invalid_argument("cond_inf_exact: dimension exceeds the exhaustive budget");
  for (double yi : y)
    if (!(yi >= 0.0)) throw std::invalid_argument("cond_inf_exact: y must be componentwise nonnegative");

  std::vector<double> u(d);
  double base = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    u[i] = std::sqrt(y[i]);
    base += m(i, i) * y[i];
  }
  struct Cross { std::size_t i, j; double c; };
  std::vector<Cross> cross;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double c = 2.0 * m(i, j) * u[i] * u[j];
      if (c != 0.0) cross.push_back({i, j, c});
    }
  std::vector<double> lin(d);
  for (std::size_t i = 0; i < d; ++i) lin[i] = b[i] * u[i];

  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    double val = base;
    for (const auto& t : cross) {
      const bool flip = (((mask >> t.i) ^ (mask >> t.j)) & 1u) != 0;
      val += flip ? -t.c : t.c;
    }
    for (std::size_t i = 0; i < d; ++i) val += ((mask >> i) & 1u) ? -lin[i] : lin[i];
    best = std::min(best, val);
  }
  return best;
}

struct SignPattern {
  std::vector<int> eps;  // entries +1 / -1
};

/// eps_i b_i <= 0 for all i and eps_i eps_j M_ij <= 0 for all i != j.
inline bool sign_pattern_is_valid(const SymMatrix& m, const std::vector<double>& b,
                                  const std::vector<int>& eps) {
  const std::size_t d = m.dim();
  if (b.size() != d || eps.size() != d) throw std::invalid_argument("sign_pattern_is_valid: dimension mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    if (eps[i] != 1 && eps[i] != -1) return false;
    if (eps[i] * b[i] > 0.0) return false;
    for (std::size_t j = i + 1; j < d; ++j)
      if (eps[i] * eps[j] * m(i, j) > 0.0) return false;
  }
  return true;
}

namespace detail {

/// Union-find over sign variables with parity edges ("same sign" / "opposite
/// sign"). A virtual node pinned to +1 carries the constraints coming from b.
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0), rank_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  // returns (root, parity of x relative to root)
  std::pair<std::size_t, unsigned> find(std::size_t x) {
    unsigned p = 0;
    std::size_t root = x;
    while (parent_[root] != root) {
      p ^= parity_[root];
      root = parent_[root];
    }
    // path compression, recomputing parities along the chain
    std::size_t cur = x;
    unsigned cur_p = p;
    while (parent_[cur] != root) {
      const std::size_t next = parent_[cur];
      const unsigned next_p = cur_p ^ parity_[cur];
      parent_[cur] = root;
      parity_[cur] = cur_p;
      cur = next;
      cur_p = next_p;
    }
    return {root, p};
  }

  /// Imposes sign(x) = sign(y) xor parity. False on contradiction.
  bool unite(std::size_t x, std::size_t y, unsigned parity) {
    auto [rx, px] = find(x);
    auto [ry, py] = find(y);
    if (rx == ry) return (px ^ py) == parity;
    if (rank_[rx] > rank_[ry]) {
      std::swap(rx, ry);
      std::swap(px, py);
    }
    parent_[rx] = ry;
    parity_[rx] = px ^ py ^ parity;
    if (rank_[rx] == rank_[ry]) ++rank_[ry];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> parity_;
  std::vector<unsigned> rank_;
};

inline std::vector<double> clamp_nonnegative(const std::vector<double>& y) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(y[i], 0.0);
  return out;
}

}  // namespace detail

/// Searches for a sign vector eps with eps_i b_i <= 0 and eps_i eps_j M_ij <= 0
/// for i != j. This is a parity-constrained two-coloring, solved by union-find
/// in near-linear time; nullopt means no such vector exists. Components left
/// unconstrained resolve to +1, so the result is deterministic.
inline std::optional<SignPattern> find_sign_pattern(const SymMatrix& m,
                                                    const std::vector<double>& b) {
  const std::size_t d = m.dim();
  if (b.size() != d) throw std::invalid_argument("find_sign_pattern: dimension mismatch");
  detail::ParityUnionFind uf(d + 1);  // node d is the virtual +1 anchor
  for (std::size_t i = 0; i < d; ++i) {
    if (b[i] > 0.0) {
      if (!uf.unite(i, d, 1)) return std::nullopt;
    } else if (b[i] < 0.0) {
      if (!uf.unite(i, d, 0)) return std::nullopt;
    }
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      if (m(i, j) > 0.0) {
        if (!uf.unite(i, j, 1)) return std::nullopt;
      } else if (m(i, j) < 0.0) {
        if (!uf.unite(i, j, 0)) return std::nullopt;
      }
    }
  const auto [anchor_root, anchor_parity] = uf.find(d);
  SignPattern out;
  out.eps.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto [root, parity] = uf.find(i);
    int root_value = 1;
    if (root == anchor_root) root_value = (anchor_parity == 0) ? 1 : -1;
    out.eps[i] = (parity == 0) ? root_value : -root_value;
  }
  if (!sign_pattern_is_valid(m, b, out.eps))
    throw std::logic_error("find_sign_pattern: produced an invalid pattern");
  return out;
}

/// Closed-form convex minorant of the fiber minimum:
/// sum M_ii y_i - sum_{i<j} 2|M_ij| sqrt(y_i y_j) - sum |b_i| sqrt(y_i).
/// Coincides with cond_inf_exact exactly when a sign pattern exists.
/// Requires y >= 0.
inline double surrogate_value(const SymMatrix& m, const std::vector<double>& b,
                              const std::vector<double>& y) {
  const std::size_t d = m.dim();
  if (b.size() != d || y.size() != d) throw std::invalid_argument("surrogate_value: dimension mismatch");
  for (double yi : y)
    if (!(yi >= 0.0)) throw std::invalid_argument("surrogate_value: y must be componentwise nonnegative");
  std::vector<double> u(d);
  double out = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    u[i] = std::sqrt(y[i]);
    out += m(i, i) * y[i] - std::abs(b[i]) * u[i];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) out -= 2.0 * std::abs(m(i, j)) * u[i] * u[j];
  return out;
}

/// Extended-real wrapper of surrogate_value: +inf off the orthant.
inline ExtReal surrogate_eval(const SymMatrix& m, const std::vector<double>& b,
                              const std::vector<double>& y) {
  const std::size_t d = m.dim();
  if (b.size() != d || y.size() != d) throw std::invalid_argument("surrogate_eval: dimension mismatch");
  for (double yi : y)
    if (yi < 0.0) return ExtReal::pos_inf();
  return ExtReal(surrogate_value(m, b, y));
}

/// Surrogate with every sqrt(t) replaced by sqrt(t + mu) - sqrt(mu); equals
/// the exact surrogate at mu = 0 and is differentiable on the whole orthant
/// for mu > 0.
inline double surrogate_value_smoothed(const SymMatrix& m, const std::vector<double>& b,
                                       const std::vector<double>& y, double mu) {
  const std::size_t d = m.dim();
  if (b.size() != d || y.size() != d)
    throw std::invalid_argument("surrogate_value_smoothed: dimension mismatch");
  if (mu < 0.0) throw std::invalid_argument("surrogate_value_smoothed: mu must be nonnegative");
  for (double yi : y)
    if (!(yi >= 0.0)) throw std::invalid_argument("surrogate_value_smoothed: y must be componentwise nonnegative");
  const double root_mu = std::sqrt(mu);
  double out = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    out += m(i, i) * y[i] - std::abs(b[i]) * (std::sqrt(y[i] + mu) - root_mu);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      out -= 2.0 * std::abs(m(i, j)) * (std::sqrt(y[i] * y[j] + mu) - root_mu);
  return out;
}

/// Gradient of the mu-smoothed surrogate. mu = 0 gives the exact gradient and
/// requires y strictly positive.
inline std::vector<double> surrogate_subgradient(const SymMatrix& m, const std::vector<double>& b,
                                                 const std::vector<double>& y, double mu) {
  const std::size_t d = m.dim();
  if (b.size() != d || y.size() != d)
    throw std::invalid_argument("surrogate_subgradient: dimension mismatch");
  if (mu < 0.0) throw std::invalid_argument("surrogate_subgradient: mu must be nonnegative");
  for (double yi : y) {
    if (!(yi >= 0.0)) throw std::invalid_argument("surrogate_subgradient: y must be componentwise nonnegative");
    if (mu == 0.0 && yi == 0.0)
      throw std::invalid_argument("surrogate_subgradient: mu = 0 needs strictly positive y");
  }
  std::vector<double> g(d);
  for (std::size_t k = 0; k < d; ++k) {
    double gk = m(k, k) - std::abs(b[k]) / (2.0 * std::sqrt(y[k] + mu));
    for (std::size_t j = 0; j < d; ++j) {
      if (j == k) continue;
      const double c = std::abs(m(k, j));
      if (c != 0.0) gk -= c * y[j] / std::sqrt(y[k] * y[j] + mu);
    }
    g[k] = gk;
  }
  return g;
}

struct ConvexityWitness {
  std::vector<double> y1, y2, midpoint;
  double value1 = 0.0, value2 = 0.0, value_mid = 0.0;
};

/// Either a sign pattern proving the fiber minimum convex, or a sampled
/// midpoint-convexity violation, or inconclusive after the sample budget.
struct ConvexityCertificate {
  enum class Verdict { convex, violation_found, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::optional<SignPattern> sign;
  std::optional<ConvexityWitness> witness;
  std::size_t samples_used = 0;
};

inline ConvexityCertificate convexity_certificate(const SymMatrix& m, const std::vector<double>& b,
                                                  std::uint64_t seed, std::size_t samples) {
  ConvexityCertificate out;
  if (auto eps = find_sign_pattern(m, b)) {
    out.verdict = ConvexityCertificate::Verdict::convex;
    out.sign = std::move(eps);
    return out;
  }
  const std::size_t d = m.dim();
  if (d > 25) return out;  // inconclusive: exact fiber values are out of reach

  std::size_t used = 0;
  auto check = [&](ConvexityWitness& w) {
    w.midpoint.resize(d);
    for (std::size_t i = 0; i < d; ++i) w.midpoint[i] = (w.y1[i] + w.y2[i]) / 2.0;
    w.value1 = cond_inf_exact(m, b, w.y1);
    w.value2 = cond_inf_exact(m, b, w.y2);
    w.value_mid = cond_inf_exact(m, b, w.midpoint);
    ++used;
    const double slack = 1e-9 * (1.0 + std::abs(w.value1) + std::abs(w.value2));
    if (w.value_mid > 0.5 * (w.value1 + w.value2) + slack) {
      out.verdict = ConvexityCertificate::Verdict::violation_found;
      out.witness = std::move(w);
      out.samples_used = used;
      return true;
    }
    return false;
  };

  // Directed probes first. When b pins the signs of both ends of a coupling
  // with the wrong sign, then past sqrt(y_j) = |b_i| / 2|M_ij| the fiber
  // minimum restricted to the (i, j) plane is -2|M_ij| sqrt(y_i y_j) minus
  // |b_i sqrt(y_i) - b_j sqrt(y_j)|, whose crease at sqrt(y_i) =
  // |b_j / b_i| sqrt(y_j) outweighs the smooth chord terms while sqrt(y_j)
  // stays under 4.6 |b_i| / 2|M_ij|. A straddling segment inside that window
  // is a certain witness.
  for (std::size_t i = 0; i < d && used < samples; ++i) {
    for (std::size_t j = 0; j < d && used < samples; ++j) {
      if (i == j) continue;
      const double c = 2.0 * std::abs(m(i, j));
      if (c == 0.0 || b[i] == 0.0 || b[j] == 0.0) continue;
      if (!(m(i, j) * b[i] * b[j] > 0.0)) continue;  // forced signs do not clash
      for (double fv : {1.5, 2.0, 3.0}) {
        if (used >= samples) break;
        const double v = fv * std::abs(b[i]) / c;
        const double uk = std::abs(b[j]) * v / std::abs(b[i]);
        const double kink = uk * uk;
        ConvexityWitness w;
        w.y1.assign(d, 0.0);
        w.y2.assign(d, 0.0);
        w.y1[i] = 0.25 * kink;
        w.y2[i] = 1.75 * kink;
        w.y1[j] = w.y2[j] = v * v;
        if (check(w)) return out;
      }
    }
  }

  detail::Rng g(detail::mix_seed(seed, 0x63657274ull));
  while (used < samples) {
    ConvexityWitness w;
    w.y1.resize(d);
    w.y2.resize(d);
    switch (used % 5) {
      case 0:
        for (std::size_t i = 0; i < d; ++i) w.y1[i] = g.uniform(0.0, 3.0);
        for (std::size_t i = 0; i < d; ++i) w.y2[i] = g.uniform(0.0, 3.0);
        break;
      case 1:  // sparse: plant zeros to probe the boundary
        for (std::size_t i = 0; i < d; ++i) w.y1[i] = g.coin() ? 0.0 : g.uniform(0.0, 3.0);
        for (std::size_t i = 0; i < d; ++i) w.y2[i] = g.coin() ? 0.0 : g.uniform(0.0, 3.0);
        break;
      case 2: {  // move along few coordinates
        for (std::size_t i = 0; i < d; ++i) w.y1[i] = g.uniform(0.0, 3.0);
        w.y2 = w.y1;
        w.y2[g.index(d)] = g.uniform(0.0, 3.0);
        w.y2[g.index(d)] = g.uniform(0.0, 3.0);
        break;
      }
      case 3:
        for (std::size_t i = 0; i < d; ++i) w.y1[i] = g.uniform(0.0, 0.5);
        for (std::size_t i = 0; i < d; ++i) w.y2[i] = g.uniform(0.0, 5.0);
        break;
      default: {  // one shared magnitude swept over eight decades
        const double scale = std::pow(10.0, g.uniform(-2.0, 6.0));
        for (std::size_t i = 0; i < d; ++i) w.y1[i] = g.uniform(0.0, scale);
        for (std::size_t i = 0; i < d; ++i) w.y2[i] = g.uniform(0.0, scale);
        break;
      }
    }
    if (check(w)) return out;
  }
  out.samples_used = samples;
  return out;
}

/// Nonconvex quadratic minimization data: minimize x' M x + b . x subject to
/// the squares of x lying in the described convex set.
struct QuadraticProblem {
  SymMatrix m;
  std::vector<double> b;
  ConvexSetDescriptor set;

  QuadraticProblem(SymMatrix m_, std::vector<double> b_, ConvexSetDescriptor set_)
      : m(std::move(m_)), b(std::move(b_)), set(std::move(set_)) {
    if (b.size() != m.dim() || set.dim() != m.dim())
      throw std::invalid_argument("QuadraticProblem: dimension mismatch");
    detail::require_finite(b, "QuadraticProblem");
  }
};

enum class SolveStatus { signable, not_signable };

struct SolveReport {
  SolveStatus status = SolveStatus::not_signable;
  std::optional<SignPattern> sign;
  std::vector<double> y_star;
  double surrogate_value = 0.0;
  std::vector<double> x_star;
  double q_at_x_star = 0.0;
  double feasibility_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

struct SolveParams {
  double tolerance = 1e-6;
  std::size_t max_iterations = 200000;  // subgradient steps per start and stage
  std::uint64_t seed = 0;
  std::size_t multistarts = 5;
  std::vector<double> smoothing = {1e-2, 1e-4, 1e-6};
  double interior_threshold = 1e-6;  // minimum component for the exact final stage
};

/// Detects a sign pattern and, when one exists, minimizes the convex
/// surrogate over the set by smoothed projected subgradient descent with a
/// final exact stage away from the boundary, then probes boundary candidates
/// and lifts the winner back through the square map.
inline SolveReport solve(const QuadraticProblem& p, const SolveParams& params = {}) {
  if (!is_feasible(p.set)) throw InfeasibleSetError("solve: the feasible set is empty");
  SolveReport rep;
  auto eps = find_sign_pattern(p.m, p.b);
  if (!eps.has_value()) {
    rep.status = SolveStatus::not_signable;
    return rep;
  }
  rep.status = SolveStatus::signable;
  rep.sign = eps;

  const std::size_t d = p.m.dim();
  std::vector<double> warm;
  bool converged = false;
  std::vector<double> schedule = params.smoothing;
  schedule.push_back(0.0);  // exact stage, entered only away from the boundary
  for (double mu : schedule) {
    if (mu == 0.0) {
      double lowest = std::numeric_limits<double>::infinity();
      for (double v : warm) lowest = std::min(lowest, v);
      if (!(lowest > params.interior_threshold)) break;
    }
    auto objective = [&p, mu](const std::vector<double>& y) {
      return surrogate_value_smoothed(p.m, p.b, detail::clamp_nonnegative(y), mu);
    };
    auto subgradient = [&p, mu](const std::vector<double>& y) {
      const std::vector<double> yc = detail::clamp_nonnegative(y);
      double mu_eff = mu;
      if (mu == 0.0) {
        for (double v : yc)
          if (v == 0.0) mu_eff = 1e-12;  // iterate brushed the boundary mid-stage
      }
      return surrogate_subgradient(p.m, p.b, yc, mu_eff);
    };
    SolverParams sp;
    sp.max_iterations = params.max_iterations;
    sp.tolerance = 1e-10;
    sp.seed = params.seed;
    sp.multistarts = warm.empty() ? params.multistarts : 1;
    const MinimizeResult res =
        minimize(objective, subgradient, p.set, sp, warm.empty() ? nullptr : &warm);
    warm = res.y;
    rep.iterations += res.iterations;
    converged = res.converged;
  }

  // candidate pool: solver result, its axis-clamped projections, projected origin
  std::vector<std::vector<double>> candidates;
  candidates.push_back(detail::clamp_nonnegative(warm));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> cand = warm;
    cand[i] = 0.0;
    candidates.push_back(detail::clamp_nonnegative(project(p.set, cand)));
  }
  candidates.push_back(detail::clamp_nonnegative(project(p.set, std::vector<double>(d, 0.0))));

  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double v = surrogate_value(p.m, p.b, candidates[k]);
    if (v < best_value || (v == best_value && detail::lex_less(candidates[k], candidates[best]))) {
      best_value = v;
      best = k;
    }
  }

  rep.y_star = candidates[best];
  rep.surrogate_value = best_value;
  rep.x_star.resize(d);
  for (std::size_t i = 0; i < d; ++i)
    rep.x_star[i] = rep.sign->eps[i] * std::sqrt(rep.y_star[i]);
  rep.q_at_x_star = q_eval(p.m, p.b, rep.x_star);
  rep.feasibility_residual = violation(p.set, square_map(rep.x_star));
  rep.converged = converged;
  return rep;
}

struct GridOracleResult {
  double value = 0.0;
  std::vector<double> y;
  std::size_t feasible_points = 0;
  std::size_t total_points = 0;
};

/// Exhaustive reference: sweeps a regular grid over [0, bound] and reports
/// the best exact fiber minimum among feasible grid points. Membership is
/// checked with a tolerance of half the largest grid step, so refining the
/// grid never loses the true region. Ties go to the lexicographically
/// smallest grid point.
inline GridOracleResult oracle_grid(const QuadraticProblem& p, std::size_t resolution,
                                    const std::vector<double>& bound) {
  const std::size_t d = p.m.dim();
  if (resolution < 2) throw std::invalid_argument("oracle_grid: resolution must be at least 2");
  if (bound.size() != d) throw std::invalid_argument("oracle_grid: bound size differs from dimension");
  for (double bi : bound)
    if (!std::isfinite(bi) || bi <= 0.0)
      throw std::invalid_argument("oracle_grid: bound entries must be positive and finite");
  if (d > 6) throw std::invalid_argument("oracle_grid: dimension exceeds the exhaustive budget");
  double work = std::pow(static_cast<double>(resolution), static_cast<double>(d)) *
                std::pow(2.0, static_cast<double>(d));
  if (work > 2.5e9) throw std::invalid_argument("oracle_grid: grid budget exceeded");

  std::vector<std::vector<double>> axis_y(d), axis_u(d);
  double max_step = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    axis_y[i].resize(resolution);
    axis_u[i].resize(resolution);
    const double h = bound[i] / static_cast<double>(resolution - 1);
    max_step = std::max(max_step, h);
    for (std::size_t t = 0; t < resolution; ++t) {
      axis_y[i][t] = h * static_cast<double>(t);
      axis_u[i][t] = std::sqrt(axis_y[i][t]);
    }
  }
  const double tol = 1e-9 + 0.5 * max_step;

  struct Cross { std::size_t i, j; double c; };
  std::vector<Cross> cross;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (p.m(i, j) != 0.0) cross.push_back({i, j, 2.0 * p.m(i, j)});

  GridOracleResult out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> y(d, 0.0), u(d, 0.0);
  const std::uint64_t masks = std::uint64_t{1} << d;
  while (true) {
    ++out.total_points;
    if (violation(p.set, y) <= tol) {
      ++out.feasible_points;
      double base = 0.0;
      for (std::size_t i = 0; i < d; ++i) base += p.m(i, i) * y[i];
      double fiber = std::numeric_limits<double>::infinity();
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        double val = base;
        for (const auto& t : cross) {
          const bool flip = (((mask >> t.i) ^ (mask >> t.j)) & 1u) != 0;
          const double term = t.c * u[t.i] * u[t.j];
          val += flip ? -term : term;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double term = p.b[i] * u[i];
          val += ((mask >> i) & 1u) ? -term : term;
        }
        fiber = std::min(fiber, val);
      }
      if (fiber < out.value) {
        out.value = fiber;
        out.y = y;
      }
    }
    // odometer: last axis fastest, so points stream in lexicographic order
    std::size_t pos = d;
    while (pos > 0 && idx[pos - 1] + 1 == resolution) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    y[pos - 1] = axis_y[pos - 1][idx[pos - 1]];
    u[pos - 1] = axis_u[pos - 1][idx[pos - 1]];
    for (std::size_t k = pos; k < d; ++k) {
      idx[k] = 0;
      y[k] = 0.0;
      u[k] = 0.0;
    }
  }
  if (out.feasible_points == 0)
    throw InfeasibleSetError("oracle_grid: no feasible grid point inside the bound");
  return out;
}

/// Dense rectangular matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), a_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("DenseMatrix: dimensions must be positive");
    if (a_.size() != rows_ * cols_) throw std::invalid_argument("DenseMatrix: data has wrong length");
    detail::require_finite(a_, "DenseMatrix");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  double frobenius_norm() const {
    double out = 0.0;
    for (double v : a_) out += v * v;
    return std::sqrt(out);
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

namespace detail {

inline std::vector<double> mat_vec(const DenseMatrix& a, const std::vector<double>& x) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r] += a(r, c) * x[c];
  return out;
}

}  // namespace detail

/// Closed form of the infimum of ||A z - b||^2 over the punctured line
/// {lambda x : lambda != 0}: ||b||^2 when A x = 0, otherwise the residual
/// after projecting b onto the direction A x.
inline double direction_example_eval(const DenseMatrix& a, const std::vector<double>& b,
                                     const std::vector<double>& x) {
  if (a.cols() != x.size() || a.rows() != b.size())
    throw std::invalid_argument("direction_example_eval: dimension mismatch");
  const std::vector<double> v = detail::mat_vec(a, x);
  const double nv = detail::norm2(v);
  const double nb2 = detail::dot(b, b);
  const double scale = a.frobenius_norm() * detail::norm2(x);
  if (nv <= 1e-12 * (1.0 + scale)) return nb2;
  const double vb = detail::dot(v, b);
  return nb2 - (vb * vb) / (nv * nv);
}

/// One-dimensional reference for the same quantity: grid scan plus
/// golden-section refinement of ||lambda (A x) - b||^2 over a bracket that
/// provably contains the minimizer.
inline double direction_oracle_1d(const DenseMatrix& a, const std::vector<double>& b,
                                  const std::vector<double>& x) {
  if (a.cols() != x.size() || a.rows() != b.size())
    throw std::invalid_argument("direction_oracle_1d: dimension mismatch");
  const std::vector<double> v = detail::mat_vec(a, x);
  const double nv = detail::norm2(v);
  const double nb = std::sqrt(detail::dot(b, b));
  auto g = [&](double lambda) {
    double out = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) {
      const double diff = lambda * v[r] - b[r];
      out += diff * diff;
    }
    return out;
  };
  if (nv == 0.0) return g(0.0);
  const double reach = std::min(1.0 + 2.0 * nb / nv, 1e15);

  // coarse scan to bracket the minimizer of a unimodal profile
  const std::size_t points = 201;
  double best_lambda = -reach, best_value = g(-reach);
  for (std::size_t k = 1; k < points; ++k) {
    const double lambda = -reach + 2.0 * reach * static_cast<double>(k) / (points - 1);
    const double value = g(lambda);
    if (value < best_value) {
      best_value = value;
      best_lambda = lambda;
    }
  }
  const double h = 2.0 * reach / (points - 1);
  double lo = best_lambda - h, hi = best_lambda + h;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  return std::min({best_value, f1, f2, g((lo + hi) / 2.0)});
}

/// Detection summary: the sign pattern when one exists (with the explicit
/// convex surrogate coefficients), otherwise a sampled nonconvexity
/// certificate for the fiber minimum.
struct HiddenConvexityReport {
  bool signable = false;
  std::optional<SignPattern> sign;
  ConvexityCertificate certificate;
  std::vector<double> surrogate_diagonal;  // coefficient of y_i
  std::vector<double> surrogate_cross;     // coefficient of sqrt(y_i y_j), i < j row-major
  std::vector<double> surrogate_linear;    // coefficient of sqrt(y_i)
};

inline HiddenConvexityReport hidden_convexity_report(const QuadraticProblem& p,
                                                     std::uint64_t seed = 0,
                                                     std::size_t samples = 50000) {
  HiddenConvexityReport out;
  const std::size_t d = p.m.dim();
  out.certificate = convexity_certificate(p.m, p.b, seed, samples);
  out.signable = out.certificate.verdict == ConvexityCertificate::Verdict::convex;
  if (out.signable) out.sign = out.certificate.sign;
  out.surrogate_diagonal.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.surrogate_diagonal[i] = p.m(i, i);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) out.surrogate_cross.push_back(-2.0 * std::abs(p.m(i, j)));
  out.surrogate_linear.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.surrogate_linear[i] = -std::abs(p.b[i]);
  return out;
}

}  // namespace hcx
