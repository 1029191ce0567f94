#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hcx/detail/rng.hpp"

namespace hcx {

/// The described set has no point in the nonnegative orthant.
class InfeasibleSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Alternating projections failed to settle within the sweep budget.
class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoxSet {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct BandSet {
  std::vector<double> s;
  double l = 0.0;
  double u = 0.0;
};

struct HalfspaceRow {
  std::vector<double> a;
  double c = 0.0;  // a . y <= c
};

struct HalfspacesSet {
  std::vector<HalfspaceRow> rows;
};

struct BallSet {
  std::vector<double> center;
  double radius = 0.0;
};

namespace detail {

inline void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": entries must be finite");
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": value must be finite");
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace detail

/// Convex subset of R^d described by one of four shapes, always implicitly
/// intersected with the nonnegative orthant.
class ConvexSetDescriptor {
 public:
  using Data = std::variant<BoxSet, BandSet, HalfspacesSet, BallSet>;

  static ConvexSetDescriptor box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.size() != upper.size() || lower.empty())
      throw std::invalid_argument("box: bound vectors must be nonempty and of equal size");
    detail::require_finite(lower, "box");
    detail::require_finite(upper, "box");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (lower[i] > upper[i]) throw std::invalid_argument("box: lower bound exceeds upper bound");
    const std::size_t d = lower.size();
    return ConvexSetDescriptor(d, BoxSet{std::move(lower), std::move(upper)});
  }

  static ConvexSetDescriptor band(std::vector<double> s, double l, double u) {
    if (s.empty()) throw std::invalid_argument("band: weight vector must be nonempty");
    detail::require_finite(s, "band");
    detail::require_finite(l, "band");
    detail::require_finite(u, "band");
    if (l > u) throw std::invalid_argument("band: lower level exceeds upper level");
    const std::size_t d = s.size();
    return ConvexSetDescriptor(d, BandSet{std::move(s), l, u});
  }

  static ConvexSetDescriptor halfspaces(std::size_t dim, std::vector<HalfspaceRow> rows) {
    if (dim == 0) throw std::invalid_argument("halfspaces: dimension must be positive");
    for (const auto& row : rows) {
      if (row.a.size() != dim) throw std::invalid_argument("halfspaces: row size differs from dimension");
      detail::require_finite(row.a, "halfspaces");
      detail::require_finite(row.c, "halfspaces");
    }
    return ConvexSetDescriptor(dim, HalfspacesSet{std::move(rows)});
  }

  static ConvexSetDescriptor ball(std::vector<double> center, double radius) {
    if (center.empty()) throw std::invalid_argument("ball: center must be nonempty");
    detail::require_finite(center, "ball");
    detail::require_finite(radius, "ball");
    if (radius < 0.0) throw std::invalid_argument("ball: radius must be nonnegative");
    const std::size_t d = center.size();
    return ConvexSetDescriptor(d, BallSet{std::move(center), radius});
  }

  std::size_t dim() const { return dim_; }
  const Data& data() const { return data_; }

  const char* kind() const {
    switch (data_.index()) {
      case 0: return "box";
      case 1: return "band";
      case 2: return "halfspaces";
      default: return "ball";
    }
  }

 private:
  ConvexSetDescriptor(std::size_t dim, Data data) : dim_(dim), data_(std::move(data)) {}

  std::size_t dim_;
  Data data_;
};

/// Worst violated inequality at y (0 when y is in the set); the orthant
/// constraint participates.
inline double violation(const ConvexSetDescriptor& c, const std::vector<double>& y) {
  if (y.size() != c.dim()) throw std::invalid_argument("violation: dimension mismatch");
  double worst = 0.0;
  for (double yi : y) worst = std::max(worst, -yi);
  if (const auto* box = std::get_if<BoxSet>(&c.data())) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      worst = std::max(worst, box->lower[i] - y[i]);
      worst = std::max(worst, y[i] - box->upper[i]);
    }
  } else if (const auto* band = std::get_if<BandSet>(&c.data())) {
    const double t = detail::dot(band->s, y);
    worst = std::max(worst, band->l - t);
    worst = std::max(worst, t - band->u);
  } else if (const auto* half = std::get_if<HalfspacesSet>(&c.data())) {
    for (const auto& row : half->rows) worst = std::max(worst, detail::dot(row.a, y) - row.c);
  } else {
    const auto& ball = std::get<BallSet>(c.data());
    double dist2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double diff = y[i] - ball.center[i];
      dist2 += diff * diff;
    }
    worst = std::max(worst, std::sqrt(dist2) - ball.radius);
  }
  return worst;
}

/// Membership with an additive tolerance on every inequality.
inline bool contains(const ConvexSetDescriptor& c, const std::vector<double>& y, double tol) {
  return violation(c, y) <= tol;
}

/// True when the set (intersected with the orthant) contains a point. Box,
/// band and ball admit exact checks; halfspace systems are probed with
/// alternating projections.
inline bool is_feasible(const ConvexSetDescriptor& c);

namespace detail {

inline void project_orthant(std::vector<double>& y) {
  for (double& v : y) v = std::max(v, 0.0);
}

inline void project_slab(std::vector<double>& y, const std::vector<double>& s, double l, double u) {
  const double ss = dot(s, s);
  if (ss == 0.0) return;  // degenerate slab; feasibility checked by the caller
  const double t = dot(s, y);
  double shift = 0.0;
  if (t < l) shift = (l - t) / ss;
  else if (t > u) shift = (u - t) / ss;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += shift * s[i];
}

inline void project_halfspace(std::vector<double>& y, const HalfspaceRow& row) {
  const double aa = dot(row.a, row.a);
  if (aa == 0.0) return;  // trivial or empty; checked by the caller
  const double excess = dot(row.a, y) - row.c;
  if (excess <= 0.0) return;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= excess * row.a[i] / aa;
}

inline void project_ball(std::vector<double>& y, const BallSet& ball) {
  double dist2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = y[i] - ball.center[i];
    dist2 += diff * diff;
  }
  const double dist = std::sqrt(dist2);
  if (dist <= ball.radius) return;
  const double scale = ball.radius / dist;
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = ball.center[i] + (y[i] - ball.center[i]) * scale;
}

/// Reusable Euclidean projector onto a descriptor. Boxes clamp in closed
/// form; the other shapes run Dykstra's alternating projections over their
/// factor sets (orthant plus slab/halfspaces/ball) until the sweep
/// displacement falls under 1e-10.
class SetProjector {
 public:
  using Factor = std::function<void(std::vector<double>&)>;

  explicit SetProjector(const ConvexSetDescriptor& c) : dim_(c.dim()) {
    if (const auto* box = std::get_if<BoxSet>(&c.data())) {
      box_lower_.resize(dim_);
      box_upper_ = box->upper;
      for (std::size_t i = 0; i < dim_; ++i) {
        box_lower_[i] = std::max(box->lower[i], 0.0);
        if (box_lower_[i] > box_upper_[i])
          throw InfeasibleSetError("box does not meet the nonnegative orthant");
      }
      return;
    }
    if (const auto* band = std::get_if<BandSet>(&c.data())) {
      if (!is_feasible(c)) throw InfeasibleSetError("band does not meet the nonnegative orthant");
      if (dot(band->s, band->s) > 0.0) {
        const BandSet b = *band;
        factors_.emplace_back([b](std::vector<double>& v) { project_slab(v, b.s, b.l, b.u); });
      }
    } else if (const auto* half = std::get_if<HalfspacesSet>(&c.data())) {
      for (const auto& row : half->rows) {
        if (dot(row.a, row.a) == 0.0) {
          if (row.c < 0.0) throw InfeasibleSetError("halfspace with zero normal excludes every point");
          continue;
        }
        factors_.emplace_back([row](std::vector<double>& v) { project_halfspace(v, row); });
      }
    } else {
      const auto& ball = std::get<BallSet>(c.data());
      if (!is_feasible(c)) throw InfeasibleSetError("ball does not meet the nonnegative orthant");
      factors_.emplace_back([ball](std::vector<double>& v) { project_ball(v, ball); });
    }
    // orthant last: every sweep, and therefore the returned point, ends
    // exactly componentwise nonnegative
    factors_.emplace_back([](std::vector<double>& v) { project_orthant(v); });
    corrections_.assign(factors_.size() * dim_, 0.0);
    before_.assign(dim_, 0.0);
  }

  void operator()(std::vector<double>& y) const {
    if (y.size() != dim_) throw std::invalid_argument("project: dimension mismatch");
    if (factors_.empty()) {
      for (std::size_t i = 0; i < dim_; ++i)
        y[i] = std::min(std::max(y[i], box_lower_[i]), box_upper_[i]);
      return;
    }
    if (factors_.size() == 1) {
      factors_[0](y);
      return;
    }
    std::fill(corrections_.begin(), corrections_.end(), 0.0);
    constexpr std::size_t kMaxSweeps = 50000;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      double moved = 0.0;
      for (std::size_t k = 0; k < factors_.size(); ++k) {
        double* corr = corrections_.data() + k * dim_;
        for (std::size_t i = 0; i < dim_; ++i) {
          before_[i] = y[i];
          y[i] += corr[i];
          corr[i] = y[i];  // holds the shifted point until the projection lands
        }
        factors_[k](y);
        for (std::size_t i = 0; i < dim_; ++i) {
          corr[i] -= y[i];
          moved = std::max(moved, std::abs(y[i] - before_[i]));
        }
      }
      double scale = 1.0;
      for (double v : y) scale = std::max(scale, std::abs(v));
      if (moved <= 1e-10 * scale) return;
    }
    throw ProjectionError("projection did not converge; the set may be empty");
  }

 private:
  std::size_t dim_;
  std::vector<double> box_lower_, box_upper_;  // box fast path
  std::vector<Factor> factors_;
  mutable std::vector<double> corrections_;
  mutable std::vector<double> before_;
};

}  // namespace detail

/// Euclidean projection onto the set. Throws InfeasibleSetError when the set
/// is provably empty and ProjectionError when alternating projections fail
/// to settle.
inline std::vector<double> project(const ConvexSetDescriptor& c, std::vector<double> y) {
  detail::SetProjector projector(c);
  projector(y);
  return y;
}

inline bool is_feasible(const ConvexSetDescriptor& c) {
  if (const auto* box = std::get_if<BoxSet>(&c.data())) {
    for (std::size_t i = 0; i < box->lower.size(); ++i)
      if (std::max(box->lower[i], 0.0) > box->upper[i]) return false;
    return true;
  }
  if (const auto* band = std::get_if<BandSet>(&c.data())) {
    // the range of s . y over the orthant is an interval containing 0
    bool some_pos = false, some_neg = false;
    for (double si : band->s) {
      some_pos = some_pos || si > 0.0;
      some_neg = some_neg || si < 0.0;
    }
    if (band->l <= 0.0 && 0.0 <= band->u) return true;
    if (band->l > 0.0) return some_pos;
    return some_neg;  // here u < 0
  }
  if (const auto* ball = std::get_if<BallSet>(&c.data())) {
    double dist2 = 0.0;
    for (double ci : ball->center) dist2 += std::min(ci, 0.0) * std::min(ci, 0.0);
    return std::sqrt(dist2) <= ball->radius;
  }
  // halfspaces: probe with alternating projections from the origin
  try {
    const std::vector<double> probe = project(c, std::vector<double>(c.dim(), 0.0));
    return contains(c, probe, 1e-7);
  } catch (const InfeasibleSetError&) {
    return false;
  } catch (const ProjectionError&) {
    return false;
  }
}

/// Componentwise upper bound of the set when one is derivable from the
/// descriptor; nullopt otherwise (unbounded or not worth bounding).
inline std::optional<std::vector<double>> natural_grid_bound(const ConvexSetDescriptor& c) {
  if (const auto* box = std::get_if<BoxSet>(&c.data())) {
    std::vector<double> out(box->upper.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(box->upper[i], 0.0);
    return out;
  }
  if (const auto* band = std::get_if<BandSet>(&c.data())) {
    std::vector<double> out(band->s.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (band->s[i] <= 0.0) return std::nullopt;
      out[i] = std::max(band->u, 0.0) / band->s[i];
    }
    return out;
  }
  if (const auto* ball = std::get_if<BallSet>(&c.data())) {
    std::vector<double> out(ball->center.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(ball->center[i] + ball->radius, 0.0);
    return out;
  }
  return std::nullopt;
}

struct SolverParams {
  std::size_t max_iterations = 200000;  // subgradient steps per start
  double step_constant = 0.0;           // 0 selects diameter / initial-subgradient-norm
  double tolerance = 1e-9;              // relative objective change declaring convergence
  std::vector<double> smoothing_schedule = {1e-2, 1e-4, 1e-6};  // consumed by smoothing owners
  std::uint64_t seed = 0;               // multistart corner selection
  std::size_t multistarts = 5;
};

struct MinimizeResult {
  std::vector<double> y;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Projected subgradient descent with running-best tracking. Steps follow
/// c/sqrt(k) within a round; rounds restart from the incumbent with the step
/// constant halved, which lets the running best settle to solver accuracy
/// instead of stalling at the first plateau. Multistart points are the
/// projected center and corners of a covering box. The returned iterate is
/// always feasible; converged reports whether the final round's improvement
/// fell under the tolerance.
inline MinimizeResult minimize(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::function<std::vector<double>(const std::vector<double>&)>& subgradient,
    const ConvexSetDescriptor& c, const SolverParams& params,
    const std::vector<double>* warm_start = nullptr) {
  const std::size_t d = c.dim();
  const detail::SetProjector projector(c);

  std::vector<double> cover_upper;
  if (auto natural = natural_grid_bound(c)) {
    cover_upper = *natural;
  } else {
    cover_upper.assign(d, 10.0);
  }
  double diameter = 0.0;
  for (double v : cover_upper) diameter += v * v;
  diameter = std::max(std::sqrt(diameter), 1e-6);

  std::vector<std::vector<double>> starts;
  if (warm_start != nullptr) starts.push_back(*warm_start);
  std::vector<double> center(d);
  for (std::size_t i = 0; i < d; ++i) center[i] = cover_upper[i] / 2.0;
  starts.push_back(std::move(center));
  detail::Rng rng(detail::mix_seed(params.seed, 0x736f6c7665ull));
  while (starts.size() < std::max<std::size_t>(params.multistarts, 1)) {
    std::vector<double> corner(d);
    for (std::size_t i = 0; i < d; ++i) corner[i] = rng.coin() ? cover_upper[i] : 0.0;
    starts.push_back(std::move(corner));
  }

  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    std::vector<double> y = start;
    projector(y);
    std::vector<double> incumbent = y;
    double incumbent_value = objective(y);
    double step_constant = params.step_constant;
    if (step_constant <= 0.0) {
      const double g0 = detail::norm2(subgradient(y));
      step_constant = diameter / std::max(g0, 1e-12);
      step_constant = std::min(std::max(step_constant, 1e-12), 1e12);
    }

    const std::size_t round_length = std::max<std::size_t>(1000, params.max_iterations / 24);
    std::size_t used = 0;
    bool converged = false;
    while (used < params.max_iterations) {
      const std::size_t this_round = std::min(round_length, params.max_iterations - used);
      const double before = incumbent_value;
      for (std::size_t k = 1; k <= this_round; ++k) {
        const std::vector<double> g = subgradient(y);
        const double step = step_constant / std::sqrt(static_cast<double>(k));
        for (std::size_t i = 0; i < d; ++i) y[i] -= step * g[i];
        projector(y);
        const double v = objective(y);
        if (v < incumbent_value || (v == incumbent_value && detail::lex_less(y, incumbent))) {
          incumbent_value = v;
          incumbent = y;
        }
      }
      used += this_round;
      converged = (before - incumbent_value) <= params.tolerance * (1.0 + std::abs(incumbent_value));
      step_constant *= 0.5;
      y = incumbent;
    }

    if (best.y.empty() || incumbent_value < best.value ||
        (incumbent_value == best.value && detail::lex_less(incumbent, best.y))) {
      best.y = incumbent;
      best.value = incumbent_value;
      best.converged = converged;
    }
    best.iterations += used;
  }
  return best;
}

}  // namespace hcx
