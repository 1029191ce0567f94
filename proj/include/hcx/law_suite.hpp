#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcx/cond_inf.hpp"
#include "hcx/detail/rng.hpp"

namespace hcx {

/// Outcome of checking one law: how many instances were tried and a sorted,
/// capped list of counterexample descriptions (empty means the law held).
struct LawReport {
  std::string law;
  std::size_t cases = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

struct LawSuiteOptions {
  std::uint64_t seed = 1;
  std::size_t max_set_size = 5;   // largest random set cardinality
  std::size_t case_count = 2000;  // random instances per law
  bool exhaustive = true;         // sweep all instances with sizes <= 2 over the five-value grid
  bool mutate_compose = false;    // fault-injection hook: composition silently drops its first pair
  std::size_t max_reported_failures = 8;
};

namespace detail {

inline std::string describe_set(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

inline std::string describe_corr(const Correspondence& r) {
  std::string out = "{";
  bool first = true;
  for (auto [w, y] : r.pairs()) {
    if (!first) out += ",";
    first = false;
    out += "(" + std::to_string(w) + "," + std::to_string(y) + ")";
  }
  return out + "}";
}

inline std::string describe_fun(const ExtRealFunction& f) {
  std::string out = "[";
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (w) out += ",";
    out += to_string(f(w));
  }
  return out + "]";
}

/// Counts instances and collects counterexamples, capped and sorted so that
/// reports are canonical for a given seed.
class LawCollector {
 public:
  LawCollector(std::string law, std::size_t max_report) : max_report_(max_report) {
    rep_.law = std::move(law);
  }

  template <class Describe>
  void check(bool ok, Describe&& describe) {
    ++rep_.cases;
    if (ok) return;
    if (rep_.failures.size() < 64)
      rep_.failures.push_back(describe());
    else
      ++overflow_;
  }

  LawReport finish() {
    std::sort(rep_.failures.begin(), rep_.failures.end());
    if (rep_.failures.size() > max_report_) {
      overflow_ += rep_.failures.size() - max_report_;
      rep_.failures.resize(max_report_);
    }
    if (overflow_ > 0) rep_.failures.push_back("(+" + std::to_string(overflow_) + " more failures)");
    return std::move(rep_);
  }

 private:
  LawReport rep_;
  std::size_t overflow_ = 0;
  std::size_t max_report_;
};

template <class F>
void for_each_function(const FiniteSet& dom, const std::vector<ExtReal>& values, F&& body) {
  std::vector<std::size_t> idx(dom.size(), 0);
  while (true) {
    std::vector<ExtReal> v;
    v.reserve(idx.size());
    for (std::size_t i : idx) v.push_back(values[i]);
    body(ExtRealFunction(dom, std::move(v)));
    std::size_t k = 0;
    for (; k < idx.size(); ++k) {
      if (++idx[k] < values.size()) break;
      idx[k] = 0;
    }
    if (k == idx.size()) break;
  }
}

template <class F>
void for_each_correspondence(const FiniteSet& w, const FiniteSet& y, F&& body) {
  const std::size_t cells = w.size() * y.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    Correspondence r(w, y);
    for (std::size_t c = 0; c < cells; ++c)
      if ((mask >> c) & 1u) r.add(c % w.size(), c / w.size());
    body(r);
  }
}

template <class F>
void for_each_subset(std::size_t n, F&& body) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    IndexSet s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1u) s.push_back(i);
    body(s);
  }
}

template <class F>
void for_each_mapping(std::size_t from, std::size_t to, F&& body) {
  if (from > 0 && to == 0) return;
  std::vector<std::size_t> t(from, 0);
  while (true) {
    body(t);
    std::size_t k = 0;
    for (; k < from; ++k) {
      if (++t[k] < to) break;
      t[k] = 0;
    }
    if (k == from) break;
  }
}

/// Nondecreasing maps of the extended reals used by the monotony law:
/// affine with nonnegative slope, clamps, and jump steps.
struct MonotoneMap {
  std::string name;
  std::function<ExtReal(ExtReal)> apply;
};

inline const std::vector<MonotoneMap>& monotone_family() {
  static const std::vector<MonotoneMap> family = [] {
    std::vector<MonotoneMap> fam;
    for (int a : {0, 1, 2})
      for (int c : {-1, 0, 1})
        fam.push_back({"affine(" + std::to_string(a) + "t+" + std::to_string(c) + ")",
                       [a, c](ExtReal t) {
                         if (a == 0) return ExtReal(static_cast<double>(c));
                         if (!t.is_finite()) return t;
                         return ExtReal(a * t.value() + c);
                       }});
    fam.push_back({"clamp[-1,1]",
                   [](ExtReal t) { return max(ExtReal(-1.0), min(ExtReal(1.0), t)); }});
    fam.push_back({"clamp[0,+inf)", [](ExtReal t) { return max(ExtReal(0.0), t); }});
    fam.push_back({"clamp(-inf,0]", [](ExtReal t) { return min(ExtReal(0.0), t); }});
    fam.push_back({"step(t<0 ? -1 : 1)",
                   [](ExtReal t) { return t < ExtReal(0.0) ? ExtReal(-1.0) : ExtReal(1.0); }});
    fam.push_back({"step(t<0 ? -inf : 0)",
                   [](ExtReal t) { return t < ExtReal(0.0) ? ExtReal::neg_inf() : ExtReal(0.0); }});
    fam.push_back({"step(t<1 ? 0 : +inf)",
                   [](ExtReal t) { return t < ExtReal(1.0) ? ExtReal(0.0) : ExtReal::pos_inf(); }});
    return fam;
  }();
  return family;
}

inline ExtRealFunction apply_map(const MonotoneMap& phi, const ExtRealFunction& f) {
  std::vector<ExtReal> out;
  out.reserve(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) out.push_back(phi.apply(f(w)));
  return ExtRealFunction(f.domain(), std::move(out));
}

class SuiteRunner {
 public:
  explicit SuiteRunner(const LawSuiteOptions& opt) : opt_(opt) {
    if (opt_.max_set_size == 0) throw std::invalid_argument("run_law_suite: max_set_size must be positive");
  }

  std::vector<LawReport> run() {
    return {strict_epigraph_law(), minplus_linearity_law(), monotony_law(),
            set_operations_law(),  pushforward_law(),       tower_law(),
            right_composition_law(), joint_inf_sup_law(),   injectivity_law(),
            image_set_transfer_law(), argmin_transfer_law()};
  }

 private:
  static constexpr std::array<std::size_t, 3> kTinySizes = {0, 1, 2};

  const std::vector<ExtReal>& tiny_values() const {
    static const std::vector<ExtReal> v = {ExtReal::neg_inf(), ExtReal(-1.0), ExtReal(0.0),
                                           ExtReal(1.0), ExtReal::pos_inf()};
    return v;
  }

  Correspondence compose_hook(const Correspondence& r, const Correspondence& s) const {
    Correspondence out = compose(r, s);
    if (opt_.mutate_compose && !out.empty()) {
      const auto p = out.pairs().front();
      out.remove(p.first, p.second);
    }
    return out;
  }

  Rng law_rng(std::uint64_t law_index) const { return Rng(mix_seed(opt_.seed, law_index)); }

  FiniteSet rand_set(Rng& g) const {
    if (g.chance(1, 16)) return FiniteSet(0);
    return FiniteSet(1 + g.index(opt_.max_set_size));
  }

  FiniteSet rand_nonempty_set(Rng& g) const { return FiniteSet(1 + g.index(opt_.max_set_size)); }

  ExtReal rand_value(Rng& g) const {
    const std::uint64_t roll = g.next() % 8;
    if (roll == 0) return ExtReal::neg_inf();
    if (roll == 1) return ExtReal::pos_inf();
    return ExtReal(static_cast<double>(g.int_in(-3, 3)));
  }

  ExtRealFunction rand_fun(Rng& g, const FiniteSet& dom) const {
    std::vector<ExtReal> v;
    v.reserve(dom.size());
    for (std::size_t i = 0; i < dom.size(); ++i) v.push_back(rand_value(g));
    return ExtRealFunction(dom, std::move(v));
  }

  Correspondence rand_corr(Rng& g, const FiniteSet& w, const FiniteSet& y) const {
    Correspondence r(w, y);
    for (std::size_t ww = 0; ww < w.size(); ++ww)
      for (std::size_t yy = 0; yy < y.size(); ++yy)
        if (g.coin()) r.add(ww, yy);
    return r;
  }

  IndexSet rand_subset(Rng& g, std::size_t n) const {
    IndexSet out;
    for (std::size_t i = 0; i < n; ++i)
      if (g.coin()) out.push_back(i);
    return out;
  }

  IndexSet rand_subset_of(Rng& g, const IndexSet& base) const {
    IndexSet out;
    for (std::size_t i : base)
      if (g.coin()) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> rand_mapping(Rng& g, std::size_t from, std::size_t to) const {
    std::vector<std::size_t> t(from);
    for (auto& v : t) v = g.index(to);
    return t;
  }

  // --- laws -------------------------------------------------------------

  /// Slicing the strict epigraph commutes with the conditional infimum:
  /// epi_<(cond_inf(f, R)) = R^-1 ; epi_<(f) at every threshold.
  LawReport strict_epigraph_law() {
    LawCollector col("strict_epigraph", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const Correspondence& r) {
      const auto grid = default_epigraph_grid(f);
      const Correspondence lhs = strict_epigraph(cond_inf(f, r), grid);
      const Correspondence rhs = compose_hook(r.inverse(), strict_epigraph(f, grid));
      col.check(lhs == rhs, [&] {
        return "f=" + describe_fun(f) + " R=" + describe_corr(r) + " lhs=" + describe_corr(lhs) +
               " rhs=" + describe_corr(rhs);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_function(FiniteSet(n), tiny_values(),
                              [&](const ExtRealFunction& f) { check_one(f, r); });
          });
    }
    Rng g = law_rng(1);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      check_one(rand_fun(g, w), rand_corr(g, w, y));
    }
    return col.finish();
  }

  /// Min-plus structure: cond_inf is linear for pointwise min and for upper
  /// shifts, sublinear for pointwise max, superadditive for upper addition.
  LawReport minplus_linearity_law() {
    LawCollector col("minplus_linearity", opt_.max_reported_failures);
    auto check_one = [&](const std::vector<ExtRealFunction>& family, const ExtRealFunction& f0,
                         const ExtRealFunction& f1, ExtReal r, const Correspondence& corr) {
      const FiniteSet& w = corr.source();
      const FiniteSet& y = corr.target();
      std::vector<ExtRealFunction> images;
      images.reserve(family.size());
      for (const auto& f : family) images.push_back(cond_inf(f, corr));

      const char* broken = nullptr;
      if (!(cond_inf(pointwise_min(family, w), corr) == pointwise_min(images, y)))
        broken = "min-linearity";
      else if (!pointwise_leq(pointwise_max(images, y), cond_inf(pointwise_max(family, w), corr)))
        broken = "max-sublinearity";
      else if (!(cond_inf(shift_upper_add(f0, r), corr) == shift_upper_add(cond_inf(f0, corr), r)))
        broken = "upper-shift";
      else if (!pointwise_leq(pointwise_upper_add(cond_inf(f0, corr), cond_inf(f1, corr)),
                              cond_inf(pointwise_upper_add(f0, f1), corr)))
        broken = "superadditivity";
      col.check(broken == nullptr, [&] {
        std::string out = std::string("sub=") + (broken ? broken : "") + " R=" + describe_corr(corr) +
                          " f0=" + describe_fun(f0) + " f1=" + describe_fun(f1) + " r=" + to_string(r) +
                          " family=[";
        for (std::size_t k = 0; k < family.size(); ++k)
          out += (k ? " " : "") + describe_fun(family[k]);
        return out + "]";
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& corr) {
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& g2) {
                for (ExtReal r : tiny_values()) check_one({f, g2}, f, g2, r, corr);
              });
            });
          });
    }
    Rng g = law_rng(2);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      const Correspondence corr = rand_corr(g, w, y);
      std::vector<ExtRealFunction> family;
      const std::size_t k = g.index(4);
      for (std::size_t j = 0; j < k; ++j) family.push_back(rand_fun(g, w));
      check_one(family, rand_fun(g, w), rand_fun(g, w), rand_value(g), corr);
    }
    return col.finish();
  }

  /// Monotony: larger functions give larger conditional infima, the global
  /// infimum sandwich holds, and nondecreasing maps commute up to inequality.
  LawReport monotony_law() {
    LawCollector col("monotony", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const ExtRealFunction& gfun,
                         const Correspondence& r, const MonotoneMap& phi) {
      const ExtRealFunction cif = cond_inf(f, r);
      const char* broken = nullptr;
      if (!pointwise_leq(cif, cond_inf(gfun, r))) broken = "dominance";
      if (broken == nullptr) {
        const ExtReal global = inf_over_subset(f, full_index_set(f.size()));
        const ExtReal over_domain = inf_over_subset(f, r.domain());
        if (!(global <= over_domain)) broken = "sandwich-global";
        for (std::size_t yy = 0; broken == nullptr && yy < cif.size(); ++yy)
          if (!(over_domain <= cif(yy))) broken = "sandwich-domain";
      }
      if (broken == nullptr &&
          !pointwise_leq(apply_map(phi, cif), cond_inf(apply_map(phi, f), r)))
        broken = "nondecreasing-map";
      col.check(broken == nullptr, [&] {
        return std::string("sub=") + (broken ? broken : "") + " phi=" + phi.name +
               " R=" + describe_corr(r) + " f=" + describe_fun(f) + " g=" + describe_fun(gfun);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& h) {
                // g = max(f, h) ranges over all functions dominating f
                for (const auto& phi : monotone_family())
                  check_one(f, pointwise_max(f, h), r, phi);
              });
            });
          });
    }
    Rng g = law_rng(3);
    const auto& family = monotone_family();
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      const ExtRealFunction f = rand_fun(g, w);
      check_one(f, pointwise_max(f, rand_fun(g, w)), rand_corr(g, w, y),
                family[g.index(family.size())]);
    }
    return col.finish();
  }

  /// Unions of correspondences turn into pointwise minima, intersections into
  /// a pointwise-max lower bound, and inclusion reverses the order.
  LawReport set_operations_law() {
    LawCollector col("union_intersection_inclusion", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const Correspondence& r, const Correspondence& s) {
      const ExtRealFunction cir = cond_inf(f, r);
      const ExtRealFunction cis = cond_inf(f, s);
      const Correspondence both = unite(r, s);
      const char* broken = nullptr;
      if (!(cond_inf(f, both) == pointwise_min(cir, cis))) broken = "union";
      else if (!pointwise_leq(pointwise_max(cir, cis), cond_inf(f, intersect(r, s))))
        broken = "intersection";
      else if (!pointwise_leq(cond_inf(f, both), cir)) broken = "inclusion";
      col.check(broken == nullptr, [&] {
        return std::string("sub=") + (broken ? broken : "") + " f=" + describe_fun(f) +
               " R=" + describe_corr(r) + " S=" + describe_corr(s);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& s) {
              for_each_function(FiniteSet(n), tiny_values(),
                                [&](const ExtRealFunction& f) { check_one(f, r, s); });
            });
          });
    }
    Rng g = law_rng(4);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      check_one(rand_fun(g, w), rand_corr(g, w, y), rand_corr(g, w, y));
    }
    return col.finish();
  }

  /// Pushforward: the inf of cond_inf(f, R) over B equals the inf of f over
  /// the foreset of B.
  LawReport pushforward_law() {
    LawCollector col("pushforward", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const Correspondence& r, const IndexSet& b) {
      const ExtReal lhs = inf_over_subset(cond_inf(f, r), b);
      const ExtReal rhs = inf_over_subset(f, r.foreset_of_set(b));
      col.check(lhs == rhs, [&] {
        return "f=" + describe_fun(f) + " R=" + describe_corr(r) + " B=" + describe_set(b) +
               " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_subset(m, [&](const IndexSet& b) { check_one(f, r, b); });
            });
          });
    }
    Rng g = law_rng(5);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      check_one(rand_fun(g, w), rand_corr(g, w, y), rand_subset(g, y.size()));
    }
    return col.finish();
  }

  /// Tower property: iterating conditional infima along R then S equals one
  /// conditional infimum along the composition R ; S.
  LawReport tower_law() {
    LawCollector col("tower", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const Correspondence& r, const Correspondence& s) {
      const ExtRealFunction lhs = cond_inf(cond_inf(f, r), s);
      const ExtRealFunction rhs = cond_inf(f, compose_hook(r, s));
      col.check(lhs == rhs, [&] {
        return "f=" + describe_fun(f) + " R=" + describe_corr(r) + " S=" + describe_corr(s) +
               " lhs=" + describe_fun(lhs) + " rhs=" + describe_fun(rhs);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for (std::size_t v : kTinySizes)
            for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
              for_each_correspondence(FiniteSet(m), FiniteSet(v), [&](const Correspondence& s) {
                for_each_function(FiniteSet(n), tiny_values(),
                                  [&](const ExtRealFunction& f) { check_one(f, r, s); });
              });
            });
    }
    Rng g = law_rng(6);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), x = rand_set(g), v = rand_set(g);
      check_one(rand_fun(g, w), rand_corr(g, w, x), rand_corr(g, x, v));
    }
    return col.finish();
  }

  /// Composing with a mapping on either side of the conditional infimum is
  /// the conditional infimum along the graph-adjusted correspondence.
  LawReport right_composition_law() {
    LawCollector col("right_composition", opt_.max_reported_failures);
    // form A: precompose the integrand; form B: postcompose the result.
    auto check_a = [&](const ExtRealFunction& gfun, const std::vector<std::size_t>& theta,
                       const FiniteSet& w, const Correspondence& r) {
      const ExtRealFunction lhs = cond_inf(compose_table(gfun, theta, w), r);
      const Correspondence graph = graph_of_mapping(w, gfun.domain(), theta);
      const ExtRealFunction rhs = cond_inf(gfun, compose_hook(graph.inverse(), r));
      col.check(lhs == rhs, [&] {
        return "form=A g=" + describe_fun(gfun) + " R=" + describe_corr(r) +
               " graph=" + describe_corr(graph) + " lhs=" + describe_fun(lhs) +
               " rhs=" + describe_fun(rhs);
      });
    };
    auto check_b = [&](const ExtRealFunction& f, const Correspondence& r,
                       const std::vector<std::size_t>& theta, const FiniteSet& wt) {
      const ExtRealFunction lhs = compose_table(cond_inf(f, r), theta, wt);
      const Correspondence graph = graph_of_mapping(wt, r.target(), theta);
      const ExtRealFunction rhs = cond_inf(f, compose_hook(r, graph.inverse()));
      col.check(lhs == rhs, [&] {
        return "form=B f=" + describe_fun(f) + " R=" + describe_corr(r) +
               " graph=" + describe_corr(graph) + " lhs=" + describe_fun(lhs) +
               " rhs=" + describe_fun(rhs);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for (std::size_t v : kTinySizes) {
            // A: theta maps W (size n) into W2 (size m); R relates W and V.
            for_each_mapping(n, m, [&](const std::vector<std::size_t>& theta) {
              for_each_function(FiniteSet(m), tiny_values(), [&](const ExtRealFunction& gfun) {
                for_each_correspondence(FiniteSet(n), FiniteSet(v),
                                        [&](const Correspondence& r) {
                                          check_a(gfun, theta, FiniteSet(n), r);
                                        });
              });
            });
            // B: R relates W (size n) and Y (size m); theta maps WT (size v) into Y.
            for_each_mapping(v, m, [&](const std::vector<std::size_t>& theta) {
              for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
                for_each_correspondence(FiniteSet(n), FiniteSet(m),
                                        [&](const Correspondence& r) {
                                          check_b(f, r, theta, FiniteSet(v));
                                        });
              });
            });
          }
    }
    Rng g = law_rng(7);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      if (g.coin()) {
        const FiniteSet w = rand_set(g), w2 = rand_nonempty_set(g), y = rand_set(g);
        check_a(rand_fun(g, w2), rand_mapping(g, w.size(), w2.size()), w, rand_corr(g, w, y));
      } else {
        const FiniteSet w = rand_set(g), y = rand_nonempty_set(g), wt = rand_set(g);
        check_b(rand_fun(g, w), rand_corr(g, w, y), rand_mapping(g, wt.size(), y.size()), wt);
      }
    }
    return col.finish();
  }

  /// Joint bounds mixing the two additions: the conditional infimum of an
  /// upper sum is below the upper sum of inf and sup, dually for lower sums.
  LawReport joint_inf_sup_law() {
    LawCollector col("joint_inf_sup", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const ExtRealFunction& gfun,
                         const Correspondence& r) {
      const char* broken = nullptr;
      if (!pointwise_leq(cond_inf(pointwise_upper_add(f, gfun), r),
                         pointwise_upper_add(cond_inf(f, r), cond_sup(gfun, r))))
        broken = "inf-upper";
      else if (!pointwise_leq(pointwise_lower_add(cond_sup(f, r), cond_inf(gfun, r)),
                              cond_sup(pointwise_lower_add(f, gfun), r)))
        broken = "sup-lower";
      col.check(broken == nullptr, [&] {
        return std::string("sub=") + (broken ? broken : "") + " f=" + describe_fun(f) +
               " g=" + describe_fun(gfun) + " R=" + describe_corr(r);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_function(FiniteSet(n), tiny_values(),
                                [&](const ExtRealFunction& gf) { check_one(f, gf, r); });
            });
          });
    }
    Rng g = law_rng(8);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      check_one(rand_fun(g, w), rand_fun(g, w), rand_corr(g, w, y));
    }
    return col.finish();
  }

  /// Distinct correspondences are separated by conditional infima of
  /// characteristic functions of singletons.
  LawReport injectivity_law() {
    LawCollector col("injectivity", opt_.max_reported_failures);
    auto check_one = [&](const Correspondence& r, const Correspondence& s) {
      bool separated = false;
      for (std::size_t w = 0; w < r.source().size() && !separated; ++w) {
        const ExtRealFunction delta = characteristic(r.source(), {w});
        separated = !(cond_inf(delta, r) == cond_inf(delta, s));
      }
      col.check(separated,
                [&] { return "R=" + describe_corr(r) + " S=" + describe_corr(s); });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : {1, 2})
        for (std::size_t m : {1, 2})
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& s) {
              if (!(r == s)) check_one(r, s);
            });
          });
    }
    Rng g = law_rng(9);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_nonempty_set(g), y = rand_nonempty_set(g);
      const Correspondence r = rand_corr(g, w, y);
      Correspondence s = rand_corr(g, w, y);
      if (r == s) {
        // force a one-cell difference
        const std::size_t ww = g.index(w.size()), yy = g.index(y.size());
        if (s.contains(ww, yy)) s.remove(ww, yy); else s.add(ww, yy);
      }
      check_one(r, s);
    }
    return col.finish();
  }

  /// Infima transfer to image sets: equality through forward images, an
  /// inequality for subsets of the domain, and equality again for subsets
  /// closed under the back-and-forth composition.
  LawReport image_set_transfer_law() {
    LawCollector col("image_set_transfer", opt_.max_reported_failures);
    auto check_image = [&](const ExtRealFunction& f, const Correspondence& r, const IndexSet& b) {
      const ExtReal lhs = inf_over_subset(f, r.foreset_of_set(b));
      const ExtReal rhs = inf_over_subset(cond_inf(f, r), b);
      col.check(lhs == rhs, [&] {
        return "sub=image f=" + describe_fun(f) + " R=" + describe_corr(r) +
               " B=" + describe_set(b) + " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
      });
    };
    auto check_subsets = [&](const ExtRealFunction& f, const Correspondence& r, IndexSet u0) {
      // one-way bound for any U inside the domain
      const IndexSet dom = r.domain();
      const IndexSet u_free = index_set_intersection(u0, dom);
      const ExtRealFunction ci = cond_inf(f, r);
      {
        const ExtReal lhs = inf_over_subset(ci, r.afterset_of_set(u_free));
        const ExtReal rhs = inf_over_subset(f, u_free);
        col.check(lhs <= rhs, [&] {
          return "sub=bound f=" + describe_fun(f) + " R=" + describe_corr(r) +
                 " U=" + describe_set(u_free) + " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
        });
      }
      // equality after closing U under R;R^-1
      const Correspondence back_forth = compose(r, r.inverse());
      IndexSet u = u_free;
      while (true) {
        IndexSet next = index_set_union(u, back_forth.foreset_of_set(u));
        if (next == u) break;
        u = std::move(next);
      }
      const bool hypothesis =
          index_set_subset(back_forth.foreset_of_set(u), u) && index_set_subset(u, dom);
      const ExtReal lhs = inf_over_subset(f, u);
      const ExtReal rhs = inf_over_subset(ci, r.afterset_of_set(u));
      col.check(hypothesis && lhs == rhs, [&] {
        return std::string("sub=") + (hypothesis ? "closure-equality" : "closure-hypothesis") +
               " f=" + describe_fun(f) + " R=" + describe_corr(r) + " U=" + describe_set(u) +
               " lhs=" + to_string(lhs) + " rhs=" + to_string(rhs);
      });
    };
    if (opt_.exhaustive) {
      for (std::size_t n : kTinySizes)
        for (std::size_t m : kTinySizes)
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_subset(m, [&](const IndexSet& b) { check_image(f, r, b); });
              for_each_subset(n, [&](const IndexSet& u0) { check_subsets(f, r, u0); });
            });
          });
    }
    Rng g = law_rng(10);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_set(g), y = rand_set(g);
      const ExtRealFunction f = rand_fun(g, w);
      const Correspondence r = rand_corr(g, w, y);
      check_image(f, r, rand_subset(g, y.size()));
      check_subsets(f, r, rand_subset(g, w.size()));
    }
    return col.finish();
  }

  /// Minimizing cond_inf(f, R) over B and lifting through a minimizing
  /// foreset element lands in the argmin of f over any sandwiched U.
  LawReport argmin_transfer_law() {
    LawCollector col("argmin_transfer", opt_.max_reported_failures);
    auto check_one = [&](const ExtRealFunction& f, const Correspondence& r, const IndexSet& b,
                         std::size_t y_star, std::size_t w_star, const IndexSet& u) {
      const ExtRealFunction ci = cond_inf(f, r);
      const bool hypothesis = f(w_star) == ci(y_star) && index_set_contains(u, w_star);
      const bool transferred = hypothesis && f(w_star) == inf_over_subset(f, u);
      col.check(transferred, [&] {
        return std::string("sub=") + (hypothesis ? "transfer" : "hypothesis") +
               " f=" + describe_fun(f) + " R=" + describe_corr(r) + " B=" + describe_set(b) +
               " y*=" + std::to_string(y_star) + " w*=" + std::to_string(w_star) +
               " U=" + describe_set(u);
      });
    };
    // picks a minimizing y*, a minimizing foreset element w*, and a sandwich
    // set U with w* in U inside the full foreset of B
    auto run_instance = [&](const ExtRealFunction& f, const Correspondence& r, IndexSet b,
                            Rng* g) {
      const IndexSet range = r.range();
      if (r.empty()) return;
      if (b.empty() || index_set_intersection(b, range).empty()) {
        // patch B so it meets the range
        b = normalized(index_set_union(b, {range[g ? g->index(range.size()) : 0]}));
      }
      const ExtRealFunction ci = cond_inf(f, r);
      const IndexSet y_arg = argmin_over_subset(ci, b);
      const std::size_t y_star = y_arg[g ? g->index(y_arg.size()) : 0];
      const IndexSet fore = r.foreset(y_star);
      const IndexSet rb = r.foreset_of_set(b);
      std::size_t w_star;
      if (!fore.empty()) {
        const IndexSet w_arg = argmin_over_subset(f, fore);
        w_star = w_arg[g ? g->index(w_arg.size()) : 0];
      } else {
        w_star = rb[g ? g->index(rb.size()) : 0];
      }
      IndexSet u = g ? rand_subset_of(*g, rb) : rb;
      u = normalized(index_set_union(u, {w_star}));
      check_one(f, r, b, y_star, w_star, u);
    };
    if (opt_.exhaustive) {
      for (std::size_t n : {1, 2})
        for (std::size_t m : {1, 2})
          for_each_correspondence(FiniteSet(n), FiniteSet(m), [&](const Correspondence& r) {
            if (r.empty()) return;
            for_each_function(FiniteSet(n), tiny_values(), [&](const ExtRealFunction& f) {
              for_each_subset(m, [&](const IndexSet& b) {
                if (b.empty()) return;
                run_instance(f, r, b, nullptr);
              });
            });
          });
    }
    Rng g = law_rng(11);
    for (std::size_t i = 0; i < opt_.case_count; ++i) {
      const FiniteSet w = rand_nonempty_set(g), y = rand_nonempty_set(g);
      Correspondence r = rand_corr(g, w, y);
      if (r.empty()) r.add(g.index(w.size()), g.index(y.size()));
      run_instance(rand_fun(g, w), r, rand_subset(g, y.size()), &g);
    }
    return col.finish();
  }

  LawSuiteOptions opt_;
};

}  // namespace detail

/// Checks the whole calculus of conditional infima on finite instances:
/// exhaustive tiny sweeps plus seeded random cases, one report per law.
inline std::vector<LawReport> run_law_suite(const LawSuiteOptions& opt) {
  detail::SuiteRunner runner(opt);
  return runner.run();
}

inline std::vector<LawReport> run_law_suite(std::uint64_t seed, std::size_t max_set_size,
                                            std::size_t case_count) {
  LawSuiteOptions opt;
  opt.seed = seed;
  opt.max_set_size = max_set_size;
  opt.case_count = case_count;
  return run_law_suite(opt);
}

}  // namespace hcx
