#include <vector>

#include "catch2/catch_amalgamated.hpp"

#include "hcx/correspondence.hpp"
#include "hcx/detail/rng.hpp"

using hcx::Correspondence;
using hcx::FiniteSet;
using hcx::IndexSet;

namespace {

using Storage = Correspondence::Storage;

Correspondence random_corr(hcx::detail::Rng& g, const FiniteSet& w, const FiniteSet& y,
                           Storage mode) {
  Correspondence r(w, y, mode);
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b)
      if (g.coin()) r.add(a, b);
  return r;
}

// composition recomputed by the defining triple loop
Correspondence naive_compose(const Correspondence& r, const Correspondence& s) {
  Correspondence out(r.source(), s.target(), Storage::sparse);
  for (std::size_t w = 0; w < r.source().size(); ++w)
    for (std::size_t v = 0; v < s.target().size(); ++v)
      for (std::size_t x = 0; x < r.target().size(); ++x)
        if (r.contains(w, x) && s.contains(x, v)) out.add(w, v);
  return out;
}

}  // namespace

TEST_CASE("finite set labels") {
  const FiniteSet plain(3);
  REQUIRE(plain.size() == 3);
  REQUIRE_FALSE(plain.has_labels());
  const FiniteSet named(2, {"a", "b"});
  REQUIRE(named.label(1) == "b");
  REQUIRE_THROWS_AS(FiniteSet(2, {"a", "a"}), std::invalid_argument);
  REQUIRE_THROWS_AS(FiniteSet(3, {"a", "b"}), std::invalid_argument);
  REQUIRE(compatible(named, FiniteSet(2)));
}

TEST_CASE("index set helpers") {
  IndexSet s = {3, 1, 3, 0};
  hcx::normalize(s);
  REQUIRE(s == IndexSet{0, 1, 3});
  REQUIRE(hcx::index_set_contains(s, 3));
  REQUIRE_FALSE(hcx::index_set_contains(s, 2));
  REQUIRE(hcx::index_set_union({0, 2}, {1, 2}) == IndexSet{0, 1, 2});
  REQUIRE(hcx::index_set_intersection({0, 2}, {1, 2}) == IndexSet{2});
  REQUIRE(hcx::index_set_subset({1}, {0, 1, 2}));
  REQUIRE_FALSE(hcx::index_set_subset({3}, {0, 1, 2}));
  REQUIRE(hcx::full_index_set(3) == IndexSet{0, 1, 2});
  REQUIRE_THROWS_AS(hcx::check_index_set({1, 0}, 4, "t"), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::check_index_set({0, 9}, 4, "t"), std::out_of_range);
}

TEST_CASE("correspondence basics") {
  Correspondence r(FiniteSet(3), FiniteSet(2));
  REQUIRE(r.empty());
  r.add(0, 1);
  r.add(2, 0);
  r.add(0, 1);
  REQUIRE(r.pair_count() == 2);
  REQUIRE(r.contains(0, 1));
  REQUIRE_FALSE(r.contains(1, 1));
  r.remove(0, 1);
  REQUIRE_FALSE(r.contains(0, 1));
  REQUIRE_THROWS_AS(r.add(3, 0), std::out_of_range);
  REQUIRE_THROWS_AS(r.contains(0, 2), std::out_of_range);
  REQUIRE(r.pairs() == std::vector<hcx::IndexPair>{{2, 0}});
}

TEST_CASE("pairs stream in lexicographic order in both modes") {
  for (Storage mode : {Storage::dense, Storage::sparse}) {
    const auto r = Correspondence::from_pairs(FiniteSet(3), FiniteSet(3),
                                              {{2, 1}, {0, 2}, {0, 0}, {1, 1}, {0, 2}}, mode);
    REQUIRE(r.pairs() == std::vector<hcx::IndexPair>{{0, 0}, {0, 2}, {1, 1}, {2, 1}});
  }
}

TEST_CASE("dense and sparse storage agree on every operation") {
  hcx::detail::Rng g(41);
  for (int trial = 0; trial < 200; ++trial) {
    const FiniteSet w(g.index(6)), y(g.index(6));
    Correspondence dense(w, y, Storage::dense), sparse(w, y, Storage::sparse);
    REQUIRE(dense.uses_dense_storage());
    REQUIRE_FALSE(sparse.uses_dense_storage());
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = 0; b < y.size(); ++b)
        if (g.coin()) {
          dense.add(a, b);
          sparse.add(a, b);
        }
    REQUIRE(dense == sparse);
    REQUIRE(dense.pairs() == sparse.pairs());
    REQUIRE(dense.pair_count() == sparse.pair_count());
    REQUIRE(dense.domain() == sparse.domain());
    REQUIRE(dense.range() == sparse.range());
    REQUIRE(dense.inverse() == sparse.inverse());
    for (std::size_t b = 0; b < y.size(); ++b) REQUIRE(dense.foreset(b) == sparse.foreset(b));
    for (std::size_t a = 0; a < w.size(); ++a) REQUIRE(dense.afterset(a) == sparse.afterset(a));
    if (!dense.empty()) {
      const auto p = dense.pairs()[g.index(dense.pair_count())];
      dense.remove(p.first, p.second);
      sparse.remove(p.first, p.second);
      REQUIRE(dense == sparse);
    }
  }
}

TEST_CASE("foresets and aftersets match the raw definition") {
  hcx::detail::Rng g(42);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteSet w(1 + g.index(5)), y(1 + g.index(5));
    const auto r = random_corr(g, w, y, Storage::auto_select);
    for (std::size_t b = 0; b < y.size(); ++b) {
      IndexSet expect;
      for (std::size_t a = 0; a < w.size(); ++a)
        if (r.contains(a, b)) expect.push_back(a);
      REQUIRE(r.foreset(b) == expect);
    }
    for (std::size_t a = 0; a < w.size(); ++a) {
      IndexSet expect;
      for (std::size_t b = 0; b < y.size(); ++b)
        if (r.contains(a, b)) expect.push_back(b);
      REQUIRE(r.afterset(a) == expect);
    }
    const IndexSet sub_y = r.range(), sub_w = r.domain();
    REQUIRE(r.foreset_of_set(sub_y) == sub_w);
    REQUIRE(r.afterset_of_set(sub_w) == sub_y);
  }
}

TEST_CASE("inverse is an involution and flips forests and aftersets") {
  hcx::detail::Rng g(43);
  for (int trial = 0; trial < 100; ++trial) {
    const FiniteSet w(1 + g.index(5)), y(1 + g.index(5));
    const auto r = random_corr(g, w, y, Storage::auto_select);
    const auto inv = r.inverse();
    REQUIRE(inv.inverse() == r);
    for (std::size_t a = 0; a < w.size(); ++a) REQUIRE(inv.foreset(a) == r.afterset(a));
    REQUIRE(inv.domain() == r.range());
  }
}

TEST_CASE("compose matches the naive triple loop in every storage pairing") {
  hcx::detail::Rng g(44);
  for (Storage mr : {Storage::dense, Storage::sparse})
    for (Storage ms : {Storage::dense, Storage::sparse})
      for (int trial = 0; trial < 40; ++trial) {
        const FiniteSet w(1 + g.index(4)), x(1 + g.index(4)), v(1 + g.index(4));
        const auto r = random_corr(g, w, x, mr);
        const auto s = random_corr(g, x, v, ms);
        REQUIRE(compose(r, s) == naive_compose(r, s));
      }
  const auto r = random_corr(g, FiniteSet(2), FiniteSet(3), Storage::auto_select);
  REQUIRE_THROWS_AS(compose(r, r), std::invalid_argument);
}

TEST_CASE("compose is associative with identity as unit") {
  hcx::detail::Rng g(45);
  for (int trial = 0; trial < 60; ++trial) {
    const FiniteSet a(1 + g.index(4)), b(1 + g.index(4)), c(1 + g.index(4)), d(1 + g.index(4));
    const auto r = random_corr(g, a, b, Storage::auto_select);
    const auto s = random_corr(g, b, c, Storage::auto_select);
    const auto t = random_corr(g, c, d, Storage::auto_select);
    REQUIRE(compose(compose(r, s), t) == compose(r, compose(s, t)));
    REQUIRE(compose(hcx::identity_correspondence(a), r) == r);
    REQUIRE(compose(r, hcx::identity_correspondence(b)) == r);
    REQUIRE(compose(r, s).inverse() == compose(s.inverse(), r.inverse()));
  }
}

TEST_CASE("union intersection and subset order") {
  hcx::detail::Rng g(46);
  for (int trial = 0; trial < 60; ++trial) {
    const FiniteSet w(1 + g.index(5)), y(1 + g.index(5));
    const auto r = random_corr(g, w, y, Storage::auto_select);
    const auto s = random_corr(g, w, y, Storage::auto_select);
    const auto u = unite(r, s), i = intersect(r, s);
    REQUIRE(r.is_subset_of(u));
    REQUIRE(i.is_subset_of(r));
    REQUIRE(i.is_subset_of(s));
    for (auto [a, b] : u.pairs()) REQUIRE((r.contains(a, b) || s.contains(a, b)));
    for (auto [a, b] : i.pairs()) REQUIRE((r.contains(a, b) && s.contains(a, b)));
    REQUIRE(unite(r, s) == unite(s, r));
    REQUIRE(intersect(r, s) == intersect(s, r));
  }
}

TEST_CASE("rectangle graph and marginal constructors") {
  const auto rect = hcx::rectangle(FiniteSet(3), FiniteSet(3), {0, 2}, {1});
  REQUIRE(rect.pairs() == std::vector<hcx::IndexPair>{{0, 1}, {2, 1}});

  const auto graph = hcx::graph_of_mapping(FiniteSet(3), FiniteSet(2), {1, 0, 1});
  REQUIRE(graph.afterset(0) == IndexSet{1});
  REQUIRE(graph.foreset(1) == IndexSet{0, 2});
  REQUIRE_THROWS_AS(hcx::graph_of_mapping(FiniteSet(2), FiniteSet(2), {0}), std::invalid_argument);
  REQUIRE_THROWS_AS(hcx::graph_of_mapping(FiniteSet(2), FiniteSet(2), {0, 5}), std::out_of_range);

  const auto sv = hcx::graph_of_set_valued(FiniteSet(2), FiniteSet(3), {{0, 2}, {}});
  REQUIRE(sv.afterset(0) == IndexSet{0, 2});
  REQUIRE(sv.afterset(1).empty());

  const FiniteSet w(2), y(3);
  const auto marg = hcx::marginal_correspondence(w, y);
  for (std::size_t yy = 0; yy < y.size(); ++yy)
    for (std::size_t ww = 0; ww < w.size(); ++ww)
      REQUIRE(marg.contains(hcx::product_index(ww, yy, w.size()), yy));
  REQUIRE(marg.pair_count() == w.size() * y.size());
}
