#include <catch2/catch_amalgamated.hpp>

#include "theta/delta.hpp"

using namespace theta;

static long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

TEST_CASE("ordinal map enumeration counts") {
  for (int n = 0; n <= 4; ++n) CHECK(enumerate_ordinal_maps(0, n).size() == (size_t)(n + 1));
  CHECK(enumerate_ordinal_maps(1, 1).size() == 3);
  CHECK(enumerate_ordinal_maps(1, 2).size() == 6);
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n)
      CHECK(enumerate_ordinal_maps(m, n).size() == (size_t)binom(m + n + 1, m + 1));
}

TEST_CASE("ordinal map composition is associative and unital") {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n)
      for (auto& f : enumerate_ordinal_maps(m, n)) {
        CHECK(compose(OrdinalMap::identity(n), f) == f);
        CHECK(compose(f, OrdinalMap::identity(m)) == f);
      }
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        for (int d = 0; d <= 2; ++d)
          for (auto& f : enumerate_ordinal_maps(a, b))
            for (auto& g : enumerate_ordinal_maps(b, c))
              for (auto& h : enumerate_ordinal_maps(c, d))
                CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
}

TEST_CASE("iso chains") {
  auto i0 = iso_chain(0);
  CHECK(i0.cat.num_objects() == 1);
  CHECK(i0.cat.num_morphisms() == 1);
  auto i1 = iso_chain(1);
  CHECK(i1.cat.num_objects() == 2);
  CHECK(i1.cat.num_morphisms() == 4);
  auto i2 = iso_chain(2);
  CHECK(i2.cat.num_objects() == 3);
  CHECK(i2.cat.num_morphisms() == 9);
  for (int p = 0; p <= 3; ++p) {
    auto g = iso_chain(p);
    for (int x = 0; x < g.cat.num_objects(); ++x)
      for (int y = 0; y < g.cat.num_objects(); ++y) CHECK(g.cat.hom(x, y).size() == 1);
  }
}

TEST_CASE("functor enumeration") {
  auto I = walking_iso().cat;
  for (int m = 0; m <= 3; ++m)
    CHECK(enumerate_functors(ordinal_category(m), I).size() == (size_t)(1 << (m + 1)));
  CHECK(enumerate_functors(I, terminal_category()).size() == 1);
  CHECK(enumerate_functors(ordinal_category(2), terminal_category()).size() == 1);
  auto sq = product_category(ordinal_category(1), walking_iso().cat);
  CHECK(enumerate_functors(sq, ordinal_category(1)).size() == 3);
}

TEST_CASE("functor enumeration is closed under composition") {
  auto c = ordinal_category(1);
  auto d = walking_iso().cat;
  auto e = ordinal_category(2);
  auto cd = enumerate_functors(c, d);
  auto de = enumerate_functors(d, e);
  auto ce = enumerate_functors(c, e);
  for (auto& f : cd)
    for (auto& g : de) {
      auto h = compose_functors(g, f);
      CHECK(std::find(ce.begin(), ce.end(), h) != ce.end());
    }
}

TEST_CASE("category equivalence checks") {
  auto I = walking_iso().cat;
  auto pt = terminal_category();
  // unique functor I -> *
  auto fs = enumerate_functors(I, pt);
  REQUIRE(fs.size() == 1);
  CHECK(check_category_equivalence(I, pt, fs[0]).verdict);
  // identity functor
  Functor id;
  for (int x = 0; x < I.num_objects(); ++x) id.obj_map.push_back(x);
  for (int m = 0; m < I.num_morphisms(); ++m) id.mor_map.push_back(m);
  CHECK(check_category_equivalence(I, I, id).verdict);
  // endpoint inclusion [0] -> [1] is not essentially surjective
  auto o1 = ordinal_category(1);
  Functor end0;
  end0.obj_map = {0};
  end0.mor_map = {o1.identity[0]};
  auto r = check_category_equivalence(pt, o1, end0);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.counterexample);
  CHECK(r.counterexample->second.tag == "not_essentially_surjective");
}

TEST_CASE("groupoid core") {
  auto I = walking_iso();
  auto core_i = groupoid_core(I.cat);
  CHECK(core_i.cat.num_morphisms() == I.cat.num_morphisms());
  auto core_o1 = groupoid_core(ordinal_category(1));
  CHECK(core_o1.cat.num_objects() == 2);
  CHECK(core_o1.cat.num_morphisms() == 2);
  auto core_pt = groupoid_core(terminal_category());
  CHECK(core_pt.cat.num_objects() == 1);
}

TEST_CASE("groupoid equivalence") {
  FiniteGroupoid term;
  term.cat = terminal_category();
  term.inverse = {0};
  for (int p = 0; p <= 3; ++p) CHECK(check_groupoid_equivalence(iso_chain(p), term).verdict);
  auto d2 = groupoid_core(disjoint_union_category(terminal_category(), terminal_category()));
  auto d3 = groupoid_core(
      disjoint_union_category(terminal_category(), disjoint_union_category(terminal_category(), terminal_category())));
  CHECK_FALSE(check_groupoid_equivalence(d2, d3).verdict);
  CHECK(check_groupoid_equivalence(d2, d2).verdict);
  // equivalence of categories agrees with groupoid equivalence on groupoids
  auto i2 = iso_chain(2);
  for (auto& f : enumerate_functors(i2.cat, term.cat))
    CHECK(check_category_equivalence(i2.cat, term.cat, f).verdict ==
          check_groupoid_equivalence(i2, term).verdict);
}

TEST_CASE("functor category") {
  // [1]^[1] has 3 objects; its core is discrete
  std::vector<Functor> fs;
  auto fc = functor_category(ordinal_category(1), ordinal_category(1), &fs);
  CHECK(fc.num_objects() == 3);
  CHECK(groupoid_core(fc).cat.num_morphisms() == 3);
  // I^[0] = I
  auto ic = functor_category(ordinal_category(0), walking_iso().cat);
  CHECK(ic.num_objects() == 2);
  CHECK(ic.num_morphisms() == 4);
}
