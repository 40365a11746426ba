#include <catch2/catch_amalgamated.hpp>

#include "theta/nerve.hpp"
#include "theta/presheaf.hpp"
#include "theta/segal.hpp"
#include "theta/strict_ncat.hpp"

using namespace theta;

namespace {

NFunctor decode_nfun(const Elem& e) {
  NFunctor f;
  size_t i = 0;
  while (i < e.ints.size()) {
    int sz = e.ints[i++];
    f.table.push_back(std::vector<int>(e.ints.begin() + i, e.ints.begin() + i + sz));
    i += sz;
  }
  return f;
}

// Sub-object of the 2-simplex in the cell direction: monotone vertex maps into
// {0,1,2} that never span more than one step.  Has a composable pair of edges
// with no filler triangle.
struct NoFillerImpl : PresheafImpl {
  int base_dim() const override { return 1; }
  std::string name() const override { return "no_filler"; }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    std::vector<Elem> out;
    int m = th.arity();
    std::vector<int> v(m + 1);
    auto rec = [&](auto&& self, int i) -> void {
      if (i > m) {
        if (v[m] - v[0] <= 1) out.push_back(Elem("smap", v));
        return;
      }
      for (int x = (i ? v[i - 1] : 0); x <= 2; ++x) {
        v[i] = x;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int, const Elem& x) const override {
    std::vector<int> v(psi.source.arity() + 1);
    for (int i = 0; i <= psi.source.arity(); ++i) v[i] = x.ints[psi.delta(i)];
    return Elem("smap", v);
  }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
};

// Free labelings into 0..p in the simplicial direction: levelwise the nerve of
// the contractible groupoid on p+1 objects, constant in the cell direction.
struct FreeLabelImpl : PresheafImpl {
  int p;
  explicit FreeLabelImpl(int p_) : p(p_) {}
  int base_dim() const override { return 1; }
  std::string name() const override { return "free_label"; }
  std::vector<Elem> eval(const ThetaObject&, int q) const override {
    std::vector<Elem> out;
    std::vector<int> v(q + 1, 0);
    auto rec = [&](auto&& self, int i) -> void {
      if (i > q) {
        out.push_back(Elem("smap", v));
        return;
      }
      for (int x = 0; x <= p; ++x) {
        v[i] = x;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
    return out;
  }
  Elem act_theta(const ThetaMorphism&, int, const Elem& x) const override { return x; }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject&, const Elem& x) const override {
    std::vector<int> v(alpha.source + 1);
    for (int i = 0; i <= alpha.source; ++i) v[i] = x.ints[alpha(i)];
    return Elem("smap", v);
  }
};

StrictNCat walking_iso_ncat() { return ncat_from_category(walking_iso().cat); }

// component of the nerve map induced by a functor between 1-categories
std::function<Elem(const ThetaObject&, int, const Elem&)> nerve_map(const NFunctor& j) {
  return [j](const ThetaObject&, int, const Elem& e) { return compose_nfunctors(j, decode_nfun(e)).to_elem(); };
}

NFunctor nfun_from_functor(const Functor& F) {
  NFunctor j;
  j.table = {F.obj_map, F.mor_map};
  return j;
}

}  // namespace

TEST_CASE("strict spine condition holds for cell-category nerves") {
  auto ni = nerve(walking_iso_ncat());
  ThetaObject two(1, {theta_leaf(), theta_leaf()});
  ThetaObject three(1, {theta_leaf(), theta_leaf(), theta_leaf()});
  CHECK(check_segal(ni, {two, three}, 1).verdict);

  auto nsi = nerve(suspension_ncat(walking_iso_ncat()));
  ThetaObject e1 = suspend_object(theta_leaf());
  CHECK(check_segal(nsi, {ThetaObject(2, {e1, e1}), ThetaObject(2, {theta_zero(1), e1})}, 1).verdict);

  CHECK(check_segal(walking_equivalence(1, 1), {two, three}, 1).verdict);
}

TEST_CASE("missing filler is detected with a witness tuple") {
  LazyPresheaf x(std::make_shared<NoFillerImpl>());
  ThetaObject two(1, {theta_leaf(), theta_leaf()});
  CHECK(x.eval(two, 0).size() == 7);
  auto r = check_segal(x, {two}, 0);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.counterexample.has_value());
  CHECK(r.counterexample->first.find("[2]") != std::string::npos);
}

TEST_CASE("level groupoid reconstruction in the simplicial direction") {
  LazyPresheaf w(std::make_shared<FreeLabelImpl>(2));
  auto g = level_groupoid(w, theta_zero(1));
  CHECK(g.cat.num_objects() == 3);
  CHECK(g.cat.num_morphisms() == 9);
  CHECK(check_groupoid_equivalence(g, iso_chain(2)).verdict);

  // the standard 1-simplex has a non-invertible edge
  CHECK_THROWS_AS(level_groupoid(constant_simplex(1, 1), theta_zero(1)), std::invalid_argument);

  // a discrete nerve reconstructs a discrete groupoid
  auto gd = level_groupoid(nerve(walking_iso_ncat()), theta_zero(1));
  CHECK(gd.cat.num_objects() == 2);
  CHECK(gd.cat.num_morphisms() == 2);
  for (int m = 0; m < gd.cat.num_morphisms(); ++m) CHECK(gd.cat.is_identity(m));
}

TEST_CASE("connected components of levels") {
  CHECK(pi0_level(LazyPresheaf(std::make_shared<FreeLabelImpl>(2)), theta_zero(1)) == std::vector<int>({0, 0, 0}));
  auto classes = pi0_level(constant_simplex(1, 1), theta_zero(1));
  CHECK(classes == std::vector<int>({0, 0}));
  auto disc = pi0_level(nerve(walking_iso_ncat()), theta_zero(1));
  CHECK(disc == std::vector<int>({0, 1}));
}

TEST_CASE("homotopy category of a nerve recovers the category") {
  for (auto& c : {walking_iso().cat, ordinal_category(2)}) {
    auto ho = homotopy_category(nerve(ncat_from_category(c)));
    REQUIRE(ho.cat.num_objects() == c.num_objects());
    REQUIRE(ho.cat.num_morphisms() == c.num_morphisms());
    bool found = false;
    for (auto& F : enumerate_functors(ho.cat, c))
      if (check_category_equivalence(ho.cat, c, F).verdict) found = true;
    CHECK(found);
  }
}

TEST_CASE("invertible one-segments") {
  CHECK(equivalence_elements(nerve(walking_iso_ncat())).size() == 4);
  CHECK(equivalence_elements(nerve(ordinal_ncat(1))).size() == 2);
  // agrees with the cellwise notion on the category itself
  CHECK(equivalence_cells(walking_iso_ncat(), 1).size() == 4);
  CHECK(equivalence_cells(ordinal_ncat(1), 1).size() == 2);
}

TEST_CASE("completeness of discrete data per dimension") {
  auto ord = ordinal_ncat(1);
  auto r = check_completeness(ord, 1);
  CHECK(r.verdict);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].ints == std::vector<int>({2, 2}));

  auto iso = walking_iso_ncat();
  auto bad = check_completeness(iso, 1);
  CHECK_FALSE(bad.verdict);
  CHECK(bad.witnesses[0].ints == std::vector<int>({4, 2}));
  REQUIRE(bad.counterexample.has_value());

  // suspending pushes the failure up one dimension
  auto si = suspension_ncat(iso);
  CHECK(check_completeness(si, 1).verdict);
  auto bad2 = check_completeness(si, 2);
  CHECK_FALSE(bad2.verdict);
  CHECK(bad2.witnesses[0].ints == std::vector<int>({6, 4}));

  auto s2i = suspension_ncat(si);
  CHECK(check_completeness(s2i, 1).verdict);
  CHECK(check_completeness(s2i, 2).verdict);
  CHECK_FALSE(check_completeness(s2i, 3).verdict);
}

TEST_CASE("equivalence detection across levels") {
  // terminal category into the walking isomorphism: an equivalence
  auto term = ncat_from_category(terminal_category());
  auto iso = walking_iso_ncat();
  Functor j0;
  j0.obj_map = {0};
  j0.mor_map = {walking_iso().cat.identity[0]};
  PresheafMap f;
  f.src = nerve(term);
  f.tgt = nerve(iso);
  f.component = nerve_map(nfun_from_functor(j0));
  auto rep = check_dk(f);
  CHECK(rep.verdict);
  CHECK(rep.essential_surjectivity.verdict);

  // terminal category into the arrow category: not essentially surjective
  auto ord1 = ncat_from_category(ordinal_category(1));
  Functor i0;
  i0.obj_map = {0};
  i0.mor_map = {ordinal_category(1).identity[0]};
  PresheafMap g;
  g.src = nerve(term);
  g.tgt = nerve(ord1);
  g.component = nerve_map(nfun_from_functor(i0));
  auto bad = check_dk(g);
  CHECK_FALSE(bad.verdict);
  CHECK_FALSE(bad.essential_surjectivity.verdict);

  // identity on a two-dimensional nerve: full recursion through mapping objects
  PresheafMap id2;
  id2.src = nerve(suspension_ncat(iso));
  id2.tgt = id2.src;
  id2.component = [](const ThetaObject&, int, const Elem& e) { return e; };
  auto rid = check_dk(id2);
  CHECK(rid.verdict);
  for (auto& [name, ok] : rid.mapping_verdicts) CHECK(ok);
}

TEST_CASE("interval homotopies between nerve maps") {
  auto iso = walking_iso_ncat();
  auto ni = nerve(iso);
  auto idc = [](const ThetaObject&, int, const Elem& e) { return e; };
  auto proj = [](const ThetaObject&, int, const Elem& x) { return x.kids[0]; };
  ThetaObject two(1, {theta_leaf(), theta_leaf()});
  auto window = make_truncation({theta_zero(1), suspend_object(theta_leaf()), two}, 1);
  CHECK(verify_interval_homotopy(proj, idc, idc, ni, window).verdict);

  // the swap automorphism is not certified by the constant homotopy
  auto c = walking_iso().cat;
  Functor sw;
  sw.obj_map = {1, 0};
  for (int m = 0; m < c.num_morphisms(); ++m) {
    auto h = c.hom(1 - c.morphisms[m].src, 1 - c.morphisms[m].tgt);
    // the walking isomorphism has exactly one morphism per ordered pair
    REQUIRE(h.size() == 1);
    sw.mor_map.push_back(h[0]);
  }
  REQUIRE(functor_valid(c, c, sw));
  auto swap_map = nerve_map(nfun_from_functor(sw));
  auto r = verify_interval_homotopy(proj, idc, swap_map, ni, window);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.counterexample.has_value());
}
