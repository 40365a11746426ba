#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "theta/presheaf.hpp"

using namespace theta;

namespace {

// the covariant action of the intertwining construction on a morphism
// (phi, g): ([m], X vector) -> ([m'], X' vector), elementwise
Elem intertwine_push(const OrdinalMap& phi,
                     const std::function<Elem(int j, int j2, const Elem&)>& block, const Elem& e) {
  OrdinalMap delta(e.ints.size() ? (int)e.ints.size() - 1 : 0, phi.source, e.ints);
  auto slots = [&](const OrdinalMap& d) {
    std::vector<std::pair<int, int>> s;
    for (int i = 1; i <= d.source; ++i)
      for (int j = d(i - 1) + 1; j <= d(i); ++j) s.push_back({i, j});
    return s;
  };
  OrdinalMap dout = compose(phi, delta);
  auto in_slots = slots(delta);
  Elem out("V", dout.values);
  for (auto& [i, j2] : slots(dout)) {
    int j = -1;
    for (int jj = delta(i - 1) + 1; jj <= delta(i); ++jj)
      if (phi(jj - 1) < j2 && j2 <= phi(jj)) {
        j = jj;
        break;
      }
    REQUIRE(j > 0);
    int pos = (int)(std::find(in_slots.begin(), in_slots.end(), std::make_pair(i, j)) - in_slots.begin());
    out.kids.push_back(block(j, j2, e.kids[pos]));
  }
  return out;
}

}  // namespace

TEST_CASE("representable levels and Yoneda counts") {
  auto f = representable(parse_theta("[1]([1])"));
  CHECK(f.eval(parse_theta("[1]([0])"), 0).size() == 4);
  CHECK(f.eval(parse_theta("[1]([0])"), 3).size() == 4);
  auto f0 = representable(theta_zero(2));
  CHECK(f0.eval(parse_theta("[2]([1],[0])"), 0).size() == 1);
  // identity present at the home level
  auto self = parse_theta("[2]([1],[0])");
  auto idval = identity_morphism(self).to_elem();
  auto rep = representable(self);
  auto& lvl = rep.eval(self, 0);
  CHECK(std::find(lvl.begin(), lvl.end(), idval) != lvl.end());
}

TEST_CASE("nerve presheaf levels") {
  auto ni = nerve(ncat_from_category(walking_iso().cat));
  for (int p = 0; p <= 2; ++p) CHECK(ni.eval(parse_theta("[1]"), p).size() == 4);
  auto nsi = nerve(suspension_ncat(ncat_from_category(walking_iso().cat)));
  CHECK(nsi.eval(parse_theta("[1]([1])"), 0).size() == 6);
  CHECK(nsi.eval(theta_zero(2), 0).size() == 2);
  auto nt = nerve(terminal_ncat(2));
  CHECK(nt.eval(parse_theta("[2]([1],[1])"), 1).size() == 1);
}

TEST_CASE("walking equivalence levels") {
  CHECK(walking_equivalence(1, 1).eval(parse_theta("[1]"), 0).size() == 4);
  for (int p = 0; p <= 3; ++p) CHECK(walking_equivalence(p, 1).eval(parse_theta("[0]"), 2).size() == (size_t)(p + 1));
  // E(0) is the terminal-like point presheaf
  CHECK(walking_equivalence(0, 2).eval(parse_theta("[2]([1],[0])"), 0).size() == 1);
}

TEST_CASE("products coproducts constant simplices") {
  auto ni = nerve(ncat_from_category(walking_iso().cat));
  auto x = product(ni, constant_simplex(1, 1));
  CHECK(x.eval(parse_theta("[1]"), 1).size() == 12);
  CHECK(product(ni, terminal_presheaf(1)).eval(parse_theta("[2]"), 0).size() ==
        ni.eval(parse_theta("[2]"), 0).size());
  CHECK(constant_simplex(0, 1).eval(parse_theta("[3]"), 2).size() == 1);
  auto cp = coproduct({ni, ni});
  CHECK(cp.eval(parse_theta("[1]"), 0).size() == 8);
}

TEST_CASE("intertwining levels") {
  auto v1e = intertwine({empty_presheaf(1)});
  for (auto probe : {theta_zero(2), parse_theta("[1]([0])"), parse_theta("[2]([0],[0])"), parse_theta("[2]([1],[0])")})
    CHECK(v1e.eval(probe, 0).size() == 2);
  auto v1x = intertwine({walking_equivalence(1, 1)});
  CHECK(v1x.eval(theta_zero(2), 0).size() == 2);

  // V[m](F(c vector)) matches F([m](c vector)) levelwise with the canonical map
  auto shape = parse_theta("[2]([1],[0])");
  std::vector<LazyPresheaf> reps;
  for (auto& c : shape.children) reps.push_back(representable(c));
  auto v = intertwine(reps);
  auto f = representable(shape);
  for (auto& probe : theta_objects_up_to(2, 2)) {
    auto& lv = v.eval(probe, 0);
    auto& lf = f.eval(probe, 0);
    REQUIRE(lv.size() == lf.size());
    // canonical identification: morphism (delta, blocks) <-> V element
    std::vector<Elem> image;
    for (auto& psi : hom_theta(probe, shape)) {
      Elem e("V", psi.delta.values);
      for (int i = 1; i <= probe.arity(); ++i)
        for (int j = psi.delta(i - 1) + 1; j <= psi.delta(i); ++j) e.kids.push_back(psi.blocks.at({i, j}).to_elem());
      image.push_back(e);
    }
    std::sort(image.begin(), image.end());
    CHECK(image == lv);
  }
}

TEST_CASE("mapping objects") {
  auto i = ncat_from_category(walking_iso().cat);
  auto nsi = nerve(suspension_ncat(i));
  auto pts = nsi.eval(theta_zero(2), 0);
  REQUIRE(pts.size() == 2);
  auto m01 = mapping_object(nsi, pts[0], pts[1]);
  auto ni = nerve(i);
  for (auto* s : {"[0]", "[1]", "[2]"})
    for (int p = 0; p <= 2; ++p) CHECK(m01.eval(parse_theta(s), p).size() == ni.eval(parse_theta(s), p).size());
  // no cells backwards; endomorphisms of an object are trivial here
  CHECK(mapping_object(nsi, pts[1], pts[0]).eval(parse_theta("[1]"), 0).empty());
  CHECK(mapping_object(nsi, pts[0], pts[0]).eval(parse_theta("[1]"), 0).size() == 1);
  auto t = representable(theta_zero(1));
  auto e = t.eval(theta_zero(1), 0)[0];
  CHECK(mapping_object(t, e, e).eval(theta_leaf(), 0).size() == 1);
}

TEST_CASE("tau pullback is compatible with mapping objects") {
  auto nsi = nerve(suspension_ncat(ncat_from_category(walking_iso().cat)));
  auto pts = nsi.eval(theta_zero(2), 0);
  auto lhs = tau_star(mapping_object(nsi, pts[0], pts[1]), 0);
  auto rhs = mapping_object(tau_star(nsi, 1), pts[0], pts[1]);
  for (int p = 0; p <= 2; ++p) CHECK(lhs.eval(theta_leaf(), p) == rhs.eval(theta_leaf(), p));
}

TEST_CASE("naturality audit across combinators") {
  auto i = ncat_from_category(walking_iso().cat);
  auto nsi = nerve(suspension_ncat(i));
  auto pts = nsi.eval(theta_zero(2), 0);
  std::vector<LazyPresheaf> sheaves = {
      nsi,
      representable(parse_theta("[1]([1])")),
      walking_equivalence(1, 2),
      product(nsi, walking_equivalence(1, 2)),
      coproduct({walking_equivalence(1, 2), nsi}),
      intertwine({nerve(i)}),
      tau_star(nsi, 2),
  };
  auto shapes = std::vector<std::string>{"[0]", "[1]([0])", "[1]([1])", "[2]([0],[1])"};
  std::mt19937 rng(7);
  for (auto& w : sheaves) {
    int samples = 0;
    while (samples < 200) {
      auto up = [](const ThetaObject& t) { return apply_tau({2, t.dim}, t); };
      auto sa = up(parse_theta(shapes[rng() % shapes.size()]));
      auto sb = up(parse_theta(shapes[rng() % shapes.size()]));
      auto sc = up(parse_theta(shapes[rng() % shapes.size()]));
      auto fs = hom_theta(sa, sb);
      auto gs = hom_theta(sb, sc);
      if (fs.empty() || gs.empty()) continue;
      auto& f = fs[rng() % fs.size()];
      auto& g = gs[rng() % gs.size()];
      auto& lvl = w.eval(sc, 1);
      if (lvl.empty()) {
        ++samples;
        continue;
      }
      auto& e = lvl[rng() % lvl.size()];
      CHECK(w.act(f, 1, w.act(g, 1, e)) == w.act(compose(g, f), 1, e));
      // mixed square: simplicial and theta actions commute
      OrdinalMap alpha(0, 1, {(int)(rng() % 2)});
      CHECK(w.act(alpha, sb, w.act(g, 1, e)) == w.act(g, 0, w.act(alpha, sc, e)));
      ++samples;
    }
  }
  // simplicial action composition on a degree-sensitive presheaf
  auto d2 = constant_simplex(2, 1);
  for (auto& e : d2.eval(parse_theta("[1]"), 2))
    for (auto& al : enumerate_ordinal_maps(1, 2))
      for (auto& be : enumerate_ordinal_maps(0, 1))
        CHECK(d2.act(be, parse_theta("[1]"), d2.act(al, parse_theta("[1]"), e)) ==
              d2.act(compose(al, be), parse_theta("[1]"), e));
}

TEST_CASE("simplicial diagonal") {
  // constant family
  auto ni = nerve(ncat_from_category(walking_iso().cat));
  SimplicialFamily cf{1, [=](int) { return ni; },
                      [](const OrdinalMap&, const ThetaObject&, int, const Elem& e) { return e; }};
  auto d = simplicial_diagonal(cf);
  CHECK(d.eval(parse_theta("[1]"), 2) == ni.eval(parse_theta("[1]"), 2));

  // a genuinely contravariant family: X_p = Hom([p],[2]) as a constant
  // presheaf; its diagonal is the standard 2-simplex
  struct RowImpl : PresheafImpl {
    int p;
    explicit RowImpl(int p_) : p(p_) {}
    int base_dim() const override { return 1; }
    std::string name() const override { return "rows"; }
    std::vector<Elem> eval(const ThetaObject&, int) const override {
      std::vector<Elem> out;
      for (auto& f : enumerate_ordinal_maps(p, 2)) out.push_back(Elem("smap", f.values));
      return out;
    }
    Elem act_theta(const ThetaMorphism&, int, const Elem& x) const override { return x; }
    Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
  };
  SimplicialFamily rf{1, [](int p) { return LazyPresheaf(std::make_shared<RowImpl>(p)); },
                      [](const OrdinalMap& al, const ThetaObject&, int, const Elem& e) {
                        std::vector<int> v(al.source + 1);
                        for (int i = 0; i <= al.source; ++i) v[i] = e.ints[al(i)];
                        return Elem("smap", v);
                      }};
  auto dr = simplicial_diagonal(rf);
  auto d2 = constant_simplex(2, 1);
  auto th = parse_theta("[1]");
  for (int p = 0; p <= 3; ++p) CHECK(dr.eval(th, p) == d2.eval(th, p));
  for (auto& e : dr.eval(th, 2))
    for (auto& al : enumerate_ordinal_maps(1, 2)) CHECK(dr.act(al, th, e) == d2.act(al, th, e));
}

TEST_CASE("truncated hom oracle") {
  auto ni = nerve(ncat_from_category(walking_iso().cat));
  // Yoneda at theta = [1]
  Truncation t = make_truncation({parse_theta("[0]"), parse_theta("[1]"), parse_theta("[2]")}, 1);
  CHECK(truncated_hom(representable(parse_theta("[1]")), ni, t).size() == ni.eval(parse_theta("[1]"), 0).size());
  // maps out of the walking equivalence pick out functor pairs I -> I
  CHECK(truncated_hom(walking_equivalence(1, 1), ni, t).size() == 4);
  CHECK(truncated_hom(ni, nerve(terminal_ncat(1)), t).size() == 1);
}

TEST_CASE("suspension adjunction instance") {
  auto i = ncat_from_category(walking_iso().cat);
  auto si = suspension_ncat(i);
  std::vector<ThetaObject> base = {parse_theta("[0]"), parse_theta("[1]"), parse_theta("[2]")};
  Truncation tb = make_truncation(base, 1);
  std::vector<ThetaObject> susp = {theta_zero(2)};
  for (auto& b : base) susp.push_back(suspend_object(b));
  Truncation ts = make_truncation(susp, 1);
  auto x = walking_equivalence(1, 1);
  size_t lhs = truncated_hom(intertwine({x}), nerve(si), ts).size();
  size_t rhs = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      rhs += truncated_hom(x, nerve(tau_pad_ncat(hom_ncat_object(si, a, b).cat, 1)), tb).size();
  CHECK(lhs == rhs);
  CHECK(lhs == 6);
}

TEST_CASE("intertwining preserves monomorphisms and the pushout square") {
  // inclusion E(0) -> E(1) is levelwise injective; so is its suspension
  auto x = walking_equivalence(0, 1);
  auto y = walking_equivalence(1, 1);
  // the inclusion picks vertex 0; elementwise on V-levels
  auto include = [](const Elem& e) { return e; };  // labelings in {0} are labelings in {0,1}
  for (auto* s : {"[1]([0])", "[2]([1],[0])"}) {
    auto th = parse_theta(s);
    auto vx = intertwine({x}).eval(th, 0);
    auto vy = intertwine({y}).eval(th, 0);
    std::set<Elem> seen;
    for (auto& e : vx) {
      Elem img = include(e);
      CHECK(std::find(vy.begin(), vy.end(), img) != vy.end());
      CHECK(seen.insert(img).second);
    }
  }

  // pushout square for V[1](X x Y)
  auto xx = walking_equivalence(1, 1);
  auto yy = nerve(ncat_from_category(ordinal_category(1)));
  auto vxy = intertwine({product(xx, yy)});
  auto v2xy = intertwine({xx, yy});
  auto v2yx = intertwine({yy, xx});
  auto vxvy = product(intertwine({xx}), intertwine({yy}));
  OrdinalMap d1(1, 2, {0, 2});
  OrdinalMap s1(2, 1, {0, 1, 1}), s0(2, 1, {0, 0, 1});
  // top/left maps split the product into the two gaps
  auto split = std::function<Elem(int, int, const Elem&)>([](int, int j2, const Elem& e) { return e.kids[j2 - 1]; });
  auto splitr = std::function<Elem(int, int, const Elem&)>([](int, int j2, const Elem& e) { return e.kids[2 - j2]; });
  auto keep = std::function<Elem(int, int, const Elem&)>([](int, int, const Elem& e) { return e; });
  for (auto* s : {"[1]([0])", "[2]([0],[0])"}) {
    auto th = parse_theta(s);
    std::set<Elem> corner;  // image pairs in V[1](X) x V[1](Y)
    auto to_corner = [&](const Elem& v2, bool swapped) {
      // project to (the V[1](X) part, the V[1](Y) part); X sits in gap 1 of
      // V[2](X,Y) and in gap 2 of V[2](Y,X)
      Elem a1 = intertwine_push(s1, keep, v2);
      Elem a0 = intertwine_push(s0, keep, v2);
      return swapped ? Elem("pair", {}, {a0, a1}) : Elem("pair", {}, {a1, a0});
    };
    std::set<Elem> from_top, from_left, glue_top, glue_left;
    for (auto& e : v2xy.eval(th, 0)) from_top.insert(to_corner(e, false));
    for (auto& e : v2yx.eval(th, 0)) from_left.insert(to_corner(e, true));
    for (auto& e : vxy.eval(th, 0)) {
      glue_top.insert(to_corner(intertwine_push(d1, split, e), false));
      glue_left.insert(to_corner(intertwine_push(d1, splitr, e), true));
    }
    // square commutes: both glue images agree pointwise
    CHECK(glue_top == glue_left);
    // pushout of sets: corner is covered by the two legs, overlapping exactly
    // on the glued image
    auto& target = vxvy.eval(th, 0);
    std::set<Elem> uni = from_top;
    uni.insert(from_left.begin(), from_left.end());
    CHECK(uni.size() == target.size());
    std::set<Elem> inter;
    for (auto& e : from_top)
      if (from_left.count(e)) inter.insert(e);
    CHECK(inter == glue_top);
    CHECK(from_top.size() + from_left.size() - inter.size() == target.size());
  }
}
