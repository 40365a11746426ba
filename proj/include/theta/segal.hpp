#ifndef THETA_SEGAL_HPP
#define THETA_SEGAL_HPP

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "theta/delta.hpp"
#include "theta/presheaf.hpp"
#include "theta/report.hpp"

namespace theta {

// ---------------------------------------------------------------------------
// Structural morphisms used by the checkers
// ---------------------------------------------------------------------------

// the i-th vertex [0] -> theta (0 <= i <= arity)
inline ThetaMorphism vertex_morphism(const ThetaObject& th, int i) {
  ThetaMorphism m;
  m.source = theta_zero(th.dim);
  m.target = th;
  m.delta = OrdinalMap(0, th.arity(), {i});
  return m;
}

// the i-th spine segment [1](c_i) -> [m](c_1..c_m), 1 <= i <= m
inline ThetaMorphism spine_inclusion(const ThetaObject& th, int i) {
  ThetaMorphism m;
  ThetaObject ci = th.dim == 1 ? theta_leaf() : th.children[i - 1];
  m.source = suspend_object(ci);
  m.target = th;
  m.delta = OrdinalMap(1, th.arity(), {i - 1, i});
  if (th.dim >= 2) m.blocks[{1, i}] = identity_morphism(ci);
  return m;
}

// the long edge [1](c) -> [2](c,c) for equal children, skipping the middle
inline ThetaMorphism long_edge(const ThetaObject& c) {
  ThetaMorphism m;
  m.source = suspend_object(c);
  m.target = ThetaObject(c.dim + 1, {c, c});
  m.delta = OrdinalMap(1, 2, {0, 2});
  if (m.source.dim >= 2) {
    m.blocks[{1, 1}] = identity_morphism(c);
    m.blocks[{1, 2}] = identity_morphism(c);
  }
  return m;
}

// the collapse [1](c) -> [0] (c terminal tower)
inline ThetaMorphism edge_collapse(int n) {
  ThetaMorphism m;
  m.source = suspend_object(theta_zero(n - 1));
  m.target = theta_zero(n);
  m.delta = OrdinalMap(1, 0, {0, 0});
  return m;
}

// simplicial coface [p-1] -> [p] skipping vertex i
inline OrdinalMap coface(int p, int i) {
  std::vector<int> v;
  for (int j = 0; j <= p; ++j)
    if (j != i) v.push_back(j);
  return OrdinalMap(p - 1, p, v);
}

// simplicial codegeneracy [p+1] -> [p] repeating vertex i
inline OrdinalMap codegeneracy(int p, int i) {
  std::vector<int> v;
  for (int j = 0; j <= p; ++j) {
    v.push_back(j);
    if (j == i) v.push_back(j);
  }
  return OrdinalMap(p + 1, p, v);
}

// ---------------------------------------------------------------------------
// Segal condition
// ---------------------------------------------------------------------------

// Strict levelwise check: W([m](c),p) must biject onto the spine fiber
// product of the W([1](c_i),p) over W([0],p).
inline CheckReport check_segal(const LazyPresheaf& w, const std::vector<ThetaObject>& shapes, int max_p) {
  int n = w.base_dim();
  for (auto& th : shapes) {
    if (th.dim != n) throw std::invalid_argument("check_segal: shape dimension mismatch");
    int m = th.arity();
    if (m < 2) continue;
    for (int p = 0; p <= max_p; ++p) {
      // spine tuples with matching endpoints
      std::vector<std::vector<Elem>> segs(m);
      for (int i = 1; i <= m; ++i) segs[i - 1] = w.eval(spine_inclusion(th, i).source, p);
      auto endpoint = [&](int i, const Elem& e, int v) {
        return w.act(vertex_morphism(spine_inclusion(th, i).source, v), p, e);
      };
      std::set<std::vector<Elem>> tuples;
      std::vector<Elem> cur(m);
      auto rec = [&](auto&& self, int i) -> void {
        if (i > m) {
          tuples.insert(cur);
          return;
        }
        for (auto& e : segs[i - 1]) {
          if (i > 1 && !(endpoint(i - 1, cur[i - 2], 1) == endpoint(i, e, 0))) continue;
          cur[i - 1] = e;
          self(self, i + 1);
        }
      };
      rec(rec, 1);
      std::set<std::vector<Elem>> images;
      for (auto& e : w.eval(th, p)) {
        std::vector<Elem> img(m);
        for (int i = 1; i <= m; ++i) img[i - 1] = w.act(spine_inclusion(th, i), p, e);
        if (!images.insert(img).second)
          return CheckReport::fail(th.str() + " degree " + std::to_string(p) + ": spine map not injective",
                                   e);
        if (!tuples.count(img))
          return CheckReport::fail(th.str() + " degree " + std::to_string(p) + ": spine image not a spine tuple", e);
      }
      if (images.size() != tuples.size()) {
        for (auto& t : tuples)
          if (!images.count(t))
            return CheckReport::fail(th.str() + " degree " + std::to_string(p) + ": spine tuple without preimage",
                                     Elem("tuple", {}, t));
      }
    }
  }
  return CheckReport::pass();
}

// ---------------------------------------------------------------------------
// Level groupoids and pi_0
// ---------------------------------------------------------------------------

// Reconstructs the groupoid whose nerve is the simplicial level family at a
// fixed shape: objects at degree 0, morphisms at degree 1, composition looked
// up through degree 2.  Throws when the levels are not such a nerve.
inline FiniteGroupoid level_groupoid(const LazyPresheaf& w, const ThetaObject& th) {
  auto& obs = w.eval(th, 0);
  auto& mors = w.eval(th, 1);
  auto& twos = w.eval(th, 2);
  auto ob_index = [&](const Elem& e) { return w.index_of(th, 0, e); };
  FiniteCategory c;
  for (auto& o : obs) c.objects.push_back(o.str());
  for (auto& e : mors)
    c.morphisms.push_back({ob_index(w.act(coface(1, 1), th, e)), ob_index(w.act(coface(1, 0), th, e)), e.str()});
  c.identity.resize(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) c.identity[i] = w.index_of(th, 1, w.act(codegeneracy(0, 0), th, obs[i]));
  int nm = (int)mors.size();
  c.comp.assign(nm, std::vector<int>(nm, -1));
  for (auto& e2 : twos) {
    int f = w.index_of(th, 1, w.act(coface(2, 2), th, e2));
    int g = w.index_of(th, 1, w.act(coface(2, 0), th, e2));
    int gf = w.index_of(th, 1, w.act(coface(2, 1), th, e2));
    if (c.comp[g][f] >= 0 && c.comp[g][f] != gf)
      throw std::invalid_argument("level_groupoid: level 2 does not present a category");
    c.comp[g][f] = gf;
  }
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f)
      if (c.composable(g, f) != (c.comp[g][f] >= 0))
        throw std::invalid_argument("level_groupoid: missing or spurious composites");
  c.validate();
  FiniteGroupoid gp;
  gp.cat = c;
  gp.inverse.resize(nm);
  for (int m = 0; m < nm; ++m) {
    int inv = c.inverse_of(m);
    if (inv < 0) throw std::invalid_argument("level_groupoid: non-invertible morphism");
    gp.inverse[m] = inv;
  }
  gp.validate();
  return gp;
}

// connected-component classes of W(th, 0) through degree-1 elements
inline std::vector<int> pi0_level(const LazyPresheaf& w, const ThetaObject& th) {
  auto& obs = w.eval(th, 0);
  std::vector<int> parent(obs.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto& e : w.eval(th, 1)) {
    int a = find(w.index_of(th, 0, w.act(coface(1, 0), th, e)));
    int b = find(w.index_of(th, 0, w.act(coface(1, 1), th, e)));
    parent[a] = b;
  }
  std::map<int, int> renum;
  std::vector<int> out(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    int r = find((int)i);
    if (!renum.count(r)) renum[r] = (int)renum.size();
    out[i] = renum[r];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Homotopy category
// ---------------------------------------------------------------------------

struct HoCategory {
  FiniteCategory cat;
  std::vector<Elem> objects;
  // every 1-segment element (over (s,0), s the suspended terminal tower)
  // mapped to its morphism index
  std::map<Elem, int> class_of;

  int object_index(const Elem& x) const {
    for (size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == x) return (int)i;
    throw std::invalid_argument("HoCategory: unknown object");
  }
};

// Objects W([0],0); homs pi_0 of the terminal-tower mapping levels;
// composition through any strict Segal preimage at [2], checked for
// well-definedness exhaustively.
inline HoCategory homotopy_category(const LazyPresheaf& w) {
  int n = w.base_dim();
  if (n < 1) throw std::invalid_argument("homotopy_category: base dimension 0");
  ThetaObject t = theta_zero(n - 1);
  ThetaObject s1 = suspend_object(t);
  ThetaObject s2(n, {t, t});
  HoCategory ho;
  ho.objects = w.eval(theta_zero(n), 0);
  auto v0 = vertex_morphism(s1, 0), v1 = vertex_morphism(s1, 1);
  // endpoints, then pi_0 within each endpoint pair
  auto& edges = w.eval(s1, 0);
  std::vector<std::pair<int, int>> ends;
  for (auto& e : edges) {
    int a = w.index_of(theta_zero(n), 0, w.act(v0, 0, e));
    int b = w.index_of(theta_zero(n), 0, w.act(v1, 0, e));
    ends.push_back({a, b});
  }
  std::vector<int> parent(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  // only paths lying in a single mapping-space fiber identify edges: both
  // vertex paths must be degenerate
  auto degenerate_vertex_path = [&](const Elem& pv) {
    Elem vert = w.act(OrdinalMap(0, 1, {0}), theta_zero(n), pv);
    return pv == w.act(codegeneracy(0, 0), theta_zero(n), vert);
  };
  for (auto& u : w.eval(s1, 1)) {
    if (!degenerate_vertex_path(w.act(v0, 1, u)) || !degenerate_vertex_path(w.act(v1, 1, u))) continue;
    int a = find(w.index_of(s1, 0, w.act(coface(1, 0), s1, u)));
    int b = find(w.index_of(s1, 0, w.act(coface(1, 1), s1, u)));
    if (ends[a] != ends[b]) throw std::logic_error("homotopy_category: path across endpoint fibers");
    parent[a] = b;
  }
  // morphism list grouped by (src, tgt)
  std::vector<Mor> mors;
  std::vector<int> rep;  // representative edge index per morphism
  std::map<int, int> root_to_mor;
  for (size_t i = 0; i < edges.size(); ++i) {
    int r = find((int)i);
    if (!root_to_mor.count(r)) {
      root_to_mor[r] = (int)mors.size();
      mors.push_back({ends[i].first, ends[i].second, "c" + std::to_string(mors.size())});
      rep.push_back((int)i);
    }
  }
  for (size_t i = 0; i < edges.size(); ++i) ho.class_of[edges[i]] = root_to_mor[find((int)i)];
  // identities via the edge collapse
  std::vector<int> idents(ho.objects.size());
  auto collapse = edge_collapse(n);
  for (size_t x = 0; x < ho.objects.size(); ++x)
    idents[x] = ho.class_of.at(w.act(collapse, 0, ho.objects[x]));
  // composition via Segal preimages, exhaustive well-definedness
  auto sp1 = spine_inclusion(s2, 1), sp2 = spine_inclusion(s2, 2);
  auto le = long_edge(t);
  int nm = (int)mors.size();
  std::vector<std::vector<int>> comp(nm, std::vector<int>(nm, -1));
  for (auto& e : w.eval(s2, 0)) {
    int f = ho.class_of.at(w.act(sp1, 0, e));
    int g = ho.class_of.at(w.act(sp2, 0, e));
    int gf = ho.class_of.at(w.act(le, 0, e));
    if (comp[g][f] >= 0 && comp[g][f] != gf)
      throw std::logic_error("homotopy_category: composition not well-defined on classes");
    comp[g][f] = gf;
  }
  std::vector<std::string> onames;
  for (auto& o : ho.objects) onames.push_back(o.str());
  ho.cat = make_category(onames, mors, idents, [&](const FiniteCategory&, int g, int f) {
    if (comp[g][f] < 0) throw std::logic_error("homotopy_category: missing composite (not Segal?)");
    return comp[g][f];
  });
  return ho;
}

// 1-segment elements whose homotopy class is invertible
inline std::vector<Elem> equivalence_elements(const LazyPresheaf& w) {
  auto ho = homotopy_category(w);
  std::vector<Elem> out;
  for (auto& [e, m] : ho.class_of)
    if (ho.cat.inverse_of(m) >= 0) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Completeness for discrete nerves
// ---------------------------------------------------------------------------

// For a discrete nerve, completeness in dimension k is gauntness at k: the
// equivalence k-cells must all be identities.
inline CheckReport check_completeness(const StrictNCat& a, int k) {
  auto eq = equivalence_cells(a, k);
  int ids = 0;
  for (int c : eq)
    if (a.is_identity_cell(k, c)) ++ids;
  CheckReport r;
  r.verdict = (int)eq.size() == ids;
  r.with_witness(Elem("counts", {(int)eq.size(), ids}));
  if (!r.verdict) {
    for (int c : eq)
      if (!a.is_identity_cell(k, c)) {
        r.counterexample = {"non-identity equivalence cell in dimension " + std::to_string(k),
                            Elem("cell", {k, c})};
        break;
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// DK-equivalence
// ---------------------------------------------------------------------------

// A map of presheaves as an element-level family.
struct PresheafMap {
  LazyPresheaf src, tgt;
  std::function<Elem(const ThetaObject&, int, const Elem&)> component;
};

struct DKReport {
  bool verdict = false;
  CheckReport essential_surjectivity;
  std::vector<std::pair<std::string, bool>> mapping_verdicts;
  std::vector<std::string> caveats;
};

namespace detail {
inline bool dk_rec(const PresheafMap& f, int max_degree, const std::string& path, DKReport& rep);
}

// Iterated Dwyer-Kan check: essential surjectivity of ho(f) plus recursion on
// mapping objects, bottoming out at equivalences of reconstructed level
// groupoids in dimension 0.
inline DKReport check_dk(const PresheafMap& f, int max_degree = 2) {
  DKReport rep;
  rep.verdict = detail::dk_rec(f, max_degree, "", rep);
  return rep;
}

namespace detail {

inline bool dk_dim0(const PresheafMap& f, const std::string& path, DKReport& rep) {
  auto th = theta_leaf();
  auto gs = level_groupoid(f.src, th);
  auto gt = level_groupoid(f.tgt, th);
  Functor F;
  for (auto& o : f.src.eval(th, 0)) F.obj_map.push_back(f.tgt.index_of(th, 0, f.component(th, 0, o)));
  for (auto& m : f.src.eval(th, 1)) F.mor_map.push_back(f.tgt.index_of(th, 1, f.component(th, 1, m)));
  bool ok = functor_valid(gs.cat, gt.cat, F) && check_category_equivalence(gs.cat, gt.cat, F).verdict;
  rep.mapping_verdicts.push_back({path + " level groupoids", ok});
  return ok;
}

inline bool dk_rec(const PresheafMap& f, int max_degree, const std::string& path, DKReport& rep) {
  int n = f.src.base_dim();
  if (n == 0) return dk_dim0(f, path, rep);
  auto ho_s = homotopy_category(f.src);
  auto ho_t = homotopy_category(f.tgt);
  // object images
  std::vector<int> img;
  for (auto& x : ho_s.objects) img.push_back(ho_t.object_index(f.component(theta_zero(n), 0, x)));
  // essential surjectivity: every target object isomorphic to an image
  bool es = true;
  CheckReport esr = CheckReport::pass();
  for (int y = 0; y < (int)ho_t.objects.size(); ++y) {
    bool hit = false;
    for (int x : img) {
      for (int m : ho_t.cat.hom(x, y))
        if (ho_t.cat.inverse_of(m) >= 0) {
          hit = true;
          break;
        }
      if (hit) break;
    }
    if (!hit) {
      es = false;
      esr = CheckReport::fail(path + " essential surjectivity", ho_t.objects[y]);
      break;
    }
  }
  if (path.empty()) rep.essential_surjectivity = esr;
  if (!es) {
    rep.mapping_verdicts.push_back({path + " essential surjectivity", false});
    return false;
  }
  // full faithfulness: recurse on mapping objects for every source pair
  bool all = true;
  auto& pts = ho_s.objects;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j) {
      Elem fx = f.component(theta_zero(n), 0, pts[i]);
      Elem fy = f.component(theta_zero(n), 0, pts[j]);
      PresheafMap sub;
      sub.src = mapping_object(f.src, pts[i], pts[j]);
      sub.tgt = mapping_object(f.tgt, fx, fy);
      auto comp = f.component;
      sub.component = [comp](const ThetaObject& c, int p, const Elem& e) {
        return comp(suspend_object(c), p, e);
      };
      std::string sp = path + " map(" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!dk_rec(sub, max_degree, sp, rep)) all = false;
    }
  rep.mapping_verdicts.push_back({path.empty() ? "<root>" : path, all});
  return all;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Interval homotopies
// ---------------------------------------------------------------------------

// H : U x pi*E -> V certifies f ~ g when restricting the interval coordinate
// to the two constant labelings recovers f and g.
inline CheckReport verify_interval_homotopy(
    const std::function<Elem(const ThetaObject&, int, const Elem&)>& H,
    const std::function<Elem(const ThetaObject&, int, const Elem&)>& f,
    const std::function<Elem(const ThetaObject&, int, const Elem&)>& g, const LazyPresheaf& u,
    const Truncation& window) {
  for (auto& [th, p] : window.slots)
    for (auto& e : u.eval(th, p)) {
      Elem j0("lab", std::vector<int>(th.arity() + 1, 0));
      Elem j1("lab", std::vector<int>(th.arity() + 1, 1));
      if (!(H(th, p, Elem("pair", {}, {e, j0})) == f(th, p, e)))
        return CheckReport::fail(th.str() + " degree " + std::to_string(p) + ": endpoint 0 mismatch", e);
      if (!(H(th, p, Elem("pair", {}, {e, j1})) == g(th, p, e)))
        return CheckReport::fail(th.str() + " degree " + std::to_string(p) + ": endpoint 1 mismatch", e);
    }
  return CheckReport::pass();
}

}  // namespace theta

#endif
