#ifndef THETA_DELTA_HPP
#define THETA_DELTA_HPP

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "theta/elem.hpp"
#include "theta/report.hpp"

namespace theta {

// ---------------------------------------------------------------------------
// The simplex category
// ---------------------------------------------------------------------------

// A morphism [m] -> [n] of Delta: a weakly increasing map {0..m} -> {0..n}.
struct OrdinalMap {
  int source = 0;  // m
  int target = 0;  // n
  std::vector<int> values;  // length m+1

  OrdinalMap() = default;
  OrdinalMap(int m, int n, std::vector<int> v) : source(m), target(n), values(std::move(v)) {
    if ((int)values.size() != source + 1) throw std::invalid_argument("OrdinalMap: arity mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0 || values[i] > target) throw std::invalid_argument("OrdinalMap: value out of range");
      if (i > 0 && values[i - 1] > values[i]) throw std::invalid_argument("OrdinalMap: not weakly increasing");
    }
  }

  static OrdinalMap identity(int m) {
    std::vector<int> v(m + 1);
    std::iota(v.begin(), v.end(), 0);
    return {m, m, std::move(v)};
  }

  int operator()(int i) const { return values.at(i); }

  friend bool operator==(const OrdinalMap& a, const OrdinalMap& b) {
    return a.source == b.source && a.target == b.target && a.values == b.values;
  }
  friend auto operator<=>(const OrdinalMap& a, const OrdinalMap& b) = default;

  Elem to_elem() const {
    Elem e("ord", {source, target});
    e.ints.insert(e.ints.end(), values.begin(), values.end());
    return e;
  }
};

// g after f.
inline OrdinalMap compose(const OrdinalMap& g, const OrdinalMap& f) {
  if (f.target != g.source) throw std::invalid_argument("OrdinalMap compose: endpoint mismatch");
  std::vector<int> v(f.source + 1);
  for (int i = 0; i <= f.source; ++i) v[i] = g(f(i));
  return {f.source, g.target, std::move(v)};
}

inline std::vector<OrdinalMap> enumerate_ordinal_maps(int m, int n) {
  std::vector<OrdinalMap> out;
  std::vector<int> cur(m + 1, 0);
  auto rec = [&](auto&& self, int i, int low) -> void {
    if (i > m) {
      out.emplace_back(m, n, cur);
      return;
    }
    for (int v = low; v <= n; ++v) {
      cur[i] = v;
      self(self, i + 1, v);
    }
  };
  if (n >= 0) rec(rec, 0, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Finite categories and groupoids
// ---------------------------------------------------------------------------

struct Mor {
  int src = 0;
  int tgt = 0;
  std::string name;
};

// Explicit object/morphism tables with a total composition table, validated
// exhaustively at construction time.
struct FiniteCategory {
  std::vector<std::string> objects;
  std::vector<Mor> morphisms;
  std::vector<int> identity;              // per object
  std::vector<std::vector<int>> comp;     // comp[g][f] = g.f, -1 if not composable

  int num_objects() const { return (int)objects.size(); }
  int num_morphisms() const { return (int)morphisms.size(); }

  bool composable(int g, int f) const { return morphisms[f].tgt == morphisms[g].src; }

  int compose(int g, int f) const {
    int r = comp[g][f];
    if (r < 0) throw std::invalid_argument("FiniteCategory: morphisms not composable");
    return r;
  }

  bool is_identity(int m) const { return identity[morphisms[m].src] == m && morphisms[m].src == morphisms[m].tgt; }

  std::vector<int> hom(int x, int y) const {
    std::vector<int> out;
    for (int m = 0; m < num_morphisms(); ++m)
      if (morphisms[m].src == x && morphisms[m].tgt == y) out.push_back(m);
    return out;
  }

  // Index of a two-sided inverse, -1 if none.
  int inverse_of(int m) const {
    for (int g : hom(morphisms[m].tgt, morphisms[m].src))
      if (comp[g][m] == identity[morphisms[m].src] && comp[m][g] == identity[morphisms[m].tgt]) return g;
    return -1;
  }

  void validate() const {
    if ((int)identity.size() != num_objects()) throw std::logic_error("category: identity table size");
    for (int x = 0; x < num_objects(); ++x) {
      int i = identity[x];
      if (morphisms[i].src != x || morphisms[i].tgt != x) throw std::logic_error("category: bad identity endpoints");
    }
    if ((int)comp.size() != num_morphisms()) throw std::logic_error("category: composition table size");
    for (int g = 0; g < num_morphisms(); ++g) {
      if ((int)comp[g].size() != num_morphisms()) throw std::logic_error("category: composition row size");
      for (int f = 0; f < num_morphisms(); ++f) {
        if (composable(g, f) != (comp[g][f] >= 0)) throw std::logic_error("category: composability mismatch");
        if (comp[g][f] >= 0) {
          const Mor& r = morphisms[comp[g][f]];
          if (r.src != morphisms[f].src || r.tgt != morphisms[g].tgt)
            throw std::logic_error("category: composite endpoints");
        }
      }
    }
    for (int f = 0; f < num_morphisms(); ++f) {
      if (comp[f][identity[morphisms[f].src]] != f || comp[identity[morphisms[f].tgt]][f] != f)
        throw std::logic_error("category: unit law");
    }
    for (int h = 0; h < num_morphisms(); ++h)
      for (int g = 0; g < num_morphisms(); ++g) {
        if (!composable(h, g)) continue;
        for (int f = 0; f < num_morphisms(); ++f) {
          if (!composable(g, f)) continue;
          if (comp[comp[h][g]][f] != comp[h][comp[g][f]]) throw std::logic_error("category: associativity");
        }
      }
  }
};

struct FiniteGroupoid {
  FiniteCategory cat;
  std::vector<int> inverse;  // per morphism

  void validate() const {
    cat.validate();
    if ((int)inverse.size() != cat.num_morphisms()) throw std::logic_error("groupoid: inverse table size");
    for (int m = 0; m < cat.num_morphisms(); ++m) {
      int g = inverse[m];
      if (cat.morphisms[g].src != cat.morphisms[m].tgt || cat.morphisms[g].tgt != cat.morphisms[m].src)
        throw std::logic_error("groupoid: inverse endpoints");
      if (cat.comp[g][m] != cat.identity[cat.morphisms[m].src] ||
          cat.comp[m][g] != cat.identity[cat.morphisms[m].tgt])
        throw std::logic_error("groupoid: inverse law");
    }
  }
};

// Fills the composition table of a category whose composites are determined
// by a callback on morphism indices.
template <class F>
FiniteCategory make_category(std::vector<std::string> objects, std::vector<Mor> morphisms,
                             std::vector<int> identity, F&& composite) {
  FiniteCategory c;
  c.objects = std::move(objects);
  c.morphisms = std::move(morphisms);
  c.identity = std::move(identity);
  int n = c.num_morphisms();
  c.comp.assign(n, std::vector<int>(n, -1));
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f)
      if (c.composable(g, f)) c.comp[g][f] = composite(c, g, f);
  c.validate();
  return c;
}

inline FiniteCategory terminal_category() {
  return make_category({"*"}, {{0, 0, "id"}}, {0}, [](const FiniteCategory&, int, int) { return 0; });
}

inline FiniteCategory empty_category() {
  FiniteCategory c;
  c.validate();
  return c;
}

// The poset category [m].
inline FiniteCategory ordinal_category(int m) {
  std::vector<std::string> obj;
  std::vector<Mor> mor;
  std::vector<int> ident(m + 1, -1);
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i <= m; ++i) obj.push_back(std::to_string(i));
  for (int i = 0; i <= m; ++i)
    for (int j = i; j <= m; ++j) {
      idx[{i, j}] = (int)mor.size();
      mor.push_back({i, j, "(" + std::to_string(i) + "<=" + std::to_string(j) + ")"});
      if (i == j) ident[i] = idx[{i, j}];
    }
  return make_category(obj, mor, ident, [&](const FiniteCategory& c, int g, int f) {
    return idx.at({c.morphisms[f].src, c.morphisms[g].tgt});
  });
}

// I(p): the connected groupoid on p+1 objects with singleton hom-sets.
inline FiniteGroupoid iso_chain(int p) {
  std::vector<std::string> obj;
  std::vector<Mor> mor;
  std::vector<int> ident(p + 1, -1);
  std::vector<std::vector<int>> idx(p + 1, std::vector<int>(p + 1, -1));
  for (int i = 0; i <= p; ++i) obj.push_back(std::to_string(i));
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) {
      idx[i][j] = (int)mor.size();
      mor.push_back({i, j, "(" + std::to_string(i) + "~" + std::to_string(j) + ")"});
      if (i == j) ident[i] = idx[i][j];
    }
  FiniteGroupoid g;
  g.cat = make_category(obj, mor, ident, [&](const FiniteCategory& c, int gg, int ff) {
    return idx[c.morphisms[ff].src][c.morphisms[gg].tgt];
  });
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j) g.inverse.push_back(idx[j][i]);
  g.validate();
  return g;
}

inline FiniteGroupoid walking_iso() { return iso_chain(1); }

inline FiniteCategory product_category(const FiniteCategory& a, const FiniteCategory& b) {
  std::vector<std::string> obj;
  std::vector<Mor> mor;
  std::vector<int> ident(a.num_objects() * b.num_objects(), -1);
  auto oidx = [&](int x, int y) { return x * b.num_objects() + y; };
  auto midx = [&](int f, int g) { return f * b.num_morphisms() + g; };
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y = 0; y < b.num_objects(); ++y) obj.push_back("(" + a.objects[x] + "," + b.objects[y] + ")");
  for (int f = 0; f < a.num_morphisms(); ++f)
    for (int g = 0; g < b.num_morphisms(); ++g)
      mor.push_back({oidx(a.morphisms[f].src, b.morphisms[g].src), oidx(a.morphisms[f].tgt, b.morphisms[g].tgt),
                     "(" + a.morphisms[f].name + "," + b.morphisms[g].name + ")"});
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y = 0; y < b.num_objects(); ++y) ident[oidx(x, y)] = midx(a.identity[x], b.identity[y]);
  return make_category(obj, mor, ident, [&](const FiniteCategory&, int gg, int ff) {
    int g1 = gg / b.num_morphisms(), g2 = gg % b.num_morphisms();
    int f1 = ff / b.num_morphisms(), f2 = ff % b.num_morphisms();
    if (!a.composable(g1, f1) || !b.composable(g2, f2)) return -1;
    return midx(a.comp[g1][f1], b.comp[g2][f2]);
  });
}

inline FiniteCategory disjoint_union_category(const FiniteCategory& a, const FiniteCategory& b) {
  FiniteCategory c;
  for (auto& o : a.objects) c.objects.push_back("L." + o);
  for (auto& o : b.objects) c.objects.push_back("R." + o);
  int oo = a.num_objects(), mo = a.num_morphisms();
  for (auto& m : a.morphisms) c.morphisms.push_back({m.src, m.tgt, "L." + m.name});
  for (auto& m : b.morphisms) c.morphisms.push_back({m.src + oo, m.tgt + oo, "R." + m.name});
  for (int x = 0; x < oo; ++x) c.identity.push_back(a.identity[x]);
  for (int x = 0; x < b.num_objects(); ++x) c.identity.push_back(b.identity[x] + mo);
  int n = c.num_morphisms();
  c.comp.assign(n, std::vector<int>(n, -1));
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      if (!c.composable(g, f)) continue;
      if (g < mo)
        c.comp[g][f] = a.comp[g][f];
      else
        c.comp[g][f] = b.comp[g - mo][f - mo] + mo;
    }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Functors
// ---------------------------------------------------------------------------

struct Functor {
  std::vector<int> obj_map;
  std::vector<int> mor_map;

  friend bool operator==(const Functor& a, const Functor& b) = default;
  friend auto operator<=>(const Functor& a, const Functor& b) = default;

  Elem to_elem() const {
    Elem e("fun");
    e.ints = obj_map;
    e.ints.insert(e.ints.end(), mor_map.begin(), mor_map.end());
    e.ints.insert(e.ints.begin(), (int)obj_map.size());
    return e;
  }
};

inline bool functor_valid(const FiniteCategory& c, const FiniteCategory& d, const Functor& F) {
  for (int m = 0; m < c.num_morphisms(); ++m) {
    if (d.morphisms[F.mor_map[m]].src != F.obj_map[c.morphisms[m].src]) return false;
    if (d.morphisms[F.mor_map[m]].tgt != F.obj_map[c.morphisms[m].tgt]) return false;
  }
  for (int x = 0; x < c.num_objects(); ++x)
    if (F.mor_map[c.identity[x]] != d.identity[F.obj_map[x]]) return false;
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int f = 0; f < c.num_morphisms(); ++f)
      if (c.comp[g][f] >= 0 && F.mor_map[c.comp[g][f]] != d.comp[F.mor_map[g]][F.mor_map[f]]) return false;
  return true;
}

// All functors C -> D in canonical order.
inline std::vector<Functor> enumerate_functors(const FiniteCategory& c, const FiniteCategory& d) {
  std::vector<Functor> out;
  if (c.num_objects() == 0) {
    out.push_back(Functor{});
    return out;
  }
  if (d.num_objects() == 0) return out;
  Functor F;
  F.obj_map.assign(c.num_objects(), 0);
  F.mor_map.assign(c.num_morphisms(), -1);
  // morphisms assigned in index order; identities are forced
  auto rec_mor = [&](auto&& self, int m) -> void {
    if (m == c.num_morphisms()) {
      if (functor_valid(c, d, F)) out.push_back(F);
      return;
    }
    if (c.is_identity(m)) {
      F.mor_map[m] = d.identity[F.obj_map[c.morphisms[m].src]];
      self(self, m + 1);
      F.mor_map[m] = -1;
      return;
    }
    for (int g : d.hom(F.obj_map[c.morphisms[m].src], F.obj_map[c.morphisms[m].tgt])) {
      F.mor_map[m] = g;
      // prune: any composite of two assigned morphisms that is itself assigned
      bool ok = true;
      for (int f = 0; f <= m && ok; ++f) {
        if (F.mor_map[f] < 0) continue;
        int gf = c.comp[m][f] >= 0 ? c.comp[m][f] : -1;
        if (gf >= 0 && gf <= m && F.mor_map[gf] >= 0 && F.mor_map[gf] != d.comp[F.mor_map[m]][F.mor_map[f]]) ok = false;
        int fg = c.comp[f][m] >= 0 ? c.comp[f][m] : -1;
        if (ok && fg >= 0 && fg <= m && F.mor_map[fg] >= 0 && F.mor_map[fg] != d.comp[F.mor_map[f]][F.mor_map[m]]) ok = false;
      }
      if (ok) self(self, m + 1);
      F.mor_map[m] = -1;
    }
  };
  auto rec_obj = [&](auto&& self, int x) -> void {
    if (x == c.num_objects()) {
      rec_mor(rec_mor, 0);
      return;
    }
    for (int y = 0; y < d.num_objects(); ++y) {
      F.obj_map[x] = y;
      self(self, x + 1);
    }
  };
  rec_obj(rec_obj, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline Functor compose_functors(const Functor& g, const Functor& f) {
  Functor h;
  for (int x : f.obj_map) h.obj_map.push_back(g.obj_map[x]);
  for (int m : f.mor_map) h.mor_map.push_back(g.mor_map[m]);
  return h;
}

// The category of functors C -> D and natural transformations.
inline FiniteCategory functor_category(const FiniteCategory& c, const FiniteCategory& d,
                                       std::vector<Functor>* functors_out = nullptr) {
  std::vector<Functor> fs = enumerate_functors(c, d);
  if (functors_out) *functors_out = fs;
  std::vector<std::string> obj;
  for (size_t i = 0; i < fs.size(); ++i) obj.push_back("F" + std::to_string(i));
  // a natural transformation F => G: a component per object of C
  std::vector<Mor> mor;
  std::vector<std::vector<int>> comps;  // per morphism: component list
  std::vector<int> ident(fs.size(), -1);
  std::map<std::pair<std::pair<int, int>, std::vector<int>>, int> idx;
  for (int a = 0; a < (int)fs.size(); ++a)
    for (int b = 0; b < (int)fs.size(); ++b) {
      std::vector<std::vector<int>> choices(c.num_objects());
      for (int x = 0; x < c.num_objects(); ++x) choices[x] = d.hom(fs[a].obj_map[x], fs[b].obj_map[x]);
      std::vector<int> cur(c.num_objects(), -1);
      auto rec = [&](auto&& self, int x) -> void {
        if (x == c.num_objects()) {
          for (int m = 0; m < c.num_morphisms(); ++m) {
            int s = c.morphisms[m].src, t = c.morphisms[m].tgt;
            if (d.comp[cur[t]][fs[a].mor_map[m]] != d.comp[fs[b].mor_map[m]][cur[s]]) return;
          }
          idx[{{a, b}, cur}] = (int)mor.size();
          mor.push_back({a, b, "nat" + std::to_string(mor.size())});
          comps.push_back(cur);
          return;
        }
        for (int h : choices[x]) {
          cur[x] = h;
          self(self, x + 1);
        }
      };
      if (c.num_objects() == 0) {
        // unique empty transformation
        idx[{{a, b}, cur}] = (int)mor.size();
        mor.push_back({a, b, "nat" + std::to_string(mor.size())});
        comps.push_back(cur);
      } else {
        rec(rec, 0);
      }
    }
  for (int a = 0; a < (int)fs.size(); ++a) {
    std::vector<int> ids;
    for (int x = 0; x < c.num_objects(); ++x) ids.push_back(d.identity[fs[a].obj_map[x]]);
    ident[a] = idx.at({{a, a}, ids});
  }
  return make_category(obj, mor, ident, [&](const FiniteCategory& fc, int g, int f) {
    std::vector<int> comp_gf;
    for (int x = 0; x < c.num_objects(); ++x) comp_gf.push_back(d.comp[comps[g][x]][comps[f][x]]);
    return idx.at({{fc.morphisms[f].src, fc.morphisms[g].tgt}, comp_gf});
  });
}

// ---------------------------------------------------------------------------
// Equivalence checks
// ---------------------------------------------------------------------------

inline FiniteGroupoid groupoid_core(const FiniteCategory& c) {
  std::vector<int> keep;
  std::vector<int> newidx(c.num_morphisms(), -1);
  for (int m = 0; m < c.num_morphisms(); ++m)
    if (c.inverse_of(m) >= 0) {
      newidx[m] = (int)keep.size();
      keep.push_back(m);
    }
  FiniteGroupoid g;
  g.cat.objects = c.objects;
  for (int m : keep) g.cat.morphisms.push_back(c.morphisms[m]);
  for (int x = 0; x < c.num_objects(); ++x) g.cat.identity.push_back(newidx[c.identity[x]]);
  int n = (int)keep.size();
  g.cat.comp.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.cat.composable(a, b)) g.cat.comp[a][b] = newidx[c.comp[keep[a]][keep[b]]];
  for (int a = 0; a < n; ++a) g.inverse.push_back(newidx[c.inverse_of(keep[a])]);
  g.validate();
  return g;
}

// F is an equivalence iff full, faithful, essentially surjective.
inline CheckReport check_category_equivalence(const FiniteCategory& c, const FiniteCategory& d, const Functor& F) {
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y) {
      auto hc = c.hom(x, y);
      auto hd = d.hom(F.obj_map[x], F.obj_map[y]);
      std::multiset<int> image;
      for (int m : hc) image.insert(F.mor_map[m]);
      if (image.size() != std::set<int>(image.begin(), image.end()).size())
        return CheckReport::fail("hom(" + c.objects[x] + "," + c.objects[y] + ")", Elem("not_faithful"));
      for (int m : hd)
        if (!image.count(m))
          return CheckReport::fail("hom(" + c.objects[x] + "," + c.objects[y] + ")",
                                   Elem("not_full", {m}));
    }
  CheckReport r = CheckReport::pass();
  for (int z = 0; z < d.num_objects(); ++z) {
    bool hit = false;
    for (int x = 0; x < c.num_objects() && !hit; ++x) {
      for (int u = 0; u < d.num_morphisms() && !hit; ++u) {
        if (d.morphisms[u].src != F.obj_map[x] || d.morphisms[u].tgt != z) continue;
        if (d.inverse_of(u) >= 0) {
          hit = true;
          r.with_witness(Elem("iso_onto", {z, u}));
        }
      }
    }
    if (!hit) return CheckReport::fail("objects", Elem("not_essentially_surjective", {z}));
  }
  return r;
}

namespace detail {

// Automorphism group of x as a composition table on Aut(x), canonically ordered.
inline std::vector<std::vector<int>> aut_group_table(const FiniteCategory& c, int x) {
  auto auts = c.hom(x, x);
  std::map<int, int> pos;
  for (size_t i = 0; i < auts.size(); ++i) pos[auts[i]] = (int)i;
  std::vector<std::vector<int>> table(auts.size(), std::vector<int>(auts.size()));
  for (size_t a = 0; a < auts.size(); ++a)
    for (size_t b = 0; b < auts.size(); ++b) table[a][b] = pos.at(c.comp[auts[a]][auts[b]]);
  return table;
}

inline bool groups_isomorphic(const std::vector<std::vector<int>>& g, const std::vector<std::vector<int>>& h) {
  if (g.size() != h.size()) return false;
  int n = (int)g.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        if (perm[g[a][b]] != h[perm[a]][perm[b]]) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline std::vector<std::vector<int>> groupoid_orbits(const FiniteGroupoid& g) {
  int n = g.cat.num_objects();
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (int x = 0; x < n; ++x) {
    if (comp[x] >= 0) continue;
    comp[x] = nc;
    std::vector<int> stack{x};
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (auto& m : g.cat.morphisms) {
        if (m.src == y && comp[m.tgt] < 0) {
          comp[m.tgt] = nc;
          stack.push_back(m.tgt);
        }
        if (m.tgt == y && comp[m.src] < 0) {
          comp[m.src] = nc;
          stack.push_back(m.src);
        }
      }
    }
    ++nc;
  }
  std::vector<std::vector<int>> orbits(nc);
  for (int x = 0; x < n; ++x) orbits[comp[x]].push_back(x);
  return orbits;
}

}  // namespace detail

// Structural equivalence of finite groupoids: matching orbits with isomorphic
// automorphism groups.  Exact substitute for weak equivalence of their nerves.
inline CheckReport check_groupoid_equivalence(const FiniteGroupoid& g, const FiniteGroupoid& h) {
  auto og = detail::groupoid_orbits(g);
  auto oh = detail::groupoid_orbits(h);
  if (og.size() != oh.size())
    return CheckReport::fail("orbits", Elem("orbit_count", {(int)og.size(), (int)oh.size()}));
  int n = (int)og.size();
  std::vector<std::vector<std::vector<int>>> ag, ah;
  for (auto& o : og) ag.push_back(detail::aut_group_table(g.cat, o.front()));
  for (auto& o : oh) ah.push_back(detail::aut_group_table(h.cat, o.front()));
  // bipartite matching by backtracking; sizes are tiny
  std::vector<int> match(n, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || !detail::groups_isomorphic(ag[i], ah[j])) continue;
      used[j] = true;
      match[i] = j;
      if (self(self, i + 1)) return true;
      used[j] = false;
      match[i] = -1;
    }
    return false;
  };
  if (!rec(rec, 0)) return CheckReport::fail("orbits", Elem("no_orbit_matching"));
  CheckReport r = CheckReport::pass();
  for (int i = 0; i < n; ++i) r.with_witness(Elem("orbit_pair", {i, match[i]}));
  return r;
}

}  // namespace theta

#endif
