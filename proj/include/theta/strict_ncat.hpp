#ifndef THETA_STRICT_NCAT_HPP
#define THETA_STRICT_NCAT_HPP

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "theta/delta.hpp"
#include "theta/elem.hpp"
#include "theta/theta_cell.hpp"

namespace theta {

struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Finite strict n-categories as globular cell tables
// ---------------------------------------------------------------------------

struct StrictNCat {
  int dim = 0;
  // cells[k]; src/tgt index into cells[k-1] (unused at k = 0)
  std::vector<std::vector<Mor>> cells;
  // id_of[k][c]: the identity (k+1)-cell on c, for k < dim
  std::vector<std::vector<int>> id_of;
  // comp[k][j]: g o_j f keyed by (g, f), for 0 <= j < k <= dim
  std::vector<std::vector<std::map<std::pair<int, int>, int>>> comp;

  int num_cells(int k) const { return k <= dim ? (int)cells[k].size() : 0; }

  int total_cells() const {
    int t = 0;
    for (auto& c : cells) t += (int)c.size();
    return t;
  }

  // the j-dimensional source/target of a k-cell
  int src_at(int k, int c, int j) const {
    for (; k > j; --k) c = cells[k][c].src;
    return c;
  }
  int tgt_at(int k, int c, int j) const {
    for (; k > j; --k) c = cells[k][c].tgt;
    return c;
  }

  bool composable(int k, int j, int g, int f) const { return tgt_at(k, f, j) == src_at(k, g, j); }

  int compose_at(int k, int j, int g, int f) const {
    auto it = comp[k][j].find({g, f});
    if (it == comp[k][j].end()) throw std::invalid_argument("StrictNCat: cells not composable");
    return it->second;
  }

  // the iterated identity on a k-cell, at level l >= k
  int identity_tower(int k, int c, int l) const {
    for (; k < l; ++k) c = id_of[k][c];
    return c;
  }

  bool is_identity_cell(int k, int c) const {
    if (k == 0) return false;
    return id_of[k - 1][cells[k][c].src] == c && cells[k][c].src == cells[k][c].tgt;
  }

  void validate(int exhaustive_threshold = 200, unsigned seed = 12345) const;
};

inline void StrictNCat::validate(int exhaustive_threshold, unsigned seed) const {
  if ((int)cells.size() != dim + 1 || (int)comp.size() != dim + 1 || (int)id_of.size() != dim)
    throw std::logic_error("ncat: table shapes");
  for (int k = 1; k <= dim; ++k)
    for (auto& c : cells[k]) {
      if (c.src < 0 || c.src >= num_cells(k - 1) || c.tgt < 0 || c.tgt >= num_cells(k - 1))
        throw std::logic_error("ncat: boundary out of range");
      if (k >= 2) {
        if (cells[k - 1][c.src].src != cells[k - 1][c.tgt].src || cells[k - 1][c.src].tgt != cells[k - 1][c.tgt].tgt)
          throw std::logic_error("ncat: globularity");
      }
    }
  for (int k = 0; k < dim; ++k) {
    if ((int)id_of[k].size() != num_cells(k)) throw std::logic_error("ncat: id table");
    for (int c = 0; c < num_cells(k); ++c) {
      int i = id_of[k][c];
      if (cells[k + 1][i].src != c || cells[k + 1][i].tgt != c) throw std::logic_error("ncat: id boundary");
    }
  }
  for (int k = 1; k <= dim; ++k) {
    if ((int)comp[k].size() != k) throw std::logic_error("ncat: comp shape");
    for (int j = 0; j < k; ++j) {
      for (int g = 0; g < num_cells(k); ++g)
        for (int f = 0; f < num_cells(k); ++f) {
          bool has = comp[k][j].count({g, f}) > 0;
          if (has != composable(k, j, g, f)) throw std::logic_error("ncat: composability");
          if (!has) continue;
          int h = comp[k][j].at({g, f});
          if (j == k - 1) {
            if (cells[k][h].src != cells[k][f].src || cells[k][h].tgt != cells[k][g].tgt)
              throw std::logic_error("ncat: composite boundary");
          } else {
            if (cells[k][h].src != comp[k - 1][j].at({cells[k][g].src, cells[k][f].src}) ||
                cells[k][h].tgt != comp[k - 1][j].at({cells[k][g].tgt, cells[k][f].tgt}))
              throw std::logic_error("ncat: composite boundary (whiskered)");
          }
        }
      // unit laws
      for (int f = 0; f < num_cells(k); ++f) {
        int s = src_at(k, f, j), t = tgt_at(k, f, j);
        if (comp[k][j].at({f, identity_tower(j, s, k)}) != f) throw std::logic_error("ncat: right unit");
        if (comp[k][j].at({identity_tower(j, t, k), f}) != f) throw std::logic_error("ncat: left unit");
      }
    }
  }
  // associativity and interchange, exhaustive when small, sampled when large
  bool exhaustive = total_cells() <= exhaustive_threshold;
  std::mt19937 rng(seed);
  for (int k = 1; k <= dim; ++k)
    for (int j = 0; j < k; ++j) {
      std::vector<std::pair<int, int>> pairs;
      for (auto& [gf, h] : comp[k][j]) pairs.push_back(gf);
      auto check_assoc = [&](int h, int g, int f) {
        if (!composable(k, j, h, g) || !composable(k, j, g, f)) return;
        if (comp[k][j].at({comp[k][j].at({h, g}), f}) != comp[k][j].at({h, comp[k][j].at({g, f})}))
          throw std::logic_error("ncat: associativity");
      };
      if (exhaustive) {
        for (auto& [g, f] : pairs)
          for (int h = 0; h < num_cells(k); ++h) check_assoc(h, g, f);
      } else {
        for (int s = 0; s < 2000 && !pairs.empty(); ++s) {
          auto& [g, f] = pairs[rng() % pairs.size()];
          check_assoc((int)(rng() % num_cells(k)), g, f);
        }
      }
      // interchange of o_j with o_i for i < j
      for (int i = 0; i < j; ++i) {
        auto check_interchange = [&](int g2, int f2, int g1, int f1) {
          // (g2 o_j f2) o_i (g1 o_j f1) = (g2 o_i g1) o_j (f2 o_i f1)
          if (!composable(k, j, g2, f2) || !composable(k, j, g1, f1)) return;
          if (!composable(k, i, comp[k][j].at({g2, f2}), comp[k][j].at({g1, f1}))) return;
          int lhs = comp[k][i].at({comp[k][j].at({g2, f2}), comp[k][j].at({g1, f1})});
          int rhs = comp[k][j].at({comp[k][i].at({g2, g1}), comp[k][i].at({f2, f1})});
          if (lhs != rhs) throw std::logic_error("ncat: interchange");
        };
        if (exhaustive) {
          for (auto& [g2, f2] : pairs)
            for (auto& [g1, f1] : pairs) check_interchange(g2, f2, g1, f1);
        } else {
          for (int s = 0; s < 2000 && !pairs.empty(); ++s) {
            auto& [g2, f2] = pairs[rng() % pairs.size()];
            auto& [g1, f1] = pairs[rng() % pairs.size()];
            check_interchange(g2, f2, g1, f1);
          }
        }
      }
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline StrictNCat terminal_ncat(int n) {
  StrictNCat a;
  a.dim = n;
  a.cells.resize(n + 1);
  a.id_of.resize(n);
  a.comp.resize(n + 1);
  a.cells[0].push_back({0, 0, "*"});
  for (int k = 1; k <= n; ++k) {
    a.cells[k].push_back({0, 0, "id"});
    a.id_of[k - 1] = {0};
    a.comp[k].resize(k);
    for (int j = 0; j < k; ++j) a.comp[k][j][{0, 0}] = 0;
  }
  a.validate();
  return a;
}

inline StrictNCat empty_ncat(int n) {
  StrictNCat a;
  a.dim = n;
  a.cells.resize(n + 1);
  a.id_of.resize(n);
  a.comp.resize(n + 1);
  for (int k = 1; k <= n; ++k) a.comp[k].resize(k);
  a.validate();
  return a;
}

// A finite category as a 1-dimensional strict n-category.
inline StrictNCat ncat_from_category(const FiniteCategory& c) {
  StrictNCat a;
  a.dim = 1;
  a.cells.resize(2);
  a.id_of.resize(1);
  a.comp.resize(2);
  a.comp[1].resize(1);
  for (auto& o : c.objects) a.cells[0].push_back({0, 0, o});
  for (auto& m : c.morphisms) a.cells[1].push_back(m);
  a.id_of[0] = c.identity;
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int f = 0; f < c.num_morphisms(); ++f)
      if (c.comp[g][f] >= 0) a.comp[1][0][{g, f}] = c.comp[g][f];
  a.validate();
  return a;
}

// The underlying category of 0- and 1-cells.
inline FiniteCategory category_from_ncat(const StrictNCat& a) {
  FiniteCategory c;
  for (auto& o : a.cells[0]) c.objects.push_back(o.name);
  for (auto& m : a.cells[1]) c.morphisms.push_back(m);
  c.identity = a.id_of.empty() ? std::vector<int>{} : a.id_of[0];
  int n = c.num_morphisms();
  c.comp.assign(n, std::vector<int>(n, -1));
  if (a.dim >= 1)
    for (auto& [gf, h] : a.comp[1][0]) c.comp[gf.first][gf.second] = h;
  c.validate();
  return c;
}

// Pads with identity cells up to dimension n (the tau direction).
inline StrictNCat tau_pad_ncat(const StrictNCat& a, int n) {
  if (n < a.dim) throw std::invalid_argument("tau_pad_ncat: lower target dimension");
  if (n == a.dim) return a;
  StrictNCat b = a;
  b.dim = n;
  b.cells.resize(n + 1);
  b.id_of.resize(n);
  b.comp.resize(n + 1);
  int d = a.dim;
  // levels above d mirror level d, with identity structure
  for (int k = d + 1; k <= n; ++k) {
    b.comp[k].resize(k);
    for (int c = 0; c < a.num_cells(d); ++c)
      b.cells[k].push_back({c, c, "id(" + (k == d + 1 ? a.cells[d][c].name : b.cells[k - 1][c].name) + ")"});
    b.id_of[k - 1].resize(b.num_cells(k - 1));
    for (int c = 0; c < b.num_cells(k - 1); ++c) b.id_of[k - 1][c] = c;
    // boundary of a level-(d+1) tower cell is the underlying d-cell; of
    // deeper towers, the previous tower cell (same index either way)
    for (int j = 0; j < k; ++j)
      for (int g = 0; g < b.num_cells(k); ++g)
        for (int f = 0; f < b.num_cells(k); ++f) {
          if (j >= d) {
            if (g == f) b.comp[k][j][{g, f}] = g;
          } else {
            // towers compose to the tower of the underlying composite
            auto it = a.comp[d][j].find({g, f});
            if (it != a.comp[d][j].end()) b.comp[k][j][{g, f}] = it->second;
          }
        }
  }
  b.validate();
  return b;
}

// I(p) as a strict n-category with trivial cells above dimension 1.
inline StrictNCat iso_chain_flat(int p, int n) { return tau_pad_ncat(ncat_from_category(iso_chain(p).cat), n); }

inline StrictNCat ordinal_ncat(int m) { return ncat_from_category(ordinal_category(m)); }

namespace detail {
// Composite key of a chain cell: segment (i0, i1) plus one component cell per
// gap; i0 == i1 with empty components is the identity tower on object i0.
struct ChainKey {
  int i0 = 0, i1 = 0;
  std::vector<int> comps;
  friend bool operator==(const ChainKey&, const ChainKey&) = default;
  friend auto operator<=>(const ChainKey&, const ChainKey&) = default;
};
}  // namespace detail

// The chain gluing Sigma A_1 u_{[0]} ... u_{[0]} Sigma A_m: objects 0..m and
// Hom(i,j) = A_{i+1} x ... x A_j.  With one component this is the suspension.
struct ChainNCat {
  StrictNCat cat;
  std::vector<std::vector<detail::ChainKey>> key;        // key[k][cell], k >= 1
  std::vector<std::map<detail::ChainKey, int>> index;    // per level k >= 1
};

inline ChainNCat chain_ncat(const std::vector<StrictNCat>& comps) {
  int m = (int)comps.size();
  int d = m == 0 ? 0 : comps[0].dim;
  for (auto& c : comps)
    if (c.dim != d) throw std::invalid_argument("chain_ncat: mixed dimensions");
  ChainNCat out;
  StrictNCat& a = out.cat;
  a.dim = d + 1;
  a.cells.resize(d + 2);
  a.id_of.resize(d + 1);
  a.comp.resize(d + 2);
  out.key.resize(d + 2);
  out.index.resize(d + 2);
  for (int i = 0; i <= m; ++i) a.cells[0].push_back({0, 0, std::to_string(i)});
  auto cell_name = [&](const detail::ChainKey& k, int lvl) {
    std::string s = "(" + std::to_string(k.i0) + "|";
    for (size_t t = 0; t < k.comps.size(); ++t)
      s += (t ? "," : "") + comps[k.i0 + t].cells[lvl - 1][k.comps[t]].name;
    return s + "|" + std::to_string(k.i1) + ")";
  };
  for (int k = 1; k <= d + 1; ++k) {
    // identity towers on objects
    for (int i = 0; i <= m; ++i) {
      detail::ChainKey ck{i, i, {}};
      out.index[k][ck] = (int)a.cells[k].size();
      out.key[k].push_back(ck);
      a.cells[k].push_back({0, 0, "id^" + std::to_string(k) + "(" + std::to_string(i) + ")"});
    }
    // tuple cells per segment
    for (int i0 = 0; i0 <= m; ++i0)
      for (int i1 = i0 + 1; i1 <= m; ++i1) {
        std::vector<int> cur(i1 - i0, 0);
        auto rec = [&](auto&& self, int t) -> void {
          if (t == i1 - i0) {
            detail::ChainKey ck{i0, i1, cur};
            out.index[k][ck] = (int)a.cells[k].size();
            out.key[k].push_back(ck);
            a.cells[k].push_back({0, 0, cell_name(ck, k)});
            return;
          }
          for (int c = 0; c < comps[i0 + t].num_cells(k - 1); ++c) {
            cur[t] = c;
            self(self, t + 1);
          }
        };
        rec(rec, 0);
      }
    // boundaries
    for (int c = 0; c < (int)a.cells[k].size(); ++c) {
      auto& ck = out.key[k][c];
      if (k == 1) {
        a.cells[k][c].src = ck.i0;
        a.cells[k][c].tgt = ck.i1;
      } else if (ck.i0 == ck.i1) {
        a.cells[k][c].src = a.cells[k][c].tgt = out.index[k - 1].at(ck);
      } else {
        detail::ChainKey s = ck, t = ck;
        for (size_t u = 0; u < ck.comps.size(); ++u) {
          s.comps[u] = comps[ck.i0 + u].cells[k - 1][ck.comps[u]].src;
          t.comps[u] = comps[ck.i0 + u].cells[k - 1][ck.comps[u]].tgt;
        }
        a.cells[k][c].src = out.index[k - 1].at(s);
        a.cells[k][c].tgt = out.index[k - 1].at(t);
      }
    }
  }
  // identities
  for (int i = 0; i <= m; ++i) a.id_of.at(0).push_back(out.index[1].at({i, i, {}}));
  for (int k = 1; k <= d; ++k) {
    a.id_of[k].resize(a.num_cells(k));
    for (int c = 0; c < a.num_cells(k); ++c) {
      auto ck = out.key[k][c];
      if (ck.i0 != ck.i1)
        for (size_t u = 0; u < ck.comps.size(); ++u) ck.comps[u] = comps[ck.i0 + u].id_of[k - 1][ck.comps[u]];
      a.id_of[k][c] = out.index[k + 1].at(ck);
    }
  }
  // compositions
  for (int k = 1; k <= d + 1; ++k) {
    a.comp[k].resize(k);
    for (int g = 0; g < a.num_cells(k); ++g)
      for (int f = 0; f < a.num_cells(k); ++f) {
        auto& kg = out.key[k][g];
        auto& kf = out.key[k][f];
        // o_0: concatenate along the chain
        if (kf.i1 == kg.i0) {
          detail::ChainKey h{kf.i0, kg.i1, kf.comps};
          h.comps.insert(h.comps.end(), kg.comps.begin(), kg.comps.end());
          a.comp[k][0][{g, f}] = out.index[k].at(h);
        }
        // o_j, j >= 1: componentwise over the same segment
        for (int j = 1; j < k; ++j) {
          if (kf.i0 != kg.i0 || kf.i1 != kg.i1) continue;
          if (kf.i0 == kf.i1) {
            a.comp[k][j][{g, f}] = g;
            continue;
          }
          detail::ChainKey h = kf;
          bool ok = true;
          for (size_t u = 0; u < kf.comps.size() && ok; ++u) {
            auto& cc = comps[kf.i0 + u];
            auto it = cc.comp[k - 1][j - 1].find({kg.comps[u], kf.comps[u]});
            if (it == cc.comp[k - 1][j - 1].end())
              ok = false;
            else
              h.comps[u] = it->second;
          }
          if (ok) a.comp[k][j][{g, f}] = out.index[k].at(h);
        }
      }
  }
  a.validate();
  return out;
}

inline StrictNCat suspension_ncat(const StrictNCat& a) { return chain_ncat({a}).cat; }

inline StrictNCat product_ncat(const StrictNCat& a, const StrictNCat& b) {
  if (a.dim != b.dim) throw std::invalid_argument("product_ncat: dimension mismatch");
  StrictNCat p;
  p.dim = a.dim;
  p.cells.resize(p.dim + 1);
  p.id_of.resize(p.dim);
  p.comp.resize(p.dim + 1);
  std::vector<std::vector<int>> idx(p.dim + 1);
  auto pair_idx = [&](int k, int x, int y) { return x * b.num_cells(k) + y; };
  for (int k = 0; k <= p.dim; ++k) {
    for (int x = 0; x < a.num_cells(k); ++x)
      for (int y = 0; y < b.num_cells(k); ++y) {
        Mor c;
        c.name = "(" + a.cells[k][x].name + "," + b.cells[k][y].name + ")";
        if (k > 0) {
          c.src = pair_idx(k - 1, a.cells[k][x].src, b.cells[k][y].src);
          c.tgt = pair_idx(k - 1, a.cells[k][x].tgt, b.cells[k][y].tgt);
        }
        p.cells[k].push_back(c);
      }
    if (k < p.dim) {
      p.id_of[k].resize(a.num_cells(k) * b.num_cells(k));
      for (int x = 0; x < a.num_cells(k); ++x)
        for (int y = 0; y < b.num_cells(k); ++y)
          p.id_of[k][pair_idx(k, x, y)] = pair_idx(k + 1, a.id_of[k][x], b.id_of[k][y]);
    }
    if (k >= 1) {
      p.comp[k].resize(k);
      for (int j = 0; j < k; ++j)
        for (auto& [gf1, h1] : a.comp[k][j])
          for (auto& [gf2, h2] : b.comp[k][j])
            p.comp[k][j][{pair_idx(k, gf1.first, gf2.first), pair_idx(k, gf1.second, gf2.second)}] =
                pair_idx(k, h1, h2);
    }
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Hom n-1-categories
// ---------------------------------------------------------------------------

struct HomNCat {
  StrictNCat cat;
  std::vector<std::vector<int>> to_ambient;            // hom cell -> ambient cell, per level
  std::vector<std::map<int, int>> from_ambient;        // ambient cell -> hom cell
};

// The hom-(n-1)-category of cells from x to y.
inline HomNCat hom_ncat_object(const StrictNCat& a, int x, int y) {
  HomNCat h;
  h.cat.dim = a.dim - 1;
  h.cat.cells.resize(a.dim);
  h.cat.id_of.resize(a.dim - 1);
  h.cat.comp.resize(a.dim);
  h.to_ambient.resize(a.dim);
  h.from_ambient.resize(a.dim);
  for (int k = 1; k <= a.dim; ++k) {
    for (int c = 0; c < a.num_cells(k); ++c)
      if (a.src_at(k, c, 0) == x && a.tgt_at(k, c, 0) == y) {
        h.from_ambient[k - 1][c] = (int)h.to_ambient[k - 1].size();
        h.to_ambient[k - 1].push_back(c);
        Mor m = a.cells[k][c];
        if (k >= 2) {
          m.src = h.from_ambient[k - 2].at(a.cells[k][c].src);
          m.tgt = h.from_ambient[k - 2].at(a.cells[k][c].tgt);
        } else {
          m.src = m.tgt = 0;
        }
        h.cat.cells[k - 1].push_back(m);
      }
    if (k >= 2) h.cat.comp[k - 1].resize(k - 1);
  }
  for (int k = 1; k < a.dim; ++k) {
    h.cat.id_of[k - 1].resize(h.cat.num_cells(k - 1));
    for (int c = 0; c < h.cat.num_cells(k - 1); ++c)
      h.cat.id_of[k - 1][c] = h.from_ambient[k].at(a.id_of[k][h.to_ambient[k - 1][c]]);
  }
  for (int k = 2; k <= a.dim; ++k)
    for (int j = 1; j < k; ++j)
      for (auto& [gf, c] : a.comp[k][j]) {
        auto ig = h.from_ambient[k - 1].find(gf.first);
        auto f_ = h.from_ambient[k - 1].find(gf.second);
        if (ig != h.from_ambient[k - 1].end() && f_ != h.from_ambient[k - 1].end())
          h.cat.comp[k - 1][j - 1][{ig->second, f_->second}] = h.from_ambient[k - 1].at(c);
      }
  h.cat.validate();
  return h;
}

// ---------------------------------------------------------------------------
// Equivalence cells and gauntness
// ---------------------------------------------------------------------------

// equivalence_by_dim[k]: the k-cells that are equivalences, computed from the
// top dimension down (strict inverses at the top, weak inverses below).
inline std::vector<std::set<int>> equivalence_cells_all(const StrictNCat& a) {
  std::vector<std::set<int>> eq(a.dim + 1);
  for (int k = a.dim; k >= 1; --k) {
    for (int f = 0; f < a.num_cells(k); ++f) {
      int s = a.cells[k][f].src, t = a.cells[k][f].tgt;
      for (int g = 0; g < a.num_cells(k); ++g) {
        if (a.cells[k][g].src != t || a.cells[k][g].tgt != s) continue;
        int gf = a.comp[k][k - 1].at({g, f});
        int fg = a.comp[k][k - 1].at({f, g});
        int ids = a.id_of[k - 1][s], idt = a.id_of[k - 1][t];
        bool ok;
        if (k == a.dim) {
          ok = gf == ids && fg == idt;
        } else {
          auto connected = [&](int u, int v) {
            if (u == v) return true;
            for (int e : eq[k + 1])
              if ((a.cells[k + 1][e].src == u && a.cells[k + 1][e].tgt == v) ||
                  (a.cells[k + 1][e].src == v && a.cells[k + 1][e].tgt == u))
                return true;
            return false;
          };
          ok = connected(gf, ids) && connected(fg, idt);
        }
        if (ok) {
          eq[k].insert(f);
          break;
        }
      }
    }
  }
  return eq;
}

inline std::set<int> equivalence_cells(const StrictNCat& a, int k) {
  if (k < 1 || k > a.dim) throw std::invalid_argument("equivalence_cells: bad dimension");
  return equivalence_cells_all(a)[k];
}

inline bool is_gaunt_in_dimension(const StrictNCat& a, int k) {
  for (int c : equivalence_cells(a, k))
    if (!a.is_identity_cell(k, c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// n-functors
// ---------------------------------------------------------------------------

// Total cell map, one table per dimension.
struct NFunctor {
  std::vector<std::vector<int>> table;

  friend bool operator==(const NFunctor&, const NFunctor&) = default;
  friend auto operator<=>(const NFunctor&, const NFunctor&) = default;

  Elem to_elem() const {
    Elem e("nfun");
    for (auto& t : table) {
      e.ints.push_back((int)t.size());
      e.ints.insert(e.ints.end(), t.begin(), t.end());
    }
    return e;
  }
};

inline bool nfunctor_valid(const StrictNCat& a, const StrictNCat& b, const NFunctor& F) {
  if ((int)F.table.size() != a.dim + 1) return false;
  for (int k = 0; k <= a.dim; ++k) {
    if ((int)F.table[k].size() != a.num_cells(k)) return false;
    for (int c = 0; c < a.num_cells(k); ++c) {
      int d = F.table[k][c];
      if (d < 0 || d >= b.num_cells(k)) return false;
      if (k >= 1 && (b.cells[k][d].src != F.table[k - 1][a.cells[k][c].src] ||
                     b.cells[k][d].tgt != F.table[k - 1][a.cells[k][c].tgt]))
        return false;
    }
  }
  for (int k = 0; k < a.dim; ++k)
    for (int c = 0; c < a.num_cells(k); ++c)
      if (F.table[k + 1][a.id_of[k][c]] != b.id_of[k][F.table[k][c]]) return false;
  for (int k = 1; k <= a.dim; ++k)
    for (int j = 0; j < k; ++j)
      for (auto& [gf, h] : a.comp[k][j])
        if (b.comp[k][j].at({F.table[k][gf.first], F.table[k][gf.second]}) != F.table[k][h]) return false;
  return true;
}

inline NFunctor compose_nfunctors(const NFunctor& g, const NFunctor& f) {
  NFunctor h;
  h.table.resize(f.table.size());
  for (size_t k = 0; k < f.table.size(); ++k)
    for (int c : f.table[k]) h.table[k].push_back(g.table[k][c]);
  return h;
}

inline NFunctor identity_nfunctor(const StrictNCat& a) {
  NFunctor f;
  f.table.resize(a.dim + 1);
  for (int k = 0; k <= a.dim; ++k) {
    f.table[k].resize(a.num_cells(k));
    for (int c = 0; c < a.num_cells(k); ++c) f.table[k][c] = c;
  }
  return f;
}

// All strict n-functors A -> B, by cellwise backtracking with boundary and
// composition pruning.  Guarded; enumeration is exponential in cell count.
inline std::vector<NFunctor> enumerate_nfunctors(const StrictNCat& a, const StrictNCat& b,
                                                 long size_guard = 2000000L) {
  std::vector<NFunctor> out;
  NFunctor F;
  F.table.resize(a.dim + 1);
  for (int k = 0; k <= a.dim; ++k) F.table[k].assign(a.num_cells(k), -1);
  // assignment order: each higher cell right after its boundary becomes
  // available, so boundary constraints prune before all objects are fixed
  std::vector<std::pair<int, int>> order;
  std::vector<std::vector<char>> placed(a.dim + 1);
  for (int k = 0; k <= a.dim; ++k) placed[k].assign(a.num_cells(k), 0);
  auto sweep_higher = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int k = 1; k <= a.dim; ++k)
        for (int c = 0; c < a.num_cells(k); ++c) {
          if (placed[k][c] || !placed[k - 1][a.cells[k][c].src] || !placed[k - 1][a.cells[k][c].tgt]) continue;
          placed[k][c] = 1;
          order.push_back({k, c});
          changed = true;
        }
    }
  };
  for (int c = 0; c < a.num_cells(0); ++c) {
    placed[0][c] = 1;
    order.push_back({0, c});
    sweep_higher();
  }
  // dynamic budget instead of a static estimate: count search nodes
  long steps = 0;
  auto charge = [&]() {
    if (++steps > size_guard)
      throw SizeGuardError("enumerate_nfunctors: search exceeded guard of " + std::to_string(size_guard) +
                           " nodes");
  };
  auto prune_ok = [&](int k, int c) {
    // any composite with both factors and result assigned must be preserved
    for (int j = 0; j < k; ++j)
      for (auto& [gf, h] : a.comp[k][j]) {
        if (gf.first != c && gf.second != c && h != c) continue;
        int Fg = F.table[k][gf.first], Ff = F.table[k][gf.second], Fh = F.table[k][h];
        if (Fg < 0 || Ff < 0 || Fh < 0) continue;
        auto it = b.comp[k][j].find({Fg, Ff});
        if (it == b.comp[k][j].end() || it->second != Fh) return false;
      }
    return true;
  };
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == order.size()) {
      if (nfunctor_valid(a, b, F)) out.push_back(F);
      return;
    }
    auto [k, c] = order[pos];
    charge();
    if (k >= 1) {
      // forced by identities
      if (a.is_identity_cell(k, c)) {
        int d = b.id_of[k - 1][F.table[k - 1][a.cells[k][c].src]];
        F.table[k][c] = d;
        if (prune_ok(k, c)) self(self, pos + 1);
        F.table[k][c] = -1;
        return;
      }
      int bs = F.table[k - 1][a.cells[k][c].src], bt = F.table[k - 1][a.cells[k][c].tgt];
      for (int d = 0; d < b.num_cells(k); ++d) {
        if (b.cells[k][d].src != bs || b.cells[k][d].tgt != bt) continue;
        F.table[k][c] = d;
        if (prune_ok(k, c)) self(self, pos + 1);
        F.table[k][c] = -1;
      }
      return;
    }
    for (int d = 0; d < b.num_cells(0); ++d) {
      F.table[0][c] = d;
      self(self, pos + 1);
    }
    F.table[0][c] = -1;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace theta

#endif
