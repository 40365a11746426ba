#ifndef THETA_NERVE_HPP
#define THETA_NERVE_HPP

#include <map>
#include <vector>

#include "theta/strict_ncat.hpp"
#include "theta/theta_cell.hpp"

namespace theta {

// ---------------------------------------------------------------------------
// Pasting schemes: the free strict n-category on a Theta_n object
// ---------------------------------------------------------------------------

struct ThetaNCat {
  ThetaObject shape;
  StrictNCat cat;
  std::vector<ThetaNCat> child;
  // chain bookkeeping (levels 1..dim), absent for the leaf
  std::vector<std::vector<detail::ChainKey>> key;
  std::vector<std::map<detail::ChainKey, int>> index;
  // generating cells per level; their boundaries are again generators
  std::vector<std::vector<int>> gens;
};

inline ThetaNCat theta_ncat(const ThetaObject& shape) {
  ThetaNCat t;
  t.shape = shape;
  if (shape.dim == 0) {
    t.cat = terminal_ncat(0);
    t.gens = {{0}};
    return t;
  }
  std::vector<StrictNCat> kid_cats;
  for (auto& c : shape.children) {
    t.child.push_back(theta_ncat(c));
    kid_cats.push_back(t.child.back().cat);
  }
  // arity-0 node still needs children of the right dimension for chain_ncat;
  // an empty list of components at dimension shape.dim - 1 works directly
  if (shape.arity() == 0 && shape.dim >= 2) {
    // chain_ncat infers component dimension from the list; build by hand
    ChainNCat cn;
    cn.cat = terminal_ncat(shape.dim);
    cn.key.resize(shape.dim + 1);
    cn.index.resize(shape.dim + 1);
    for (int k = 1; k <= shape.dim; ++k) {
      cn.key[k].push_back({0, 0, {}});
      cn.index[k][{0, 0, {}}] = 0;
    }
    t.cat = cn.cat;
    t.key = cn.key;
    t.index = cn.index;
  } else {
    auto cn = chain_ncat(kid_cats);
    t.cat = cn.cat;
    t.key = cn.key;
    t.index = cn.index;
  }
  t.gens.resize(shape.dim + 1);
  for (int i = 0; i <= shape.arity(); ++i) t.gens[0].push_back(i);
  for (int k = 1; k <= shape.dim; ++k)
    for (int i = 1; i <= shape.arity(); ++i)
      for (int g : (k - 1 < (int)t.child[i - 1].gens.size() ? t.child[i - 1].gens[k - 1] : std::vector<int>{}))
        t.gens[k].push_back(t.index[k].at({i - 1, i, {g}}));
  return t;
}

// The strict functor between pasting schemes induced by a Theta morphism.
inline NFunctor theta_functor(const ThetaNCat& s, const ThetaNCat& t, const ThetaMorphism& psi) {
  NFunctor F;
  int n = s.shape.dim;
  F.table.resize(n + 1);
  if (n == 0) {
    F.table[0] = {0};
    return F;
  }
  auto& phi = psi.delta;
  F.table[0].resize(s.cat.num_cells(0));
  for (int i = 0; i <= s.shape.arity(); ++i) F.table[0][i] = phi(i);
  // block functors, computed once per (i, j)
  std::map<std::pair<int, int>, NFunctor> block;
  if (n >= 2)
    for (int i = 1; i <= s.shape.arity(); ++i)
      for (int j = phi(i - 1) + 1; j <= phi(i); ++j)
        block[{i, j}] = theta_functor(s.child[i - 1], t.child[j - 1], psi.blocks.at({i, j}));
  for (int k = 1; k <= n; ++k) {
    F.table[k].resize(s.cat.num_cells(k));
    for (int c = 0; c < s.cat.num_cells(k); ++c) {
      auto& ck = s.key[k][c];
      int j0 = phi(ck.i0), j1 = phi(ck.i1);
      if (ck.i0 == ck.i1 || j0 == j1) {
        F.table[k][c] = t.index[k].at({j0, j0, {}});
        continue;
      }
      detail::ChainKey out{j0, j1, std::vector<int>(j1 - j0, 0)};
      for (int j = j0 + 1; j <= j1; ++j) {
        int i = -1;
        for (int ii = ck.i0 + 1; ii <= ck.i1; ++ii)
          if (phi(ii - 1) < j && j <= phi(ii)) {
            i = ii;
            break;
          }
        if (i < 0) throw std::logic_error("theta_functor: block routing failed");
        int comp = ck.comps[i - ck.i0 - 1];
        out.comps[j - j0 - 1] = (n == 1) ? 0 : block.at({i, j}).table[k - 1][comp];
      }
      F.table[k][c] = t.index[k].at(out);
    }
  }
  return F;
}

// ---------------------------------------------------------------------------
// Nerve levels
// ---------------------------------------------------------------------------

// Extend a partial table defined on generators to the whole pasting scheme by
// closing under identities and composition.
inline NFunctor propagate_from_generators(const ThetaNCat& tn, const StrictNCat& a, NFunctor F) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < tn.cat.dim; ++k)
      for (int c = 0; c < tn.cat.num_cells(k); ++c)
        if (F.table[k][c] >= 0 && F.table[k + 1][tn.cat.id_of[k][c]] < 0) {
          F.table[k + 1][tn.cat.id_of[k][c]] = a.id_of[k][F.table[k][c]];
          changed = true;
        }
    for (int k = 1; k <= tn.cat.dim; ++k)
      for (int j = 0; j < k; ++j)
        for (auto& [gf, h] : tn.cat.comp[k][j]) {
          int fg = F.table[k][gf.first], ff = F.table[k][gf.second];
          if (fg < 0 || ff < 0) continue;
          int v = a.comp[k][j].at({fg, ff});
          if (F.table[k][h] < 0) {
            F.table[k][h] = v;
            changed = true;
          } else if (F.table[k][h] != v) {
            throw std::logic_error("propagate_from_generators: conflicting composites");
          }
        }
  }
  for (auto& t : F.table)
    for (int v : t)
      if (v < 0) throw std::logic_error("propagate_from_generators: incomplete closure");
  return F;
}

// The set of theta-shaped cells of A: strict functors from the pasting scheme
// of theta into A, enumerated over generator labelings.
inline std::vector<NFunctor> nerve_level(const StrictNCat& a, const ThetaNCat& tn) {
  if (tn.cat.dim != a.dim) throw std::invalid_argument("nerve_level: dimension mismatch");
  std::vector<std::pair<int, int>> order;
  for (int k = 0; k <= tn.cat.dim; ++k)
    for (int g : tn.gens[k]) order.push_back({k, g});
  NFunctor F;
  F.table.resize(tn.cat.dim + 1);
  for (int k = 0; k <= tn.cat.dim; ++k) F.table[k].assign(tn.cat.num_cells(k), -1);
  std::vector<NFunctor> out;
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (pos == order.size()) {
      auto total = propagate_from_generators(tn, a, F);
      if (!nfunctor_valid(tn.cat, a, total)) throw std::logic_error("nerve_level: closure is not a functor");
      out.push_back(std::move(total));
      return;
    }
    auto [k, c] = order[pos];
    for (int d = 0; d < a.num_cells(k); ++d) {
      if (k >= 1) {
        int bs = F.table[k - 1][tn.cat.cells[k][c].src], bt = F.table[k - 1][tn.cat.cells[k][c].tgt];
        if (a.cells[k][d].src != bs || a.cells[k][d].tgt != bt) continue;
      }
      F.table[k][c] = d;
      self(self, pos + 1);
      F.table[k][c] = -1;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<NFunctor> nerve_level(const StrictNCat& a, const ThetaObject& shape) {
  auto tn = theta_ncat(apply_tau({a.dim, shape.dim}, shape));
  return nerve_level(a, tn);
}

// Contravariant action: precompose a theta'-cell with the structural functor
// of psi : theta -> theta'.
inline NFunctor nerve_act(const ThetaNCat& s, const ThetaNCat& t, const ThetaMorphism& psi, const NFunctor& w) {
  return compose_nfunctors(w, theta_functor(s, t, psi));
}

// ---------------------------------------------------------------------------
// Chain decomposition of nerve cells over [m](c_1,...,c_m)
// ---------------------------------------------------------------------------

// The component of w over the i-th gap (1-based), as a functor from the
// pasting scheme of c_i into hom_A(x_{i-1}, x_i).
inline NFunctor chain_component(const ThetaNCat& tn, const StrictNCat& a, const HomNCat& hom, const NFunctor& w,
                                int i) {
  NFunctor f;
  int d = tn.shape.dim - 1;
  f.table.resize(d + 1);
  for (int k = 0; k <= d; ++k) {
    auto& ch = tn.child[i - 1];
    f.table[k].resize(ch.cat.num_cells(k));
    for (int c = 0; c < ch.cat.num_cells(k); ++c)
      f.table[k][c] = hom.from_ambient[k].at(w.table[k + 1][tn.index[k + 1].at({i - 1, i, {c}})]);
  }
  return f;
}

// Rebuild a nerve cell from objects x_0..x_m and per-gap hom-valued functors.
inline NFunctor chain_recompose(const ThetaNCat& tn, const StrictNCat& a, const std::vector<int>& x,
                                const std::vector<HomNCat>& homs, const std::vector<NFunctor>& comps) {
  NFunctor w;
  int n = tn.shape.dim;
  w.table.resize(n + 1);
  w.table[0] = x;
  for (int k = 1; k <= n; ++k) {
    w.table[k].resize(tn.cat.num_cells(k));
    for (int c = 0; c < tn.cat.num_cells(k); ++c) {
      auto& ck = tn.key[k][c];
      if (ck.i0 == ck.i1) {
        w.table[k][c] = a.identity_tower(0, x[ck.i0], k);
        continue;
      }
      int acc = -1;
      for (int l = 0; l < (int)ck.comps.size(); ++l) {
        int gap = ck.i0 + 1 + l;
        int v = homs[gap - 1].to_ambient[k - 1][comps[gap - 1].table[k - 1][ck.comps[l]]];
        acc = (acc < 0) ? v : a.comp[k][0].at({v, acc});
      }
      w.table[k][c] = acc;
    }
  }
  return w;
}

}  // namespace theta

#endif
