#ifndef THETA_PRESHEAF_HPP
#define THETA_PRESHEAF_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "theta/elem.hpp"
#include "theta/nerve.hpp"
#include "theta/strict_ncat.hpp"
#include "theta/theta_cell.hpp"

namespace theta {

// ---------------------------------------------------------------------------
// Lazy simplicial presheaves on Theta_n
// ---------------------------------------------------------------------------

// Levels are finite element sets indexed by (theta, simplicial degree).  The
// two contravariant actions are along Theta morphisms (at fixed degree) and
// ordinal maps (at fixed shape).
struct PresheafImpl {
  virtual ~PresheafImpl() = default;
  virtual int base_dim() const = 0;
  virtual std::string name() const = 0;
  virtual std::vector<Elem> eval(const ThetaObject& th, int p) const = 0;
  // x lives over (psi.target, p); result over (psi.source, p)
  virtual Elem act_theta(const ThetaMorphism& psi, int p, const Elem& x) const = 0;
  // x lives over (th, alpha.target); result over (th, alpha.source)
  virtual Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& x) const = 0;
};

class LazyPresheaf {
 public:
  LazyPresheaf() = default;
  explicit LazyPresheaf(std::shared_ptr<const PresheafImpl> i) : impl_(std::move(i)) {}

  int base_dim() const { return impl_->base_dim(); }
  std::string name() const { return impl_->name(); }

  const std::vector<Elem>& eval(const ThetaObject& th, int p) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto key = std::make_pair(th, p);
    auto it = cache_->levels.find(key);
    if (it != cache_->levels.end()) return it->second;
    auto v = impl_->eval(th, p);
    std::sort(v.begin(), v.end());
    return cache_->levels.emplace(key, std::move(v)).first->second;
  }

  Elem act(const ThetaMorphism& psi, int p, const Elem& x) const { return impl_->act_theta(psi, p, x); }
  Elem act(const OrdinalMap& alpha, const ThetaObject& th, const Elem& x) const {
    return impl_->act_simplicial(alpha, th, x);
  }

  int index_of(const ThetaObject& th, int p, const Elem& x) const {
    auto& lvl = eval(th, p);
    auto it = std::lower_bound(lvl.begin(), lvl.end(), x);
    if (it == lvl.end() || !(*it == x)) throw std::invalid_argument("LazyPresheaf: element not in level");
    return (int)(it - lvl.begin());
  }

  std::shared_ptr<const PresheafImpl> impl() const { return impl_; }

 private:
  struct Cache {
    std::mutex mu;
    std::map<std::pair<ThetaObject, int>, std::vector<Elem>> levels;
  };
  std::shared_ptr<const PresheafImpl> impl_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

namespace detail {
inline void require_dim(const ThetaObject& th, int n, const char* who) {
  if (th.dim != n) throw std::invalid_argument(std::string(who) + ": shape dimension mismatch");
}

// all-zero ordinal map [p] -> [0]
inline OrdinalMap to_point(int p) { return OrdinalMap(p, 0, std::vector<int>(p + 1, 0)); }

inline std::vector<std::vector<Elem>> cartesian(const std::vector<std::vector<Elem>>& factors) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> cur;
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == factors.size()) {
      out.push_back(cur);
      return;
    }
    for (auto& e : factors[i]) {
      cur.push_back(e);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Basic combinators
// ---------------------------------------------------------------------------

namespace detail {

struct EmptyImpl : PresheafImpl {
  int n;
  explicit EmptyImpl(int n_) : n(n_) {}
  int base_dim() const override { return n; }
  std::string name() const override { return "empty"; }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    require_dim(th, n, "empty");
    return {};
  }
  Elem act_theta(const ThetaMorphism&, int, const Elem&) const override {
    throw std::logic_error("empty presheaf has no elements");
  }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem&) const override {
    throw std::logic_error("empty presheaf has no elements");
  }
};

struct TerminalImpl : PresheafImpl {
  int n;
  explicit TerminalImpl(int n_) : n(n_) {}
  int base_dim() const override { return n; }
  std::string name() const override { return "terminal"; }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    require_dim(th, n, "terminal");
    return {Elem("*")};
  }
  Elem act_theta(const ThetaMorphism&, int, const Elem& x) const override { return x; }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
};

struct RepresentableImpl : PresheafImpl {
  ThetaObject obj;
  explicit RepresentableImpl(ThetaObject o) : obj(std::move(o)) {}
  int base_dim() const override { return obj.dim; }
  std::string name() const override { return "F(" + obj.str() + ")"; }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    require_dim(th, obj.dim, "representable");
    std::vector<Elem> out;
    for (auto& f : hom_theta(th, obj)) out.push_back(f.to_elem());
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int, const Elem& x) const override {
    for (auto& f : hom_theta(psi.target, obj))
      if (f.to_elem() == x) return compose(f, psi).to_elem();
    throw std::invalid_argument("representable: unknown element");
  }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
};

struct NerveImpl : PresheafImpl {
  StrictNCat a;
  mutable std::mutex mu;
  mutable std::map<ThetaObject, std::shared_ptr<ThetaNCat>> schemes;
  explicit NerveImpl(StrictNCat a_) : a(std::move(a_)) {}
  int base_dim() const override { return a.dim; }
  std::string name() const override { return "nerve"; }
  std::shared_ptr<ThetaNCat> scheme(const ThetaObject& th) const {
    std::lock_guard<std::mutex> lock(mu);
    auto it = schemes.find(th);
    if (it != schemes.end()) return it->second;
    auto tn = std::make_shared<ThetaNCat>(theta_ncat(th));
    schemes[th] = tn;
    return tn;
  }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    require_dim(th, a.dim, "nerve");
    std::vector<Elem> out;
    for (auto& f : nerve_level(a, *scheme(th))) out.push_back(f.to_elem());
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int, const Elem& x) const override {
    NFunctor w;
    for (size_t i = 0; i < x.ints.size();) {
      int sz = x.ints[i++];
      w.table.emplace_back(x.ints.begin() + i, x.ints.begin() + i + sz);
      i += sz;
    }
    return nerve_act(*scheme(psi.source), *scheme(psi.target), psi, w).to_elem();
  }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
};

struct WalkingEquivalenceImpl : PresheafImpl {
  int p, n;
  WalkingEquivalenceImpl(int p_, int n_) : p(p_), n(n_) {}
  int base_dim() const override { return n; }
  std::string name() const override { return "E(" + std::to_string(p) + ")"; }
  std::vector<Elem> eval(const ThetaObject& th, int) const override {
    require_dim(th, n, "walking_equivalence");
    // vertex labelings of the top-level ordinal in 0..p
    int m = th.arity();
    std::vector<Elem> out;
    std::vector<int> lab(m + 1, 0);
    auto rec = [&](auto&& self, int i) -> void {
      if (i > m) {
        out.push_back(Elem("lab", lab));
        return;
      }
      for (int v = 0; v <= p; ++v) {
        lab[i] = v;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int, const Elem& x) const override {
    if (n == 0) return x;
    std::vector<int> lab(psi.source.arity() + 1);
    for (int i = 0; i <= psi.source.arity(); ++i) lab[i] = x.ints[psi.delta(i)];
    return Elem("lab", lab);
  }
  Elem act_simplicial(const OrdinalMap&, const ThetaObject&, const Elem& x) const override { return x; }
};

struct ConstantSimplexImpl : PresheafImpl {
  int p, n;
  ConstantSimplexImpl(int p_, int n_) : p(p_), n(n_) {}
  int base_dim() const override { return n; }
  std::string name() const override { return "Delta[" + std::to_string(p) + "]"; }
  std::vector<Elem> eval(const ThetaObject& th, int q) const override {
    require_dim(th, n, "constant_simplex");
    std::vector<Elem> out;
    for (auto& f : enumerate_ordinal_maps(q, p)) out.push_back(Elem("smap", f.values));
    return out;
  }
  Elem act_theta(const ThetaMorphism&, int, const Elem& x) const override { return x; }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject&, const Elem& x) const override {
    std::vector<int> v(alpha.source + 1);
    for (int i = 0; i <= alpha.source; ++i) v[i] = x.ints[alpha(i)];
    return Elem("smap", v);
  }
};

struct ProductImpl : PresheafImpl {
  LazyPresheaf x, y;
  ProductImpl(LazyPresheaf x_, LazyPresheaf y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.base_dim() != y.base_dim()) throw std::invalid_argument("product: base mismatch");
  }
  int base_dim() const override { return x.base_dim(); }
  std::string name() const override { return "(" + x.name() + " x " + y.name() + ")"; }
  std::vector<Elem> eval(const ThetaObject& th, int p) const override {
    std::vector<Elem> out;
    for (auto& a : x.eval(th, p))
      for (auto& b : y.eval(th, p)) out.push_back(Elem("pair", {}, {a, b}));
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    return Elem("pair", {}, {x.act(psi, p, e.kids[0]), y.act(psi, p, e.kids[1])});
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& e) const override {
    return Elem("pair", {}, {x.act(alpha, th, e.kids[0]), y.act(alpha, th, e.kids[1])});
  }
};

struct CoproductImpl : PresheafImpl {
  std::vector<LazyPresheaf> parts;
  explicit CoproductImpl(std::vector<LazyPresheaf> ps) : parts(std::move(ps)) {
    for (auto& p : parts)
      if (p.base_dim() != parts[0].base_dim()) throw std::invalid_argument("coproduct: base mismatch");
  }
  int base_dim() const override { return parts[0].base_dim(); }
  std::string name() const override { return "coproduct"; }
  std::vector<Elem> eval(const ThetaObject& th, int p) const override {
    std::vector<Elem> out;
    for (int i = 0; i < (int)parts.size(); ++i)
      for (auto& e : parts[i].eval(th, p)) out.push_back(Elem("in", {i}, {e}));
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    return Elem("in", e.ints, {parts[e.ints[0]].act(psi, p, e.kids[0])});
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& e) const override {
    return Elem("in", e.ints, {parts[e.ints[0]].act(alpha, th, e.kids[0])});
  }
};

// V[m](X_1,...,X_m): levelwise a coproduct over simplex maps of products of
// lower-dimensional levels.
struct IntertwineImpl : PresheafImpl {
  std::vector<LazyPresheaf> xs;
  int n;  // resulting base dimension
  explicit IntertwineImpl(std::vector<LazyPresheaf> xs_) : xs(std::move(xs_)) {
    n = xs.empty() ? 1 : xs[0].base_dim() + 1;
    for (auto& x : xs)
      if (x.base_dim() != n - 1) throw std::invalid_argument("intertwine: base mismatch");
  }
  // slots for (delta, l): pairs (i, j), i = 1..l, delta(i-1) < j <= delta(i)
  static std::vector<std::pair<int, int>> slots(const OrdinalMap& delta) {
    std::vector<std::pair<int, int>> s;
    for (int i = 1; i <= delta.source; ++i)
      for (int j = delta(i - 1) + 1; j <= delta(i); ++j) s.push_back({i, j});
    return s;
  }
  int base_dim() const override { return n; }
  std::string name() const override { return "V[" + std::to_string(xs.size()) + "]"; }
  std::vector<Elem> eval(const ThetaObject& th, int p) const override {
    require_dim(th, n, "intertwine");
    std::vector<Elem> out;
    for (auto& delta : enumerate_ordinal_maps(th.arity(), (int)xs.size())) {
      std::vector<std::vector<Elem>> factors;
      for (auto& [i, j] : slots(delta))
        factors.push_back(xs[j - 1].eval(n == 1 ? theta_leaf() : th.children[i - 1], p));
      for (auto& tup : cartesian(factors)) out.push_back(Elem("V", delta.values, tup));
    }
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    OrdinalMap delta(psi.target.arity(), (int)xs.size(), e.ints);
    auto tslots = slots(delta);
    OrdinalMap dsrc = theta::compose(delta, psi.delta);
    Elem out("V", dsrc.values);
    for (auto& [i2, j] : slots(dsrc)) {
      int i = -1;
      for (int ii = psi.delta(i2 - 1) + 1; ii <= psi.delta(i2); ++ii)
        if (delta(ii - 1) < j && j <= delta(ii)) {
          i = ii;
          break;
        }
      if (i < 0) throw std::logic_error("intertwine act: slot routing failed");
      int pos = (int)(std::find(tslots.begin(), tslots.end(), std::make_pair(i, j)) - tslots.begin());
      const Elem& x = e.kids[pos];
      out.kids.push_back(n == 1 ? x : xs[j - 1].act(psi.blocks.at({i2, i}), p, x));
    }
    return out;
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& e) const override {
    OrdinalMap delta(th.arity(), (int)xs.size(), e.ints);
    Elem out("V", e.ints);
    auto ss = slots(delta);
    for (size_t s = 0; s < ss.size(); ++s)
      out.kids.push_back(xs[ss[s].second - 1].act(alpha, n == 1 ? theta_leaf() : th.children[ss[s].first - 1], e.kids[s]));
    return out;
  }
};

struct MappingObjectImpl : PresheafImpl {
  LazyPresheaf w;
  Elem x, y;
  MappingObjectImpl(LazyPresheaf w_, Elem x_, Elem y_) : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)) {
    auto& lvl = w.eval(theta_zero(w.base_dim()), 0);
    if (std::find(lvl.begin(), lvl.end(), x) == lvl.end() || std::find(lvl.begin(), lvl.end(), y) == lvl.end())
      throw std::invalid_argument("mapping_object: endpoints not elements of W([0],0)");
  }
  int base_dim() const override { return w.base_dim() - 1; }
  std::string name() const override { return "map_" + w.name(); }
  // the two vertex inclusions [0] -> [1](c)
  std::pair<ThetaMorphism, ThetaMorphism> vertices(const ThetaObject& c) const {
    auto hs = hom_theta(theta_zero(w.base_dim()), suspend_object(c));
    ThetaMorphism v0, v1;
    for (auto& h : hs)
      (h.delta(0) == 0 ? v0 : v1) = h;
    return {v0, v1};
  }
  Elem endpoint_at(const Elem& e, int p) const {
    return p == 0 ? e : w.act(detail::to_point(p), theta_zero(w.base_dim()), e);
  }
  std::vector<Elem> eval(const ThetaObject& c, int p) const override {
    require_dim(c, w.base_dim() - 1, "mapping_object");
    auto [v0, v1] = vertices(c);
    Elem xp = endpoint_at(x, p), yp = endpoint_at(y, p);
    std::vector<Elem> out;
    for (auto& e : w.eval(suspend_object(c), p))
      if (w.act(v0, p, e) == xp && w.act(v1, p, e) == yp) out.push_back(e);
    return out;
  }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    ThetaMorphism s;
    s.source = suspend_object(psi.source);
    s.target = suspend_object(psi.target);
    s.delta = OrdinalMap::identity(1);
    if (s.source.dim > 1) s.blocks[{1, 1}] = psi;
    return w.act(s, p, e);
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& c, const Elem& e) const override {
    return w.act(alpha, suspend_object(c), e);
  }
};

// pullback along tau: levels of the underlying lower-dimensional object
struct TauStarImpl : PresheafImpl {
  LazyPresheaf w;
  int j;
  TauStarImpl(LazyPresheaf w_, int j_) : w(std::move(w_)), j(j_) {}
  int base_dim() const override { return j; }
  std::string name() const override { return "tau*_" + std::to_string(j) + "(" + w.name() + ")"; }
  std::vector<Elem> eval(const ThetaObject& th, int p) const override {
    require_dim(th, j, "tau_star");
    return w.eval(apply_tau({w.base_dim(), j}, th), p);
  }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    return w.act(tau_morphism({w.base_dim(), j}, psi), p, e);
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& e) const override {
    return w.act(alpha, apply_tau({w.base_dim(), j}, th), e);
  }
};

}  // namespace detail

inline LazyPresheaf empty_presheaf(int n) { return LazyPresheaf(std::make_shared<detail::EmptyImpl>(n)); }
inline LazyPresheaf terminal_presheaf(int n) { return LazyPresheaf(std::make_shared<detail::TerminalImpl>(n)); }
inline LazyPresheaf representable(const ThetaObject& th) {
  return LazyPresheaf(std::make_shared<detail::RepresentableImpl>(th));
}
inline LazyPresheaf nerve(const StrictNCat& a) { return LazyPresheaf(std::make_shared<detail::NerveImpl>(a)); }
inline LazyPresheaf walking_equivalence(int p, int n) {
  return LazyPresheaf(std::make_shared<detail::WalkingEquivalenceImpl>(p, n));
}
inline LazyPresheaf constant_simplex(int p, int n) {
  return LazyPresheaf(std::make_shared<detail::ConstantSimplexImpl>(p, n));
}
inline LazyPresheaf product(const LazyPresheaf& x, const LazyPresheaf& y) {
  return LazyPresheaf(std::make_shared<detail::ProductImpl>(x, y));
}
inline LazyPresheaf coproduct(std::vector<LazyPresheaf> parts) {
  return LazyPresheaf(std::make_shared<detail::CoproductImpl>(std::move(parts)));
}
inline LazyPresheaf intertwine(std::vector<LazyPresheaf> xs) {
  return LazyPresheaf(std::make_shared<detail::IntertwineImpl>(std::move(xs)));
}
inline LazyPresheaf mapping_object(const LazyPresheaf& w, const Elem& x, const Elem& y) {
  return LazyPresheaf(std::make_shared<detail::MappingObjectImpl>(w, x, y));
}
inline LazyPresheaf tau_star(const LazyPresheaf& w, int j) {
  return LazyPresheaf(std::make_shared<detail::TauStarImpl>(w, j));
}

// ---------------------------------------------------------------------------
// Simplicial diagonal
// ---------------------------------------------------------------------------

// A degree-indexed family p |-> X_p with reindexing X_p -> X_q along
// alpha : [q] -> [p]; reindex(alpha, th, deg, e) maps an element of
// X_{alpha.target}(th, deg) to X_{alpha.source}(th, deg).
struct SimplicialFamily {
  int n = 0;
  std::function<LazyPresheaf(int)> member;
  std::function<Elem(const OrdinalMap&, const ThetaObject&, int, const Elem&)> reindex;
};

namespace detail {
struct DiagonalImpl : PresheafImpl {
  SimplicialFamily fam;
  explicit DiagonalImpl(SimplicialFamily f) : fam(std::move(f)) {}
  int base_dim() const override { return fam.n; }
  std::string name() const override { return "diag"; }
  std::vector<Elem> eval(const ThetaObject& th, int p) const override { return fam.member(p).eval(th, p); }
  Elem act_theta(const ThetaMorphism& psi, int p, const Elem& e) const override {
    return fam.member(p).act(psi, p, e);
  }
  Elem act_simplicial(const OrdinalMap& alpha, const ThetaObject& th, const Elem& e) const override {
    // internal degree first, then the family reindexing; the two commute
    Elem inner = fam.member(alpha.target).act(alpha, th, e);
    return fam.reindex(alpha, th, alpha.source, inner);
  }
};
}  // namespace detail

inline LazyPresheaf simplicial_diagonal(SimplicialFamily fam, bool audit = true) {
  if (audit) {
    // spot-check coherence of the two actions on a tiny square
    auto x0 = fam.member(1);
    auto th = fam.n == 0 ? theta_leaf() : theta_zero(fam.n);
    OrdinalMap d0(0, 1, {1});
    for (auto& e : x0.eval(th, 1)) {
      Elem a = fam.reindex(d0, th, 0, x0.act(d0, th, e));
      Elem b = fam.member(0).act(d0, th, fam.reindex(d0, th, 1, e));
      if (!(a == b)) throw std::invalid_argument("simplicial_diagonal: incoherent family actions");
    }
  }
  return LazyPresheaf(std::make_shared<detail::DiagonalImpl>(std::move(fam)));
}

// ---------------------------------------------------------------------------
// Truncated natural-transformation oracle
// ---------------------------------------------------------------------------

struct Truncation {
  std::vector<std::pair<ThetaObject, int>> slots;
};

inline Truncation make_truncation(const std::vector<ThetaObject>& shapes, int max_degree) {
  Truncation t;
  for (auto& th : shapes)
    for (int p = 0; p <= max_degree; ++p) t.slots.push_back({th, p});
  std::sort(t.slots.begin(), t.slots.end());
  t.slots.erase(std::unique(t.slots.begin(), t.slots.end()), t.slots.end());
  return t;
}

// One natural family on a truncation: per slot, an index map X-level -> W-level.
using NatFamily = std::vector<std::vector<int>>;

// All families natural for every Theta morphism between same-degree slots and
// every ordinal map between same-shape slots.
inline std::vector<NatFamily> truncated_hom(const LazyPresheaf& x, const LazyPresheaf& w, const Truncation& t) {
  int s = (int)t.slots.size();
  std::vector<std::vector<Elem>> xe(s), we(s);
  for (int i = 0; i < s; ++i) {
    xe[i] = x.eval(t.slots[i].first, t.slots[i].second);
    we[i] = w.eval(t.slots[i].first, t.slots[i].second);
  }
  // operators: maps level(tgt_slot) -> level(src_slot) on both presheaves
  struct Op {
    int src_slot, tgt_slot;
    std::vector<int> tx, tw;
  };
  std::vector<Op> ops;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      auto& [tha, pa] = t.slots[a];
      auto& [thb, pb] = t.slots[b];
      if (pa == pb)
        for (auto& psi : hom_theta(tha, thb)) {
          Op op{a, b, {}, {}};
          for (auto& e : xe[b]) op.tx.push_back(x.index_of(tha, pa, x.act(psi, pa, e)));
          for (auto& e : we[b]) op.tw.push_back(w.index_of(tha, pa, w.act(psi, pa, e)));
          ops.push_back(std::move(op));
        }
      if (tha == thb)
        for (auto& alpha : enumerate_ordinal_maps(pa, pb)) {
          Op op{a, b, {}, {}};
          for (auto& e : xe[b]) op.tx.push_back(x.index_of(tha, pa, x.act(alpha, tha, e)));
          for (auto& e : we[b]) op.tw.push_back(w.index_of(tha, pa, w.act(alpha, tha, e)));
          ops.push_back(std::move(op));
        }
    }
  // variables: (slot, x element); backtrack with forced propagation
  NatFamily eta(s);
  for (int i = 0; i < s; ++i) eta[i].assign(xe[i].size(), -1);
  std::vector<std::pair<int, int>> vars;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < (int)xe[i].size(); ++j) vars.push_back({i, j});
  std::vector<NatFamily> out;
  // propagate returns the list of newly set vars, or nullopt on conflict
  auto propagate = [&](std::vector<std::pair<int, int>>& trail) -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& op : ops)
        for (int j = 0; j < (int)op.tx.size(); ++j) {
          if (eta[op.tgt_slot][j] < 0) continue;
          int forced = op.tw[eta[op.tgt_slot][j]];
          int& cur = eta[op.src_slot][op.tx[j]];
          if (cur < 0) {
            cur = forced;
            trail.push_back({op.src_slot, op.tx[j]});
            changed = true;
          } else if (cur != forced) {
            return false;
          }
        }
    }
    return true;
  };
  auto rec = [&](auto&& self, size_t v) -> void {
    while (v < vars.size() && eta[vars[v].first][vars[v].second] >= 0) ++v;
    if (v == vars.size()) {
      out.push_back(eta);
      return;
    }
    auto [si, xi] = vars[v];
    for (int wi = 0; wi < (int)we[si].size(); ++wi) {
      eta[si][xi] = wi;
      std::vector<std::pair<int, int>> trail;
      if (propagate(trail)) self(self, v + 1);
      for (auto& [a, b] : trail) eta[a][b] = -1;
      eta[si][xi] = -1;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace theta

#endif
