#ifndef THETA_THETA_CELL_HPP
#define THETA_THETA_CELL_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "theta/delta.hpp"
#include "theta/elem.hpp"

namespace theta {

// ---------------------------------------------------------------------------
// Objects of Theta_n
// ---------------------------------------------------------------------------

// A cell [m](c_1,...,c_m), as a uniform-depth tree.  dim == 0 is the unique
// object of Theta_0; otherwise every child has depth dim - 1.
struct ThetaObject {
  int dim = 0;
  std::vector<ThetaObject> children;

  ThetaObject() = default;
  ThetaObject(int d, std::vector<ThetaObject> cs) : dim(d), children(std::move(cs)) {
    if (dim == 0 && !children.empty()) throw std::invalid_argument("ThetaObject: leaf with children");
    for (auto& c : children)
      if (c.dim != dim - 1) throw std::invalid_argument("ThetaObject: non-uniform depth");
  }

  int arity() const { return (int)children.size(); }

  friend bool operator==(const ThetaObject& a, const ThetaObject& b) {
    return a.dim == b.dim && a.children == b.children;
  }
  friend std::strong_ordering operator<=>(const ThetaObject& a, const ThetaObject& b) {
    if (auto c = a.dim <=> b.dim; c != 0) return c;
    return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(),
                                                 b.children.end());
  }

  std::string str() const {
    if (dim == 0) return "*";
    std::ostringstream os;
    os << '[' << arity() << ']';
    if (dim > 1) {
      os << '(';
      for (int i = 0; i < arity(); ++i) os << (i ? "," : "") << children[i].str();
      os << ')';
    }
    return os.str();
  }
};

inline ThetaObject theta_leaf() { return {}; }

// The terminal object [0] of Theta_n (the point, at depth n).
inline ThetaObject theta_zero(int n) {
  ThetaObject t;
  t.dim = n;
  return t;
}

inline int dimension(const ThetaObject& x) { return x.dim; }

inline ThetaObject suspend_object(const ThetaObject& c) { return {c.dim + 1, {c}}; }

// Dimension padding/truncation pair (tau_k^n, pi_k^n).
struct TruncationPair {
  int n = 0;
  int k = 0;
  TruncationPair(int n_, int k_) : n(n_), k(k_) {
    if (k < 0 || k > n) throw std::invalid_argument("TruncationPair: need 0 <= k <= n");
  }
};

inline ThetaObject apply_tau(const TruncationPair& tp, const ThetaObject& x) {
  if (x.dim != tp.k) throw std::invalid_argument("apply_tau: depth mismatch");
  if (tp.k == tp.n) return x;
  if (x.dim == 0) return theta_zero(tp.n);
  std::vector<ThetaObject> kids;
  for (auto& c : x.children) kids.push_back(apply_tau({tp.n - 1, tp.k - 1}, c));
  return {tp.n, std::move(kids)};
}

inline ThetaObject apply_pi(const TruncationPair& tp, const ThetaObject& y) {
  if (y.dim != tp.n) throw std::invalid_argument("apply_pi: depth mismatch");
  if (tp.k == 0) return theta_leaf();
  std::vector<ThetaObject> kids;
  for (auto& c : y.children) kids.push_back(apply_pi({tp.n - 1, tp.k - 1}, c));
  return {tp.k, std::move(kids)};
}

// ---------------------------------------------------------------------------
// Morphisms of Theta_n
// ---------------------------------------------------------------------------

// (phi, f_ij): a simplex map plus blockwise morphisms f_ij : c_i -> d_j for
// phi(i-1) < j <= phi(i).  Blocks between depth-0 children are trivial and
// not stored.
struct ThetaMorphism {
  ThetaObject source;
  ThetaObject target;
  OrdinalMap delta;
  std::map<std::pair<int, int>, ThetaMorphism> blocks;

  friend bool operator==(const ThetaMorphism& a, const ThetaMorphism& b) {
    return a.delta == b.delta && a.blocks == b.blocks && a.source == b.source && a.target == b.target;
  }
  friend std::strong_ordering operator<=>(const ThetaMorphism& a, const ThetaMorphism& b) {
    if (auto c = a.source <=> b.source; c != 0) return c;
    if (auto c = a.target <=> b.target; c != 0) return c;
    if (auto c = a.delta <=> b.delta; c != 0) return c;
    return std::lexicographical_compare_three_way(a.blocks.begin(), a.blocks.end(), b.blocks.begin(), b.blocks.end(),
                                                 [](const auto& x, const auto& y) -> std::strong_ordering {
                                                   if (auto c = x.first <=> y.first; c != 0) return c;
                                                   return x.second <=> y.second;
                                                 });
  }

  Elem to_elem() const {
    if (source.dim == 0) return Elem("tm0");
    Elem e("tm", delta.values);
    for (auto& [ij, f] : blocks) {
      Elem k = f.to_elem();
      k.ints.insert(k.ints.begin(), {ij.first, ij.second});
      e.kids.push_back(std::move(k));
    }
    return e;
  }

  void check_well_formed() const {
    if (source.dim != target.dim) throw std::invalid_argument("ThetaMorphism: depth mismatch");
    if (source.dim == 0) return;
    if (delta.source != source.arity() || delta.target != target.arity())
      throw std::invalid_argument("ThetaMorphism: delta endpoints");
    for (int i = 1; i <= source.arity(); ++i)
      for (int j = delta(i - 1) + 1; j <= delta(i); ++j) {
        if (source.dim == 1) continue;
        auto it = blocks.find({i, j});
        if (it == blocks.end()) throw std::invalid_argument("ThetaMorphism: missing block");
        if (it->second.source != source.children[i - 1] || it->second.target != target.children[j - 1])
          throw std::invalid_argument("ThetaMorphism: block endpoints");
        it->second.check_well_formed();
      }
  }
};

inline ThetaMorphism identity_morphism(const ThetaObject& x) {
  ThetaMorphism m;
  m.source = m.target = x;
  if (x.dim == 0) return m;
  m.delta = OrdinalMap::identity(x.arity());
  if (x.dim > 1)
    for (int i = 1; i <= x.arity(); ++i) m.blocks[{i, i}] = identity_morphism(x.children[i - 1]);
  return m;
}

inline ThetaMorphism compose(const ThetaMorphism& g, const ThetaMorphism& f) {
  if (!(f.target == g.source)) throw std::invalid_argument("ThetaMorphism compose: endpoint mismatch");
  ThetaMorphism h;
  h.source = f.source;
  h.target = g.target;
  if (f.source.dim == 0) return h;
  h.delta = compose(g.delta, f.delta);
  if (f.source.dim == 1) return h;
  for (int i = 1; i <= f.source.arity(); ++i)
    for (int k = h.delta(i - 1) + 1; k <= h.delta(i); ++k) {
      // the unique intermediate index j with phi(i-1) < j <= phi(i) and
      // psi(j-1) < k <= psi(j)
      int j = -1;
      for (int jj = f.delta(i - 1) + 1; jj <= f.delta(i); ++jj)
        if (g.delta(jj - 1) < k && k <= g.delta(jj)) {
          j = jj;
          break;
        }
      if (j < 0) throw std::logic_error("ThetaMorphism compose: block routing failed");
      h.blocks[{i, k}] = compose(g.blocks.at({j, k}), f.blocks.at({i, j}));
    }
  return h;
}

// Complete enumeration of Hom(a, b), canonically ordered.
inline std::vector<ThetaMorphism> hom_theta(const ThetaObject& a, const ThetaObject& b) {
  if (a.dim != b.dim) throw std::invalid_argument("hom_theta: depth mismatch");
  std::vector<ThetaMorphism> out;
  if (a.dim == 0) {
    ThetaMorphism m;
    m.source = a;
    m.target = b;
    out.push_back(std::move(m));
    return out;
  }
  for (auto& delta : enumerate_ordinal_maps(a.arity(), b.arity())) {
    // independent block choices per (i, j)
    std::vector<std::pair<int, int>> slots;
    std::vector<std::vector<ThetaMorphism>> choices;
    bool feasible = true;
    for (int i = 1; i <= a.arity() && feasible; ++i)
      for (int j = delta(i - 1) + 1; j <= delta(i); ++j) {
        if (a.dim == 1) continue;
        auto hs = hom_theta(a.children[i - 1], b.children[j - 1]);
        if (hs.empty()) feasible = false;
        slots.push_back({i, j});
        choices.push_back(std::move(hs));
      }
    if (!feasible) continue;
    ThetaMorphism m;
    m.source = a;
    m.target = b;
    m.delta = delta;
    auto rec = [&](auto&& self, size_t s) -> void {
      if (s == slots.size()) {
        out.push_back(m);
        return;
      }
      for (auto& f : choices[s]) {
        m.blocks[slots[s]] = f;
        self(self, s + 1);
      }
      m.blocks.erase(slots[s]);
    };
    rec(rec, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ThetaMorphism tau_morphism(const TruncationPair& tp, const ThetaMorphism& f) {
  ThetaMorphism m;
  m.source = apply_tau(tp, f.source);
  m.target = apply_tau(tp, f.target);
  if (tp.k == tp.n) return f;
  if (tp.k == 0) {
    // the unique morphism between terminal towers
    auto hs = hom_theta(m.source, m.target);
    return hs.front();
  }
  m.delta = f.delta;
  if (tp.n > 1)
    for (int i = 1; i <= f.source.arity(); ++i)
      for (int j = f.delta(i - 1) + 1; j <= f.delta(i); ++j) {
        ThetaMorphism block;
        if (tp.k == 1) {
          ThetaMorphism triv;
          triv.source = f.source.children[i - 1];
          triv.target = f.target.children[j - 1];
          block = tau_morphism({tp.n - 1, tp.k - 1}, triv);
        } else {
          block = tau_morphism({tp.n - 1, tp.k - 1}, f.blocks.at({i, j}));
        }
        m.blocks[{i, j}] = block;
      }
  return m;
}

inline ThetaMorphism pi_morphism(const TruncationPair& tp, const ThetaMorphism& f) {
  ThetaMorphism m;
  m.source = apply_pi(tp, f.source);
  m.target = apply_pi(tp, f.target);
  if (tp.k == tp.n) return f;
  if (tp.k == 0) return m;
  m.delta = f.delta;
  if (tp.k > 1)
    for (auto& [ij, b] : f.blocks) m.blocks[ij] = pi_morphism({tp.n - 1, tp.k - 1}, b);
  return m;
}

// ---------------------------------------------------------------------------
// Text syntax: [3]([2],[0],[1])
// ---------------------------------------------------------------------------

namespace detail {
inline ThetaObject parse_theta_at(const std::string& s, size_t& pos);

inline void skip_ws(const std::string& s, size_t& pos) {
  while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
}

inline ThetaObject parse_theta_at(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '*') {
    ++pos;
    return theta_leaf();
  }
  if (pos >= s.size() || s[pos] != '[') throw std::invalid_argument("theta parse: expected '[' at " + std::to_string(pos));
  ++pos;
  size_t start = pos;
  while (pos < s.size() && isdigit((unsigned char)s[pos])) ++pos;
  if (pos == start || pos >= s.size() || s[pos] != ']')
    throw std::invalid_argument("theta parse: bad arity at " + std::to_string(start));
  int m = std::stoi(s.substr(start, pos - start));
  ++pos;
  std::vector<ThetaObject> kids;
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '(') {
    ++pos;
    for (int i = 0; i < m; ++i) {
      kids.push_back(parse_theta_at(s, pos));
      skip_ws(s, pos);
      if (i + 1 < m) {
        if (pos >= s.size() || s[pos] != ',') throw std::invalid_argument("theta parse: expected ','");
        ++pos;
      }
    }
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("theta parse: expected ')'");
    ++pos;
  } else {
    for (int i = 0; i < m; ++i) kids.push_back(theta_leaf());
  }
  // uniformize child depth: children written as bare [k] inside a deeper
  // object are padded with terminal towers
  int depth = 0;
  for (auto& k : kids) depth = std::max(depth, k.dim);
  for (auto& k : kids) k = apply_tau({depth, k.dim}, k);
  return {depth + 1, std::move(kids)};
}
}  // namespace detail

inline ThetaObject parse_theta(const std::string& s) {
  size_t pos = 0;
  auto t = detail::parse_theta_at(s, pos);
  detail::skip_ws(s, pos);
  if (pos != s.size()) throw std::invalid_argument("theta parse: trailing input");
  return t;
}

// List every object of Theta_n with arity sum bounds: all m <= max_arity at
// every node.  Used for windows.
inline std::vector<ThetaObject> theta_objects_up_to(int n, int max_arity) {
  if (n == 0) return {theta_leaf()};
  auto lower = theta_objects_up_to(n - 1, max_arity);
  std::vector<ThetaObject> out;
  std::vector<ThetaObject> cur;
  auto rec = [&](auto&& self, int m) -> void {
    if ((int)cur.size() == m) {
      out.push_back(ThetaObject(n, cur));
      return;
    }
    for (auto& c : lower) {
      cur.push_back(c);
      self(self, m);
      cur.pop_back();
    }
  };
  for (int m = 0; m <= max_arity; ++m) rec(rec, m);
  return out;
}

}  // namespace theta

#endif
