#ifndef THETA_NCAT_EXPR_HPP
#define THETA_NCAT_EXPR_HPP

#include <string>
#include <vector>

#include "theta/strict_ncat.hpp"

namespace theta {

// Constructor expressions:
//   ord(m)  susp(e)  glue(e1;e2;...)  prod(e1,e2)  isochain(p)@n  term@n
// glue expects suspension arguments and identifies consecutive endpoints.
struct NCatExpr {
  enum Kind { Ord, Susp, Glue, Prod, IsoChain, Term } kind = Term;
  int a = 0;  // m for Ord, p for IsoChain, n for IsoChain/Term
  int n = 1;
  std::vector<NCatExpr> kids;
};

inline int ncat_expr_dim(const NCatExpr& e) {
  switch (e.kind) {
    case NCatExpr::Ord: return 1;
    case NCatExpr::Susp: return ncat_expr_dim(e.kids[0]) + 1;
    case NCatExpr::Glue: return ncat_expr_dim(e.kids[0]);
    case NCatExpr::Prod: return ncat_expr_dim(e.kids[0]);
    case NCatExpr::IsoChain:
    case NCatExpr::Term: return e.n;
  }
  return 0;
}

inline StrictNCat build_ncat(const NCatExpr& e) {
  switch (e.kind) {
    case NCatExpr::Ord:
      return ordinal_ncat(e.a);
    case NCatExpr::Susp:
      return suspension_ncat(build_ncat(e.kids[0]));
    case NCatExpr::Glue: {
      std::vector<StrictNCat> guts;
      for (auto& k : e.kids) {
        if (k.kind != NCatExpr::Susp) throw std::invalid_argument("glue: arguments must be suspensions");
        guts.push_back(build_ncat(k.kids[0]));
      }
      for (auto& g : guts)
        if (g.dim != guts[0].dim) throw std::invalid_argument("glue: mixed dimensions");
      return chain_ncat(guts).cat;
    }
    case NCatExpr::Prod: {
      auto l = build_ncat(e.kids[0]);
      auto r = build_ncat(e.kids[1]);
      if (l.dim != r.dim) throw std::invalid_argument("prod: dimension mismatch");
      return product_ncat(l, r);
    }
    case NCatExpr::IsoChain:
      return iso_chain_flat(e.a, e.n);
    case NCatExpr::Term:
      return terminal_ncat(e.n);
  }
  throw std::logic_error("build_ncat: bad kind");
}

namespace detail {
inline NCatExpr parse_ncat_at(const std::string& s, size_t& pos);

inline int parse_int_at(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  size_t start = pos;
  while (pos < s.size() && isdigit((unsigned char)s[pos])) ++pos;
  if (pos == start) throw std::invalid_argument("ncat parse: expected number at " + std::to_string(start));
  return std::stoi(s.substr(start, pos - start));
}

inline void expect_ch(const std::string& s, size_t& pos, char c) {
  skip_ws(s, pos);
  if (pos >= s.size() || s[pos] != c)
    throw std::invalid_argument(std::string("ncat parse: expected '") + c + "' at " + std::to_string(pos));
  ++pos;
}

inline NCatExpr parse_ncat_at(const std::string& s, size_t& pos) {
  skip_ws(s, pos);
  size_t start = pos;
  while (pos < s.size() && isalpha((unsigned char)s[pos])) ++pos;
  std::string word = s.substr(start, pos - start);
  NCatExpr e;
  if (word == "ord") {
    e.kind = NCatExpr::Ord;
    expect_ch(s, pos, '(');
    e.a = parse_int_at(s, pos);
    expect_ch(s, pos, ')');
  } else if (word == "susp") {
    e.kind = NCatExpr::Susp;
    expect_ch(s, pos, '(');
    e.kids.push_back(parse_ncat_at(s, pos));
    expect_ch(s, pos, ')');
  } else if (word == "glue") {
    e.kind = NCatExpr::Glue;
    expect_ch(s, pos, '(');
    e.kids.push_back(parse_ncat_at(s, pos));
    skip_ws(s, pos);
    while (pos < s.size() && s[pos] == ';') {
      ++pos;
      e.kids.push_back(parse_ncat_at(s, pos));
      skip_ws(s, pos);
    }
    expect_ch(s, pos, ')');
  } else if (word == "prod") {
    e.kind = NCatExpr::Prod;
    expect_ch(s, pos, '(');
    e.kids.push_back(parse_ncat_at(s, pos));
    expect_ch(s, pos, ',');
    e.kids.push_back(parse_ncat_at(s, pos));
    expect_ch(s, pos, ')');
  } else if (word == "isochain") {
    e.kind = NCatExpr::IsoChain;
    expect_ch(s, pos, '(');
    e.a = parse_int_at(s, pos);
    expect_ch(s, pos, ')');
    expect_ch(s, pos, '@');
    e.n = parse_int_at(s, pos);
  } else if (word == "term") {
    e.kind = NCatExpr::Term;
    expect_ch(s, pos, '@');
    e.n = parse_int_at(s, pos);
  } else {
    throw std::invalid_argument("ncat parse: unknown constructor '" + word + "' at " + std::to_string(start));
  }
  return e;
}
}  // namespace detail

inline NCatExpr parse_ncat_expr(const std::string& s) {
  size_t pos = 0;
  auto e = detail::parse_ncat_at(s, pos);
  detail::skip_ws(s, pos);
  if (pos != s.size()) throw std::invalid_argument("ncat parse: trailing input");
  if (e.kind == NCatExpr::Glue) {
    for (auto& k : e.kids)
      if (k.kind != NCatExpr::Susp) throw std::invalid_argument("glue: arguments must be suspensions");
  }
  return e;
}

}  // namespace theta

#endif
