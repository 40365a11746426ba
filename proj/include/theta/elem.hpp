#ifndef THETA_ELEM_HPP
#define THETA_ELEM_HPP

#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace theta {

// Canonical term for presheaf elements, report witnesses etc.  Equality is
// structural and the ordering is lexicographic, which fixes the canonical
// enumeration order used everywhere.
struct Elem {
  std::string tag;
  std::vector<int> ints;
  std::vector<Elem> kids;

  Elem() = default;
  explicit Elem(std::string t) : tag(std::move(t)) {}
  Elem(std::string t, std::vector<int> is) : tag(std::move(t)), ints(std::move(is)) {}
  Elem(std::string t, std::vector<int> is, std::vector<Elem> ks)
      : tag(std::move(t)), ints(std::move(is)), kids(std::move(ks)) {}

  friend bool operator==(const Elem& a, const Elem& b) {
    return a.tag == b.tag && a.ints == b.ints && a.kids == b.kids;
  }
  friend std::strong_ordering operator<=>(const Elem& a, const Elem& b) {
    if (auto c = a.tag <=> b.tag; c != 0) return c;
    if (auto c = a.ints <=> b.ints; c != 0) return c;
    return a.kids <=> b.kids;
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  void print(std::ostream& os) const {
    os << tag;
    if (!ints.empty()) {
      os << '[';
      for (size_t i = 0; i < ints.size(); ++i) os << (i ? "," : "") << ints[i];
      os << ']';
    }
    if (!kids.empty()) {
      os << '(';
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i) os << ',';
        kids[i].print(os);
      }
      os << ')';
    }
  }
};

inline std::ostream& operator<<(std::ostream& os, const Elem& e) {
  e.print(os);
  return os;
}

}  // namespace theta

#endif
