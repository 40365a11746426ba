#ifndef THETA_REPORT_HPP
#define THETA_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "theta/elem.hpp"

namespace theta {

// Structured verdict with witnesses.  A false verdict always carries a
// counterexample; a true verdict obtained on a window that does not provably
// stabilize carries caveats.
struct CheckReport {
  bool verdict = false;
  std::vector<Elem> witnesses;
  std::optional<std::pair<std::string, Elem>> counterexample;
  std::vector<std::string> caveats;

  static CheckReport pass() {
    CheckReport r;
    r.verdict = true;
    return r;
  }
  static CheckReport fail(std::string level, Elem cx) {
    CheckReport r;
    r.verdict = false;
    r.counterexample = {std::move(level), std::move(cx)};
    return r;
  }
  CheckReport& with_witness(Elem w) {
    witnesses.push_back(std::move(w));
    return *this;
  }
  CheckReport& with_caveat(std::string c) {
    caveats.push_back(std::move(c));
    return *this;
  }
};

}  // namespace theta

#endif
