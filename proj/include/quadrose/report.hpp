#pragma once

#include <string>
#include <vector>

namespace quadrose {

struct Violation {
  std::string code;
  std::string detail;
};

/// Accumulates validation failures. Empty means the check passed.
struct Report {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string detail) {
    violations.push_back({std::move(code), std::move(detail)});
  }
  void merge(const Report& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
  std::string str() const {
    std::string out;
    for (const auto& v : violations) {
      out += v.code;
      out += ": ";
      out += v.detail;
      out += '\n';
    }
    return out;
  }
};

}  // namespace quadrose
