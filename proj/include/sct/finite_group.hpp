#pragma once

#include <string>
#include <vector>

namespace sct {

// Finite group by multiplication table; element 0 need not be the identity.
struct FiniteGroup {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> mul;  // mul[x][y] = x*y
  int identity = 0;
  std::vector<int> inv;

  int order() const { return static_cast<int>(mul.size()); }
  int operator()(int x, int y) const { return mul[x][y]; }

  static FiniteGroup cyclic(int n);
  // Fills identity and inverses; throws std::invalid_argument unless the table
  // is a group (full associativity check).
  static FiniteGroup from_table(std::vector<std::string> names, std::vector<std::vector<int>> table);
};

}  // namespace sct
