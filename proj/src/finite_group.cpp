#include "sct/finite_group.hpp"

#include <stdexcept>

namespace sct {

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::string> names;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x) {
    names.push_back(std::to_string(x));
    for (int y = 0; y < n; ++y) t[x][y] = (x + y) % n;
  }
  return from_table(std::move(names), std::move(t));
}

FiniteGroup FiniteGroup::from_table(std::vector<std::string> names, std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("empty group table");
  if (!names.empty() && static_cast<int>(names.size()) != n) throw std::invalid_argument("element names mismatch");
  for (auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("group table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw std::invalid_argument("group table entry out of range");
  }
  FiniteGroup g;
  g.mul = std::move(table);
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = g.mul[e][x] == x && g.mul[x][e] == x;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw std::invalid_argument("group table has no identity");
  g.inv.assign(n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (g.mul[x][y] == g.identity && g.mul[y][x] == g.identity) g.inv[x] = y;
  for (int x = 0; x < n; ++x)
    if (g.inv[x] < 0) throw std::invalid_argument("group table: element without inverse");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (g.mul[g.mul[x][y]][z] != g.mul[x][g.mul[y][z]]) throw std::invalid_argument("group table is not associative");
  if (names.empty())
    for (int x = 0; x < n; ++x) names.push_back(std::to_string(x));
  g.elements = std::move(names);
  return g;
}

}  // namespace sct
