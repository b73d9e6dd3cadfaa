#include "pascomb/solution.hpp"

#include <stdexcept>

namespace pascomb {

std::vector<int> items_of(Mask s) {
  std::vector<int> items;
  items.reserve(static_cast<std::size_t>(std::popcount(s)));
  while (s != 0) {
    int i = std::countr_zero(s);
    items.push_back(i);
    s &= s - 1;
  }
  return items;
}

bool canonical_less(Mask a, Mask b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  // Same cardinality: lexicographic on the ascending item sequences.
  while (a != 0 && b != 0) {
    const int ia = std::countr_zero(a);
    const int ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

std::string format_solution(Mask s) {
  std::string out = "{";
  bool first = true;
  for (int i : items_of(s)) {
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  out += "}";
  return out;
}

std::string format_solution_cell(Mask s) {
  std::string out;
  bool first = true;
  for (int i : items_of(s)) {
    if (!first) out += "|";
    out += std::to_string(i + 1);
    first = false;
  }
  return out;
}

Mask parse_solution_cell(const std::string& cell) {
  Mask s = 0;
  std::size_t pos = 0;
  while (pos < cell.size()) {
    std::size_t next = cell.find('|', pos);
    if (next == std::string::npos) next = cell.size();
    const int item = std::stoi(cell.substr(pos, next - pos));
    if (item < 1 || item > kMaxItems + 1) {
      throw std::invalid_argument("bad item index in solution cell: " + cell);
    }
    s |= Mask{1} << (item - 1);
    pos = next + 1;
  }
  return s;
}

}  // namespace pascomb
