#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace pascomb {

/// A solution (super arm) is a set of item indices, stored as a bitmask.
/// Item i (0-based) is in the solution iff bit i is set. Desk-scale ground
/// sets only: L <= 63.
using Mask = std::uint64_t;

inline constexpr int kMaxItems = 63;

inline int cardinality(Mask s) { return std::popcount(s); }

inline bool contains(Mask s, int item) { return (s >> item) & 1u; }

/// Items of `s` in ascending index order.
std::vector<int> items_of(Mask s);

/// Canonical order: by cardinality, then lexicographic on the ascending
/// item-index sequences. This order is the tie-break used everywhere.
bool canonical_less(Mask a, Mask b);

/// Render as "{1,3,4}" with 1-based item indices (reporting convention).
std::string format_solution(Mask s);

/// Render as "1|3|4" (1-based), the trace CSV cell encoding.
std::string format_solution_cell(Mask s);

/// Parse the "1|3|4" cell encoding back to a mask.
Mask parse_solution_cell(const std::string& cell);

}  // namespace pascomb
