#pragma once

#include <cstdint>
#include <unordered_map>

#include "pp/solver.hpp"

namespace pp {

// Serial top-down memoized recursion over the same ownership-mask state
// space. Kept as an independent reference for the bottom-up table: tests
// compare the two on every mask, and the bench target times them against
// each other.
class ReferenceSolver {
public:
    bool alice_wins(int m, std::uint32_t mask) { return solve(m, mask) & 1u; }
    bool bob_wins(int m, std::uint32_t mask) { return (solve(m, mask) >> 1) & 1u; }
    Outcome outcome_mask(int m, std::uint32_t mask);
    std::size_t states_visited() const { return memo_.size(); }

private:
    std::uint8_t solve(int m, std::uint32_t mask);
    std::unordered_map<std::uint64_t, std::uint8_t> memo_;
};

} // namespace pp
