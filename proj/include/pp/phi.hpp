#pragma once

#include <cstdint>

namespace pp {

// Exact comparisons of integer ratios against the golden ratio phi = (1+sqrt(5))/2.
//
// phi satisfies 1 + phi = phi^2, so for nonnegative integers a, b:
//   a < phi*b  <=>  a^2 < a*b + b^2
//   a > phi*b  <=>  a^2 > a*b + b^2
// Equality a^2 = a*b + b^2 forces a = b = 0 (phi is irrational), so the two
// predicates are an exact trichotomy away from the origin. Consecutive
// Fibonacci pairs sit one on each side of the boundary, which is why floating
// point is never used here.

constexpr bool phi_times_less(std::uint64_t a, std::uint64_t b) {
    using u128 = unsigned __int128;
    return (u128)a * a < (u128)a * b + (u128)b * b;
}

constexpr bool phi_times_greater(std::uint64_t a, std::uint64_t b) {
    using u128 = unsigned __int128;
    return (u128)a * a > (u128)a * b + (u128)b * b;
}

// Least x with attackers < phi * x, i.e. the smallest defender count that
// outnumbers `attackers` by more than a 1/phi fraction. 0 attackers need 0.
constexpr std::uint64_t min_defenders_against(std::uint64_t attackers) {
    if (attackers == 0) return 0;
    // start from a float guess, then fix up with the exact predicate
    std::uint64_t x = (std::uint64_t)((double)attackers * 0.6180339887498949);
    while (!phi_times_less(attackers, x)) ++x;
    while (x > 0 && phi_times_less(attackers, x - 1)) --x;
    return x;
}

} // namespace pp
