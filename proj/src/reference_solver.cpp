#include "pp/reference_solver.hpp"

#include <bit>

#include "pp/errors.hpp"

namespace pp {

Outcome ReferenceSolver::outcome_mask(int m, std::uint32_t mask) {
    std::uint8_t bits = solve(m, mask);
    if (bits & 1u) return Outcome::alice_win;
    if (bits & 2u) return Outcome::bob_win;
    return Outcome::draw;
}

std::uint8_t ReferenceSolver::solve(int m, std::uint32_t mask) {
    if (m < 1) fail(ErrorCode::both_empty, "no live cards");
    const std::uint32_t full = m >= 32 ? ~0u : (1u << m) - 1;
    if (mask == full) return 1u;
    if (mask == 0) return 2u;

    std::uint64_t key = ((std::uint64_t)m << 32) | mask;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::uint8_t bits = 0;
    for (int side = 0; side < 2; ++side) {
        bool mover_is_alice = side == 0;
        std::uint32_t mover = mover_is_alice ? mask : full ^ mask;
        std::uint32_t other = full ^ mover;
        std::uint8_t want = mover_is_alice ? 1u : 2u;
        for (std::uint32_t mb = mover; mb; mb &= mb - 1) {
            int mover_card = std::countr_zero(mb);
            bool all = true;
            for (std::uint32_t ob = other; ob; ob &= ob - 1) {
                int other_card = std::countr_zero(ob);
                int a = mover_is_alice ? mover_card : other_card;
                int b = mover_is_alice ? other_card : mover_card;
                if (!(solve(m - 1, successor_mask(mask, a, b)) & want)) {
                    all = false;
                    break;
                }
            }
            if (all) {
                bits |= want;
                break;
            }
        }
    }
    memo_.emplace(key, bits);
    return bits;
}

} // namespace pp
