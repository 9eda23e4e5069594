#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pp/cards.hpp"
#include "pp/config.hpp"
#include "pp/strategy.hpp"
#include "pp/transcript.hpp"

namespace pp {

enum class Outcome { alice_win, bob_win, draw };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::alice_win: return "alice";
        case Outcome::bob_win: return "bob";
        default: return "draw";
    }
}

// Per-level bit tables of the two guaranteed-win predicates over ownership
// masks: WA(m, mask) = Alice can announce a pure strategy and win, WB the
// mirror image. A position with neither bit set is a draw.
class SolverTable {
public:
    int m_max() const { return m_max_; }
    bool alice_wins(int m, std::uint32_t mask) const { return test(wa_[m], mask); }
    bool bob_wins(int m, std::uint32_t mask) const { return test(wb_[m], mask); }
    std::size_t byte_size() const;

private:
    static bool test(const std::vector<std::uint64_t>& bits, std::uint32_t i) {
        return (bits[i >> 6] >> (i & 63)) & 1u;
    }

    int m_max_ = 0;
    // index by live count m = 1..m_max; level m holds 2^m masks
    std::vector<std::vector<std::uint64_t>> wa_, wb_;

    friend SolverTable build_table(int, int);
    friend void save_table(const SolverTable&, const std::string&);
    friend SolverTable load_table(const std::string&);
};

// Bottom-up level build. Level m is filled from level m-1 only; masks within
// a level are independent, so the fill is an OpenMP loop over 64-mask words.
// workers = 0 uses every available thread, 1 forces the serial path.
SolverTable build_table(int m_max, int workers = 0);

Outcome outcome_mask(const SolverTable& table, int m, std::uint32_t alice_mask);
Outcome outcome(const SolverTable& table, const Position& pos);

// Cards (original labels) the winner can play such that every opponent reply
// stays winning. Errors with not_winning when `player` has no winning strategy.
std::vector<Rank> winning_moves(const SolverTable& table, const Position& pos, Player player);

// Positional policy: lowest winning move at every winning position (lowest
// held card anywhere else, which correct play never reaches).
std::unique_ptr<Strategy> extract_strategy(std::shared_ptr<const SolverTable> table,
                                           const Position& pos, Player player);

// Table-backed policy usable from any position within capacity.
std::unique_ptr<Strategy> solver_strategy(std::shared_ptr<const SolverTable> table);

struct BestResponseReport {
    bool beaten = false;
    std::optional<Transcript> witness;
};

// The revealed player's card is pinned by `revealed` at every reachable
// position; the defender picks freely. beaten = true iff the defender can
// force the revealed player to run out, with one witness line.
BestResponseReport best_response(const Position& pos, const Strategy& revealed, Player defender);

// Binary cache: magic "PPTB", u32 version, u32 m_max, then per level WA then
// WB as little-endian u64 words.
void save_table(const SolverTable& table, const std::string& path);
SolverTable load_table(const std::string& path);

} // namespace pp
