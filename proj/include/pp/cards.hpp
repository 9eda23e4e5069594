#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pp/errors.hpp"

namespace pp {

enum class Player { alice, bob };

constexpr Player opponent(Player p) { return p == Player::alice ? Player::bob : Player::alice; }

inline const char* player_name(Player p) { return p == Player::alice ? "alice" : "bob"; }

// Card labels are arbitrary distinct positive integers; only their relative
// order matters. A Hand is kept sorted ascending with no duplicates.
using Rank = int;
using Hand = std::vector<Rank>;

struct Position {
    Hand alice;
    Hand bob;
};

// Validates (positive ranks, no duplicates, disjoint hands, live-card cap)
// and returns the position with both hands sorted.
Position make_position(Hand alice, Hand bob);

const Hand& hand_of(const Position& pos, Player p);
bool holds(const Hand& hand, Rank card);
int live_count(const Position& pos);

// Alice if Bob ran out, Bob if Alice ran out, nullopt while both still hold
// cards. Both hands empty is unreachable from legal play and reports a
// corrupted state.
std::optional<Player> terminal_winner(const Position& pos);

// One battle: both cards are revealed, the higher card is discarded, the
// lower card moves to the battle winner's hand.
Position successor(const Position& pos, Rank alice_card, Rank bob_card);

// "At least as good as": every k-th highest card of `c` exists and is >= the
// k-th highest card of `c_prime`, whenever c_prime has a k-th card.
bool dominates(const Hand& c, const Hand& c_prime);

// Order-preserving compression of the live ranks to 1..m. Ownership of
// compressed rank i (1-based) is Alice iff bit i-1 of alice_mask is set.
struct CanonicalPosition {
    int live_count = 0;
    std::uint32_t alice_mask = 0;
    std::vector<Rank> rank_map; // compressed rank i -> original rank rank_map[i-1]

    Player owner(int compressed_rank) const {
        return (alice_mask >> (compressed_rank - 1)) & 1u ? Player::alice : Player::bob;
    }
};

CanonicalPosition canonicalize(const Position& pos);

// Position with ranks 1..m matching the given ownership mask.
Position decode_mask(int m, std::uint32_t alice_mask);

// Canonical successor on ownership masks: cards are 0-based compressed rank
// indices, the result is the mask at level m-1.
std::uint32_t successor_mask(std::uint32_t alice_mask, int alice_card, int bob_card);

// Text format "1,2,4/3,5"; an empty side is written "-".
std::string to_text(const Position& pos);
std::string to_text(const Hand& hand);

// Accepts the text format or the JSON form {"alice":[...],"bob":[...]}.
Position parse_position(const std::string& text);

std::string position_json(const Position& pos);

} // namespace pp
