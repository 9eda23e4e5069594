#pragma once

#include <string>
#include <vector>

#include "pp/cards.hpp"
#include "pp/strategy.hpp"

namespace pp {

struct BattleRecord {
    Rank alice_card;
    Rank bob_card;
    Player battle_winner;
};

struct Transcript {
    std::vector<BattleRecord> battles;
    Player final_winner;
};

// Referee: queries both strategies simultaneously against the same position,
// applies the battle, repeats until one side is out of cards. The game always
// ends within live_count(pos) rounds; max_rounds < 0 means exactly that bound.
Transcript play_out(const Position& pos, Strategy& alice, Strategy& bob, int max_rounds = -1);

std::string to_text(const Transcript& t);

} // namespace pp
