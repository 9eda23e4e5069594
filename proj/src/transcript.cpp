#include "pp/transcript.hpp"

#include <sstream>

#include "pp/errors.hpp"

namespace pp {

Transcript play_out(const Position& pos, Strategy& alice, Strategy& bob, int max_rounds) {
    int total = live_count(pos);
    if (max_rounds < 0) max_rounds = total;

    Transcript t;
    Position current = pos;
    while (true) {
        if (auto winner = terminal_winner(current)) {
            t.final_winner = *winner;
            return t;
        }
        if ((int)t.battles.size() >= max_rounds)
            fail(ErrorCode::round_limit_exceeded,
                 "no terminal position within " + std::to_string(max_rounds) + " rounds");

        // both picks come from the same position: neither side sees the other's choice
        Rank a = alice.pick(current, Player::alice);
        Rank b = bob.pick(current, Player::bob);
        if (!holds(current.alice, a))
            fail(ErrorCode::strategy_error,
                 alice.name() + " returned unheld card " + std::to_string(a));
        if (!holds(current.bob, b))
            fail(ErrorCode::strategy_error,
                 bob.name() + " returned unheld card " + std::to_string(b));

        t.battles.push_back({a, b, a > b ? Player::alice : Player::bob});
        current = successor(current, a, b);
    }
}

std::string to_text(const Transcript& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.battles.size(); ++i) {
        const BattleRecord& rec = t.battles[i];
        out << "battle " << i + 1 << ": alice " << rec.alice_card << " vs bob " << rec.bob_card
            << " -> " << player_name(rec.battle_winner) << " takes "
            << std::min(rec.alice_card, rec.bob_card) << ", " << std::max(rec.alice_card, rec.bob_card)
            << " discarded\n";
    }
    out << "winner: " << player_name(t.final_winner) << " after " << t.battles.size()
        << " battles\n";
    return out.str();
}

} // namespace pp
