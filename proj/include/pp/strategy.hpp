#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "pp/cards.hpp"

namespace pp {

// A deterministic card-picking policy for one side. pick() sees only the
// current position, never the opponent's pending choice; the referee queries
// both strategies against the same position before applying the battle.
//
// Policies may carry internal state (the phased lemma strategy tracks its
// snapshot, the random policy its generator). state_key() must encode that
// mutable state exactly: two instances with equal state_key() and equal
// construction parameters behave identically on every future position. The
// best-response search relies on this for memoization.
class Strategy {
public:
    virtual ~Strategy() = default;

    // Card to play for `self` at `pos`; must return a held card.
    virtual Rank pick(const Position& pos, Player self) = 0;

    virtual std::unique_ptr<Strategy> clone() const = 0;
    virtual std::string name() const = 0;
    virtual std::uint64_t state_key() const { return 0; }
};

std::unique_ptr<Strategy> lowest_card_strategy();
std::unique_ptr<Strategy> highest_card_strategy();
std::unique_ptr<Strategy> random_card_strategy(std::uint64_t seed);

// Wraps a positional (stateless) rule; handy in tests.
std::unique_ptr<Strategy> function_strategy(std::string name, Rank (*fn)(const Position&, Player));

} // namespace pp
