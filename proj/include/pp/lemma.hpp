#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pp/cards.hpp"
#include "pp/strategy.hpp"

namespace pp {

// many_cards: the player holds more than phi times as many cards as the
// opponent. high_cards: every card beats every opponent card and the opponent
// holds fewer than phi times as many. Either verdict guarantees a win.
enum class LemmaVerdict { none, many_cards, high_cards };

struct LemmaClassification {
    LemmaVerdict alice = LemmaVerdict::none;
    LemmaVerdict bob = LemmaVerdict::none;

    LemmaVerdict of(Player p) const { return p == Player::alice ? alice : bob; }
};

LemmaClassification classify_lemma(const Position& pos);

// Counters for the phase-switch checks inside the phased strategy. The
// strategy throws logic_error if a switch ever violates its inequality, so a
// green run plus nonzero counters means every switch was checked.
struct SwitchStats {
    std::atomic<long> many_to_high{0};
    std::atomic<long> high_to_many{0};
};

// The constructive winning strategy behind both lemma verdicts. Both phases
// play each card of a hand snapshot at most once, in ascending order; cards
// captured or recaptured mid-phase wait for the next snapshot.
//   many-cards phase: rotate through snapshots until every opponent card is
//   lower than every held card;
//   high-cards phase: one snapshot rotation (each card wins its battle), then
//   fall back to the many-cards phase.
// Errors with lemma_not_applicable when classify_lemma(pos) is none for the
// player. Stats, when given, are shared by clones.
std::unique_ptr<Strategy> lemma_strategy(const Position& pos, Player player,
                                         std::shared_ptr<SwitchStats> stats = nullptr);

// All positions one elementary pro-Alice modification away: insert an Alice
// card in any rank gap, delete a Bob card, transfer a Bob card to Alice, or
// swap an adjacent pair where Alice holds the lower card. Outputs are
// canonicalized and deduplicated.
std::vector<Position> improvement_steps(const Position& pos);

// The counting certificate from the interval construction: the defender
// commits cards from interval i+1 against the attacker's interval i and must
// overwhelm the attacker's top interval with what is left over. allocations
// holds x_2..x_k (the committed counts), leftover the uncommitted total.
// feasible proves the attacker has no winning strategy on that deal.
struct IntervalPlan {
    int k = 0;
    std::vector<long long> a_counts;
    std::vector<long long> b_counts;
    std::vector<long long> allocations; // x_2..x_k, size k-1
    long long leftover = 0;
    bool feasible = false;
};

IntervalPlan interval_certificate(std::span<const long long> a_counts,
                                  std::span<const long long> b_counts);

std::string to_json(const IntervalPlan& plan);

} // namespace pp
