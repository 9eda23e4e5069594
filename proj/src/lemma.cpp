#include "pp/lemma.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pp/phi.hpp"

namespace pp {

namespace {

LemmaVerdict classify_one(const Hand& mine, const Hand& theirs) {
    std::uint64_t a = mine.size(), b = theirs.size();
    if (phi_times_greater(a, b)) return LemmaVerdict::many_cards;
    bool all_higher = theirs.empty() || (!mine.empty() && mine.front() > theirs.back());
    if (all_higher && phi_times_less(b, a)) return LemmaVerdict::high_cards;
    return LemmaVerdict::none;
}

} // namespace

LemmaClassification classify_lemma(const Position& pos) {
    LemmaClassification c;
    c.alice = classify_one(pos.alice, pos.bob);
    c.bob = classify_one(pos.bob, pos.alice);
    return c;
}

namespace {

bool all_higher(const Hand& mine, const Hand& theirs) {
    return theirs.empty() || (!mine.empty() && mine.front() > theirs.back());
}

// The lemma proof's strategy, run as a two-phase loop. Both phases rotate
// through a snapshot of the hand: each snapshot card is played at most once
// per phase, lowest first, and cards captured (or recaptured) mid-phase wait
// for the next snapshot.
//
// many-cards phase: rotate until every opponent card is lower than every held
// card, taking a fresh snapshot whenever the rotation runs dry. Each battle
// either burns an opponent card higher than the played one (we shrink by one)
// or captures the opponent's lower card (they shrink by one). Keeping
// recaptured cards out of the rotation matters: replaying a returned low card
// lets the opponent top it with another returned card and bleed us without
// spending high cards, which refutes the naive lowest-card rule even from the
// all-high worst case.
//
// high-cards phase: the snapshot beats everything the opponent holds, so the
// rotation wins a battle apiece while our size stays fixed; afterwards we
// hold as many cards as at entry and drop back to the many-cards phase.
//
// At each phase switch the inductive inequality from the proof is checked
// and counted; a violation throws, which the exhaustive tests would surface.
class PhasedLemmaStrategy final : public Strategy {
    enum class Phase { many_cards, high_cards };

public:
    PhasedLemmaStrategy(const Position& pos, Player player, std::shared_ptr<SwitchStats> stats)
        : player_(player), stats_(std::move(stats)) {
        if (classify_lemma(pos).of(player) == LemmaVerdict::none)
            fail(ErrorCode::lemma_not_applicable,
                 std::string("lemma gives ") + player_name(player) + " nothing at " + to_text(pos));
        anchor_ranks_ = hand_of(pos, player);
        const Hand& other = hand_of(pos, opponent(player));
        anchor_ranks_.insert(anchor_ranks_.end(), other.begin(), other.end());
        std::sort(anchor_ranks_.begin(), anchor_ranks_.end());
    }

    Rank pick(const Position& pos, Player self) override {
        if (self != player_)
            fail(ErrorCode::strategy_error, "lemma strategy built for the other player");
        const Hand& mine = hand_of(pos, self);
        const Hand& theirs = hand_of(pos, opponent(self));

        if (!entered_) {
            entered_ = true;
            enter_many(mine, theirs);
        }
        advance(mine, theirs);

        // unplayed snapshot cards can leave the hand only by being played,
        // so the rotation head is always in hand
        Rank card = pending_.front();
        pending_.erase(pending_.begin());
        return card;
    }

    std::unique_ptr<Strategy> clone() const override {
        return std::make_unique<PhasedLemmaStrategy>(*this);
    }

    std::string name() const override { return "phased-lemma"; }

    std::uint64_t state_key() const override {
        // exact: phase bits + unplayed-rotation membership over the anchor set
        std::uint64_t snap = 0;
        for (Rank r : pending_) {
            std::size_t i = std::lower_bound(anchor_ranks_.begin(), anchor_ranks_.end(), r) -
                            anchor_ranks_.begin();
            snap |= 1ull << i;
        }
        return (snap << 2) | ((std::uint64_t)entered_ << 1) |
               (std::uint64_t)(phase_ == Phase::high_cards);
    }

private:
    void enter_many(const Hand& mine, const Hand& theirs) {
        phase_ = Phase::many_cards;
        pending_.clear();
        many_entry_self_ = (long long)mine.size();
        many_premise_ = phi_times_greater(mine.size(), theirs.size());
    }

    void enter_high(const Hand& mine, const Hand& theirs) {
        phase_ = Phase::high_cards;
        pending_ = mine;
        high_entry_self_ = (long long)mine.size();
        high_entry_opp_ = (long long)theirs.size();
        high_premise_ = phi_times_less(theirs.size(), mine.size());
    }

    void advance(const Hand& mine, const Hand& theirs) {
        while (true) {
            if (phase_ == Phase::many_cards) {
                if (all_higher(mine, theirs)) {
                    // many -> high: with a = entry size and b' = what they
                    // kept, b' < phi*(a - b') per the proof's induction step
                    if (many_premise_) {
                        long long kept = (long long)theirs.size();
                        if (!(many_entry_self_ - kept > 0 &&
                              phi_times_less(kept, many_entry_self_ - kept)))
                            throw std::logic_error("many-cards exit inequality failed");
                        if (stats_) stats_->many_to_high.fetch_add(1, std::memory_order_relaxed);
                    }
                    enter_high(mine, theirs);
                    return;
                }
                if (pending_.empty()) pending_ = mine; // next many-cards rotation
                return;
            }
            if (!pending_.empty()) return;
            // high -> many: we played each of the a snapshot cards once and won
            // every battle, so we still hold a cards and they lost a
            if ((long long)mine.size() != high_entry_self_ ||
                (long long)theirs.size() != high_entry_opp_ - high_entry_self_)
                throw std::logic_error("high-cards exit count identity failed");
            if (high_premise_) {
                if (!phi_times_greater(high_entry_self_, high_entry_opp_ - high_entry_self_))
                    throw std::logic_error("high-cards exit inequality failed");
                if (stats_) stats_->high_to_many.fetch_add(1, std::memory_order_relaxed);
            }
            enter_many(mine, theirs);
        }
    }

    Player player_;
    std::shared_ptr<SwitchStats> stats_;
    std::vector<Rank> anchor_ranks_;
    bool entered_ = false;
    Phase phase_ = Phase::many_cards;
    Hand pending_; // snapshot cards not yet played this phase
    long long many_entry_self_ = 0;
    bool many_premise_ = false;
    long long high_entry_self_ = 0;
    long long high_entry_opp_ = 0;
    bool high_premise_ = false;
};

} // namespace

std::unique_ptr<Strategy> lemma_strategy(const Position& pos, Player player,
                                         std::shared_ptr<SwitchStats> stats) {
    return std::make_unique<PhasedLemmaStrategy>(pos, player, std::move(stats));
}

std::vector<Position> improvement_steps(const Position& pos) {
    CanonicalPosition canon = canonicalize(pos);
    const int m = canon.live_count;
    const std::uint32_t mask = canon.alice_mask;

    // collect as (live count, mask) pairs, dedup, then decode
    std::vector<std::pair<int, std::uint32_t>> raw;

    // extra cards don't hurt: new Alice card in any rank gap
    for (int slot = 0; slot <= m; ++slot) {
        std::uint32_t below = mask & ((1u << slot) - 1);
        std::uint32_t above = (mask >> slot) << (slot + 1);
        raw.emplace_back(m + 1, below | above | (1u << slot));
    }
    for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1u) continue; // Bob's card
        std::uint32_t below = mask & ((1u << i) - 1);
        std::uint32_t above = (mask >> (i + 1)) << i;
        // losing cards doesn't help: delete it (unless it was the last live card)
        if (m > 1) raw.emplace_back(m - 1, below | above);
        // receiving a card from the opponent doesn't hurt: hand it to Alice
        raw.emplace_back(m, mask | (1u << i));
    }
    // slightly improving one card doesn't hurt: swap an adjacent (Alice low,
    // Bob high) pair
    for (int i = 0; i + 1 < m; ++i)
        if (((mask >> i) & 3u) == 1u) raw.emplace_back(m, (mask & ~(1u << i)) | (1u << (i + 1)));

    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

    std::vector<Position> out;
    out.reserve(raw.size());
    for (auto [live, result] : raw) out.push_back(decode_mask(live, result));
    return out;
}

IntervalPlan interval_certificate(std::span<const long long> a_counts,
                                  std::span<const long long> b_counts) {
    if (a_counts.size() != b_counts.size() || a_counts.empty())
        fail(ErrorCode::length_mismatch, "interval count lists must match and be nonempty");
    for (std::size_t i = 0; i < a_counts.size(); ++i)
        if (a_counts[i] < 0 || b_counts[i] < 0)
            fail(ErrorCode::length_mismatch, "interval counts must be nonnegative");

    IntervalPlan plan;
    plan.k = (int)a_counts.size();
    plan.a_counts.assign(a_counts.begin(), a_counts.end());
    plan.b_counts.assign(b_counts.begin(), b_counts.end());
    plan.feasible = true;

    long long committed = 0;
    for (int i = 0; i + 1 < plan.k; ++i) {
        // least x with a_counts[i] < phi * x: interval i+1's cards are all
        // higher, so x defenders beat the a_i attackers by the high-cards case
        long long x = (long long)min_defenders_against((std::uint64_t)plan.a_counts[i]);
        plan.allocations.push_back(x);
        if (x > plan.b_counts[i + 1]) plan.feasible = false;
        committed += x;
    }

    long long total_b = 0;
    for (long long b : plan.b_counts) total_b += b;
    plan.leftover = total_b - committed;

    long long top_attackers = plan.a_counts[plan.k - 1];
    if (plan.leftover < 0 ||
        !phi_times_greater((std::uint64_t)plan.leftover, (std::uint64_t)top_attackers))
        plan.feasible = false;
    return plan;
}

std::string to_json(const IntervalPlan& plan) {
    auto list = [](const std::vector<long long>& v) {
        std::ostringstream out;
        out << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ',';
            out << v[i];
        }
        out << ']';
        return out.str();
    };
    std::ostringstream out;
    out << "{\"k\":" << plan.k << ",\"aCounts\":" << list(plan.a_counts)
        << ",\"bCounts\":" << list(plan.b_counts) << ",\"allocations\":" << list(plan.allocations)
        << ",\"leftover\":" << plan.leftover << ",\"feasible\":" << (plan.feasible ? "true" : "false")
        << "}";
    return out.str();
}

} // namespace pp
