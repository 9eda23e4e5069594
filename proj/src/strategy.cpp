#include "pp/strategy.hpp"

#include "pp/deal.hpp"
#include "pp/errors.hpp"

namespace pp {

namespace {

class LowestCard final : public Strategy {
public:
    Rank pick(const Position& pos, Player self) override { return hand_of(pos, self).front(); }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<LowestCard>(); }
    std::string name() const override { return "lowest"; }
};

class HighestCard final : public Strategy {
public:
    Rank pick(const Position& pos, Player self) override { return hand_of(pos, self).back(); }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<HighestCard>(); }
    std::string name() const override { return "highest"; }
};

class RandomCard final : public Strategy {
public:
    explicit RandomCard(std::uint64_t seed) : seed_(seed), rng_{mix64(seed)} {}

    Rank pick(const Position& pos, Player self) override {
        const Hand& hand = hand_of(pos, self);
        return hand[rng_.bounded(hand.size())];
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<RandomCard>(*this); }
    std::string name() const override { return "random(" + std::to_string(seed_) + ")"; }
    std::uint64_t state_key() const override { return rng_.state; }

private:
    std::uint64_t seed_;
    SplitMix64 rng_;
};

class FunctionPolicy final : public Strategy {
public:
    FunctionPolicy(std::string name, Rank (*fn)(const Position&, Player))
        : name_(std::move(name)), fn_(fn) {}

    Rank pick(const Position& pos, Player self) override { return fn_(pos, self); }
    std::unique_ptr<Strategy> clone() const override {
        return std::make_unique<FunctionPolicy>(*this);
    }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Rank (*fn_)(const Position&, Player);
};

} // namespace

std::unique_ptr<Strategy> lowest_card_strategy() { return std::make_unique<LowestCard>(); }

std::unique_ptr<Strategy> highest_card_strategy() { return std::make_unique<HighestCard>(); }

std::unique_ptr<Strategy> random_card_strategy(std::uint64_t seed) {
    return std::make_unique<RandomCard>(seed);
}

std::unique_ptr<Strategy> function_strategy(std::string name, Rank (*fn)(const Position&, Player)) {
    return std::make_unique<FunctionPolicy>(std::move(name), fn);
}

} // namespace pp
