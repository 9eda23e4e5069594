#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pp/cards.hpp"

namespace pp {

// splitmix64: generator plus the finalizer we use for seed mixing.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // unbiased draw in [0, n)
    std::uint64_t bounded(std::uint64_t n);
};

std::uint64_t mix64(std::uint64_t x);

// Trial generator state = mix64(seed) ^ mix64((trial_index + 1) * golden).
// Every trial gets an independent stream from (seed, trial_index) alone, so
// trials can run on any worker in any order.
SplitMix64 trial_rng(std::uint64_t seed, std::uint64_t trial_index);

struct Rational {
    long long num = 1;
    long long den = 1;

    double value() const { return (double)num / (double)den; }
    std::string decimal() const;
};

Rational parse_rational(const std::string& text); // "p/q", decimal, or integer

enum class DealKind { unbiased_iid, unbiased_exact, biased_iid, biased_exact };

const char* deal_kind_code(DealKind kind); // ui / ue / bi / be
DealKind parse_deal_kind(const std::string& code);

// n cards labeled 1..n dealt to the two players. The iid kinds send each card
// to Alice independently with probability r/(r+1); the exact kinds hand Alice
// round(n*r/(r+1)) cards chosen uniformly. r = 1 for the unbiased kinds.
struct DealModel {
    DealKind kind = DealKind::unbiased_iid;
    long long n = 0;
    Rational r{1, 1};
};

DealModel make_deal_model(DealKind kind, long long n, Rational r = {1, 1});

long long alice_exact_count(const DealModel& model); // round(n*r/(r+1)), half up

// Deterministic function of (model, seed, trial_index). Deals with an empty
// hand are rejected and redealt from the same stream; *rejections, when
// given, accumulates how many were thrown away.
Position sample_deal(const DealModel& model, std::uint64_t seed, std::uint64_t trial_index,
                     long long* rejections = nullptr);

// Same dealing decisions, but only the ownership mask (bit i = card i+1 to
// Alice). Valid for n <= 26.
std::uint32_t sample_deal_mask(const DealModel& model, std::uint64_t seed,
                               std::uint64_t trial_index, long long* rejections = nullptr);

// Per-interval card counts for intervals ((i-1)n/k, i*n/k], dealt without
// materializing hands. Uses one uniform draw per card whatever r is, so runs
// with equal (seed, trial_index) are coupled across r values.
struct IntervalCounts {
    std::vector<long long> alice;
    std::vector<long long> bob;
};

IntervalCounts sample_interval_counts(const DealModel& model, int k, std::uint64_t seed,
                                      std::uint64_t trial_index, long long* rejections = nullptr);

} // namespace pp
