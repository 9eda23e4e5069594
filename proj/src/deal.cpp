#include "pp/deal.hpp"

#include <algorithm>
#include <cstdio>

#include "pp/config.hpp"

namespace pp {

std::uint64_t SplitMix64::bounded(std::uint64_t n) {
    // Lemire multiply-shift with rejection
    unsigned __int128 m = (unsigned __int128)next() * n;
    std::uint64_t lo = (std::uint64_t)m;
    if (lo < n) {
        std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = (unsigned __int128)next() * n;
            lo = (std::uint64_t)m;
        }
    }
    return (std::uint64_t)(m >> 64);
}

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

SplitMix64 trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
    return SplitMix64{mix64(seed) ^ mix64((trial_index + 1) * 0x9E3779B97F4A7C15ull)};
}

std::string Rational::decimal() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value());
    return buf;
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { fail(ErrorCode::parse_error, "bad ratio '" + text + "'"); };
    if (text.empty()) bad();
    std::size_t slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t used = 0;
            long long num = std::stoll(text.substr(0, slash), &used);
            if (used != slash) bad();
            long long den = std::stoll(text.substr(slash + 1), &used);
            if (used != text.size() - slash - 1) bad();
            if (num <= 0 || den <= 0) bad();
            return {num, den};
        }
        std::size_t dot = text.find('.');
        if (dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            std::size_t frac = text.size() - dot - 1;
            if (digits.empty() || frac == 0 || frac > 9) bad();
            std::size_t used = 0;
            long long num = std::stoll(digits, &used);
            if (used != digits.size() || num <= 0) bad();
            long long den = 1;
            for (std::size_t i = 0; i < frac; ++i) den *= 10;
            return {num, den};
        }
        std::size_t used = 0;
        long long num = std::stoll(text, &used);
        if (used != text.size() || num <= 0) bad();
        return {num, 1};
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad();
    }
    return {1, 1};
}

const char* deal_kind_code(DealKind kind) {
    switch (kind) {
        case DealKind::unbiased_iid: return "ui";
        case DealKind::unbiased_exact: return "ue";
        case DealKind::biased_iid: return "bi";
        default: return "be";
    }
}

DealKind parse_deal_kind(const std::string& code) {
    if (code == "ui") return DealKind::unbiased_iid;
    if (code == "ue") return DealKind::unbiased_exact;
    if (code == "bi") return DealKind::biased_iid;
    if (code == "be") return DealKind::biased_exact;
    fail(ErrorCode::invalid_model, "unknown deal model '" + code + "' (ui, ue, bi, be)");
}

DealModel make_deal_model(DealKind kind, long long n, Rational r) {
    if (n < 2) fail(ErrorCode::invalid_model, "need at least 2 cards");
    if (r.num < r.den) fail(ErrorCode::invalid_model, "bias ratio must be >= 1");
    bool unbiased = kind == DealKind::unbiased_iid || kind == DealKind::unbiased_exact;
    if (unbiased && r.num != r.den)
        fail(ErrorCode::invalid_model, "unbiased models require r = 1");
    if (kind == DealKind::unbiased_exact && n % 2 != 0)
        fail(ErrorCode::invalid_model, "exact-half dealing needs an even card count");
    if (unbiased) r = {1, 1};
    return DealModel{kind, n, r};
}

long long alice_exact_count(const DealModel& model) {
    // round(n * r / (r + 1)), half up, in exact integer arithmetic
    long long num = model.r.num, den = model.r.den;
    return (2 * model.n * num + (num + den)) / (2 * (num + den));
}

namespace {

bool iid_kind(DealKind kind) {
    return kind == DealKind::unbiased_iid || kind == DealKind::biased_iid;
}

// Card -> Alice iff a raw 64-bit draw falls under floor(2^64 * r/(r+1)).
// Exactly one draw per card whatever r is, so equal seeds couple the deals
// across r values (Alice's set only grows with r).
std::uint64_t alice_threshold(const Rational& r) {
    unsigned __int128 full = (unsigned __int128)1 << 64;
    return (std::uint64_t)(full * (std::uint64_t)r.num / ((std::uint64_t)r.num + (std::uint64_t)r.den));
}

// One dealing pass; visit(card, to_alice) is called for cards 1..n in order.
template <typename Visit>
void deal_once(const DealModel& model, SplitMix64& rng, Visit&& visit) {
    if (iid_kind(model.kind)) {
        std::uint64_t threshold = alice_threshold(model.r);
        for (long long card = 1; card <= model.n; ++card)
            visit(card, rng.next() < threshold);
    } else {
        // sequential hypergeometric draw of a uniform alice-count subset
        long long alice_left = alice_exact_count(model);
        long long left = model.n;
        for (long long card = 1; card <= model.n; ++card) {
            bool to_alice = (long long)rng.bounded((std::uint64_t)left) < alice_left;
            if (to_alice) --alice_left;
            --left;
            visit(card, to_alice);
        }
    }
}

} // namespace

Position sample_deal(const DealModel& model, std::uint64_t seed, std::uint64_t trial_index,
                     long long* rejections) {
    if (model.n > config::max_live_cards)
        fail(ErrorCode::capacity_exceeded,
             "cannot materialize a deal of " + std::to_string(model.n) + " cards");
    SplitMix64 rng = trial_rng(seed, trial_index);
    while (true) {
        Position pos;
        deal_once(model, rng, [&](long long card, bool to_alice) {
            (to_alice ? pos.alice : pos.bob).push_back((Rank)card);
        });
        if (!pos.alice.empty() && !pos.bob.empty()) return pos;
        if (rejections) ++*rejections;
    }
}

std::uint32_t sample_deal_mask(const DealModel& model, std::uint64_t seed,
                               std::uint64_t trial_index, long long* rejections) {
    if (model.n > config::table_hard_cap)
        fail(ErrorCode::capacity_exceeded, "mask deals support at most 26 cards");
    SplitMix64 rng = trial_rng(seed, trial_index);
    const std::uint32_t full = model.n >= 32 ? ~0u : (1u << model.n) - 1;
    while (true) {
        std::uint32_t mask = 0;
        deal_once(model, rng, [&](long long card, bool to_alice) {
            if (to_alice) mask |= 1u << (card - 1);
        });
        if (mask != 0 && mask != full) return mask;
        if (rejections) ++*rejections;
    }
}

IntervalCounts sample_interval_counts(const DealModel& model, int k, std::uint64_t seed,
                                      std::uint64_t trial_index, long long* rejections) {
    if (k < 2) fail(ErrorCode::invalid_k, "need at least 2 intervals");
    if ((long long)k > model.n) fail(ErrorCode::invalid_k, "more intervals than cards");

    SplitMix64 rng = trial_rng(seed, trial_index);
    IntervalCounts counts;
    while (true) {
        counts.alice.assign(k, 0);
        counts.bob.assign(k, 0);
        long long alice_total = 0;
        deal_once(model, rng, [&](long long card, bool to_alice) {
            // interval i (0-based) covers (floor(i*n/k), floor((i+1)*n/k)]
            int interval = (int)(((unsigned __int128)card * k - 1) / model.n);
            if (to_alice) {
                ++counts.alice[interval];
                ++alice_total;
            } else {
                ++counts.bob[interval];
            }
        });
        if (alice_total != 0 && alice_total != model.n) return counts;
        if (rejections) ++*rejections;
    }
}

} // namespace pp
