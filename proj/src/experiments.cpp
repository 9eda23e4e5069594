#include "pp/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pp/phi.hpp"

namespace pp {

WilsonInterval wilson_interval(long long successes, long long trials) {
    if (trials <= 0) fail(ErrorCode::invalid_trials, "Wilson interval needs trials >= 1");
    const double z = 1.959963984540054; // 95%
    double n = (double)trials;
    double p = (double)successes / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - spread), std::min(1.0, center + spread)};
}

std::string to_csv_row(const EstimateRow& row) {
    char buf[64];
    std::ostringstream out;
    out << row.model << ',' << row.r << ',' << row.n << ',' << row.k << ',' << row.trials << ','
        << row.seed << ',' << row.alice_win << ',' << row.bob_win << ',' << row.draw;
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f", row.rate, row.ci_lo, row.ci_hi);
    out << buf;
    return out.str();
}

void write_csv(std::ostream& out, std::span<const EstimateRow> rows) {
    out << estimate_csv_header << '\n';
    for (const EstimateRow& row : rows) out << to_csv_row(row) << '\n';
}

std::string to_json(const EstimateRow& row) {
    std::ostringstream out;
    out << "{\"model\":\"" << row.model << "\",\"r\":\"" << row.r << "\",\"n\":" << row.n
        << ",\"k\":" << row.k << ",\"trials\":" << row.trials << ",\"seed\":" << row.seed
        << ",\"alice_win\":" << row.alice_win << ",\"bob_win\":" << row.bob_win
        << ",\"draw\":" << row.draw << ",\"rate\":" << row.rate << ",\"ci_lo\":" << row.ci_lo
        << ",\"ci_hi\":" << row.ci_hi << ",\"rejections\":" << row.rejections << "}";
    return out.str();
}

namespace {

int resolve_workers(int workers) {
#ifdef _OPENMP
    return workers <= 0 ? omp_get_max_threads() : workers;
#else
    (void)workers;
    return 1;
#endif
}

} // namespace

CensusReport census(const SolverTable& table, int n, int workers) {
    if (n < 1 || n > table.m_max())
        fail(ErrorCode::capacity_exceeded,
             "census needs 1 <= n <= " + std::to_string(table.m_max()));

    CensusReport report;
    report.n = n;
    const std::uint32_t full = (1u << n) - 1;

    long long alice = 0, bob = 0, draw = 0;
    std::vector<std::uint32_t> draw_masks;
    workers = resolve_workers(workers);

#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
#endif
    {
        std::vector<std::uint32_t> local_draws;
#ifdef _OPENMP
#pragma omp for schedule(static) reduction(+ : alice, bob, draw)
#endif
        for (std::int64_t mask = 1; mask < (std::int64_t)full; ++mask) {
            switch (outcome_mask(table, n, (std::uint32_t)mask)) {
                case Outcome::alice_win: ++alice; break;
                case Outcome::bob_win: ++bob; break;
                default:
                    ++draw;
                    local_draws.push_back((std::uint32_t)mask);
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        draw_masks.insert(draw_masks.end(), local_draws.begin(), local_draws.end());
    }

    report.alice_win = alice;
    report.bob_win = bob;
    report.draw = draw;
    std::sort(draw_masks.begin(), draw_masks.end());
    for (std::uint32_t mask : draw_masks) report.draw_positions.push_back(decode_mask(n, mask));
    return report;
}

std::string to_json(const CensusReport& report) {
    std::ostringstream out;
    out << "{\"n\":" << report.n << ",\"deals\":" << (report.alice_win + report.bob_win + report.draw)
        << ",\"alice_win\":" << report.alice_win << ",\"bob_win\":" << report.bob_win
        << ",\"draw\":" << report.draw << ",\"draw_positions\":[";
    for (std::size_t i = 0; i < report.draw_positions.size(); ++i) {
        if (i) out << ',';
        out << '"' << to_text(report.draw_positions[i]) << '"';
    }
    out << "]}";
    return out.str();
}

namespace {

EstimateRow base_row(const DealModel& model, const char* prefix, long long trials,
                     std::uint64_t seed, int k) {
    EstimateRow row;
    row.model = std::string(prefix) + deal_kind_code(model.kind);
    row.r = model.r.decimal();
    row.n = model.n;
    row.k = k;
    row.trials = trials;
    row.seed = seed;
    return row;
}

void finish_rate(EstimateRow& row, long long successes) {
    row.rate = (double)successes / (double)row.trials;
    WilsonInterval ci = wilson_interval(successes, row.trials);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
}

EstimateRow enumerate_draw_rate(const SolverTable& table, const DealModel& model,
                                std::uint64_t seed) {
    int n = (int)model.n;
    if (n > table.m_max())
        fail(ErrorCode::capacity_exceeded, "enumeration beyond table m_max");
    if (model.kind != DealKind::unbiased_iid && model.kind != DealKind::unbiased_exact)
        fail(ErrorCode::invalid_model, "exact enumeration covers the unbiased models only");

    const std::uint32_t full = (1u << n) - 1;
    long long alice = 0, bob = 0, draw = 0, trials = 0;

    auto tally = [&](std::uint32_t mask) {
        ++trials;
        if (mask == full) {
            ++alice;
            return;
        }
        if (mask == 0) {
            ++bob;
            return;
        }
        switch (outcome_mask(table, n, mask)) {
            case Outcome::alice_win: ++alice; break;
            case Outcome::bob_win: ++bob; break;
            default: ++draw;
        }
    };

    if (model.kind == DealKind::unbiased_iid) {
        // every assignment of n cards, equally weighted, empty hands included
        for (std::uint64_t mask = 0; mask <= full; ++mask) tally((std::uint32_t)mask);
    } else {
        // Gosper's hack over the exact-half assignments
        std::uint32_t mask = (1u << (n / 2)) - 1;
        while (mask <= full) {
            tally(mask);
            std::uint32_t c = mask & -mask;
            std::uint32_t r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if (r == 0) break;
        }
    }

    EstimateRow row = base_row(model, "", trials, seed, 0);
    row.alice_win = alice;
    row.bob_win = bob;
    row.draw = draw;
    finish_rate(row, draw);
    return row;
}

} // namespace

EstimateRow estimate_draw_rate(const SolverTable& table, const DealModel& model, long long trials,
                               std::uint64_t seed, bool exact_enumeration, int workers) {
    if (exact_enumeration) return enumerate_draw_rate(table, model, seed);
    if (trials <= 0) fail(ErrorCode::invalid_trials, "trials must be >= 1");
    if (model.n > table.m_max())
        fail(ErrorCode::capacity_exceeded, "draw-rate estimation beyond table m_max");

    int n = (int)model.n;
    long long alice = 0, bob = 0, draw = 0, rejections = 0;
    workers = resolve_workers(workers);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) \
    reduction(+ : alice, bob, draw, rejections)
#endif
    for (std::int64_t t = 0; t < trials; ++t) {
        long long rej = 0;
        std::uint32_t mask = sample_deal_mask(model, seed, (std::uint64_t)t, &rej);
        rejections += rej;
        switch (outcome_mask(table, n, mask)) {
            case Outcome::alice_win: ++alice; break;
            case Outcome::bob_win: ++bob; break;
            default: ++draw;
        }
    }

    EstimateRow row = base_row(model, "", trials, seed, 0);
    row.alice_win = alice;
    row.bob_win = bob;
    row.draw = draw;
    row.rejections = rejections;
    finish_rate(row, draw);
    return row;
}

EstimateRow estimate_certificate_rate(const DealModel& model, int k, long long trials,
                                      std::uint64_t seed, int workers) {
    if (trials <= 0) fail(ErrorCode::invalid_trials, "trials must be >= 1");
    if (k < 2) fail(ErrorCode::invalid_k, "need at least 2 intervals");
    if ((long long)k > model.n) fail(ErrorCode::invalid_k, "more intervals than cards");

    long long feasible = 0, infeasible = 0, rejections = 0;
    workers = resolve_workers(workers);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) \
    reduction(+ : feasible, infeasible, rejections)
#endif
    for (std::int64_t t = 0; t < trials; ++t) {
        long long rej = 0;
        IntervalCounts counts = sample_interval_counts(model, k, seed, (std::uint64_t)t, &rej);
        rejections += rej;
        IntervalPlan plan = interval_certificate(counts.alice, counts.bob); // Bob defends
        (plan.feasible ? feasible : infeasible) += 1;
    }

    EstimateRow row = base_row(model, "cert-", trials, seed, k);
    row.alice_win = feasible;
    row.bob_win = infeasible;
    row.rejections = rejections;
    finish_rate(row, feasible);
    return row;
}

EstimateRow estimate_count_rate(const DealModel& model, long long trials, std::uint64_t seed,
                                int workers) {
    if (trials <= 0) fail(ErrorCode::invalid_trials, "trials must be >= 1");

    long long decided = 0, undecided = 0, rejections = 0;
    workers = resolve_workers(workers);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) \
    reduction(+ : decided, undecided, rejections)
#endif
    for (std::int64_t t = 0; t < trials; ++t) {
        long long rej = 0;
        IntervalCounts counts = sample_interval_counts(model, 2, seed, (std::uint64_t)t, &rej);
        rejections += rej;
        long long a = counts.alice[0] + counts.alice[1];
        long long b = counts.bob[0] + counts.bob[1];
        // hand sizes alone decide the deal when a > phi * b
        (phi_times_greater((std::uint64_t)a, (std::uint64_t)b) ? decided : undecided) += 1;
    }

    EstimateRow row = base_row(model, "count-", trials, seed, 0);
    row.alice_win = decided;
    row.bob_win = undecided;
    row.rejections = rejections;
    finish_rate(row, decided);
    return row;
}

SweepMode parse_sweep_mode(const std::string& text) {
    if (text == "solver") return SweepMode::solver;
    if (text == "certificate") return SweepMode::certificate;
    if (text == "countonly" || text == "count-only") return SweepMode::count_only;
    fail(ErrorCode::parse_error, "unknown mode '" + text + "' (solver, certificate, countonly)");
}

std::vector<EstimateRow> sweep(const SolverTable* table, std::span<const Rational> r_values,
                               std::span<const long long> n_values, DealKind kind, SweepMode mode,
                               long long trials, std::uint64_t seed, int k, int workers) {
    if (mode == SweepMode::solver && table == nullptr)
        fail(ErrorCode::capacity_exceeded, "solver sweep needs a table");

    std::vector<EstimateRow> rows;
    rows.reserve(r_values.size() * n_values.size());
    for (const Rational& r : r_values) {
        for (long long n : n_values) {
            DealModel model = make_deal_model(kind, n, r);
            switch (mode) {
                case SweepMode::solver:
                    rows.push_back(estimate_draw_rate(*table, model, trials, seed, false, workers));
                    break;
                case SweepMode::certificate:
                    rows.push_back(estimate_certificate_rate(model, k, trials, seed, workers));
                    break;
                case SweepMode::count_only:
                    rows.push_back(estimate_count_rate(model, trials, seed, workers));
                    break;
            }
        }
    }
    return rows;
}

} // namespace pp
