// Acceptance suite: each criterion prints one PASS/FAIL line; the exit code
// is the number of failures.

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pp/config.hpp"
#include "pp/deal.hpp"
#include "pp/experiments.hpp"
#include "pp/lemma.hpp"
#include "pp/phi.hpp"
#include "pp/reference_solver.hpp"
#include "pp/solver.hpp"

#include "test_support.hpp"

using namespace pp;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::shared_ptr<const SolverTable> g_table;
double g_build_seconds = 0.0;

long peak_rss_kib() {
    struct rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) return -1;
    return usage.ru_maxrss;
}

// ---- criterion bodies ------------------------------------------------------

std::string small_n_classification() {
    for (int n = 2; n <= 4; ++n) {
        CensusReport report = census(*g_table, n);
        require(report.draw == 0, "draws at n=" + std::to_string(n));
        require(report.alice_win + report.bob_win == (1ll << n) - 2, "tally mismatch");
        for (std::uint32_t mask = 1; mask < (1u << n) - 1u; ++mask) {
            Position pos = decode_mask(n, mask);
            Outcome result = outcome(*g_table, pos);
            if (pos.alice.size() > pos.bob.size())
                require(result == Outcome::alice_win, "bigger hand lost: " + to_text(pos));
            else if (pos.alice.size() < pos.bob.size())
                require(result == Outcome::bob_win, "bigger hand lost: " + to_text(pos));
            else
                require(result == (holds(pos.alice, n) ? Outcome::alice_win : Outcome::bob_win),
                        "highest card did not decide: " + to_text(pos));
        }
    }
    return "n=2,3,4 fully classified";
}

std::string five_card_draw() {
    CensusReport report = census(*g_table, 5);
    require(report.draw == 2, "expected exactly 2 ordered draw deals");
    require(report.draw_positions.size() == 2, "draw list size");
    require(to_text(report.draw_positions[0]) == "1,2,4/3,5", "unexpected draw position");
    require(to_text(report.draw_positions[1]) == "3,5/1,2,4", "unexpected mirrored draw");
    require(outcome(*g_table, parse_position("1,2,4/3,5")) == Outcome::draw, "solve says non-draw");
    return "draws at n=5 are exactly 1,2,4/3,5 and its mirror";
}

std::string lemma_soundness() {
    long checked = 0;
    for (int m = 1; m <= 12; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Position pos = decode_mask(m, mask);
            LemmaClassification c = classify_lemma(pos);
            if (c.alice != LemmaVerdict::none) {
                require(g_table->alice_wins(m, mask), "lemma overclaims at " + to_text(pos));
                ++checked;
            }
            if (c.bob != LemmaVerdict::none) {
                require(g_table->bob_wins(m, mask), "lemma overclaims at " + to_text(pos));
                ++checked;
            }
        }
    return std::to_string(checked) + " verdicts all solver-confirmed";
}

std::string lemma_strategy_correctness() {
    auto stats = std::make_shared<SwitchStats>();
    long applicable = 0;
    std::vector<std::string> failures;
    for (int m = 1; m <= 12; ++m) {
        std::int64_t size = 1u << m;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : applicable)
#endif
        for (std::int64_t mask = 0; mask < size; ++mask) {
            Position pos = decode_mask(m, (std::uint32_t)mask);
            std::string failed;
            try {
                LemmaClassification c = classify_lemma(pos);
                for (Player player : {Player::alice, Player::bob}) {
                    if (c.of(player) == LemmaVerdict::none) continue;
                    ++applicable;
                    auto strat = lemma_strategy(pos, player, stats);
                    BestResponseReport report = best_response(pos, *strat, opponent(player));
                    if (report.beaten) failed = "beaten at " + to_text(pos);
                }
            } catch (const std::exception& e) {
                failed = to_text(pos) + ": " + e.what();
            }
            if (!failed.empty()) {
#ifdef _OPENMP
#pragma omp critical
#endif
                failures.push_back(failed);
            }
        }
    }
    require(failures.empty(), failures.empty() ? "" : failures.front());
    require(stats->many_to_high.load() > 0, "no many->high switches exercised");
    require(stats->high_to_many.load() > 0, "no high->many switches exercised");
    std::ostringstream out;
    out << applicable << " strategies unbeaten; " << stats->many_to_high.load() << "+"
        << stats->high_to_many.load() << " phase switches checked";
    return out.str();
}

std::string monotonicity() {
    long checked = 0;
    for (int m = 1; m <= 10; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Position pos = decode_mask(m, mask);
            bool wa_before = g_table->alice_wins(m, mask);
            bool wb_before = g_table->bob_wins(m, mask);
            for (const Position& step : improvement_steps(pos)) {
                CanonicalPosition canon = canonicalize(step);
                bool wa_after = g_table->alice_wins(canon.live_count, canon.alice_mask);
                bool wb_after = g_table->bob_wins(canon.live_count, canon.alice_mask);
                if (wa_before)
                    require(wa_after, "WA lost: " + to_text(pos) + " -> " + to_text(step));
                if (wb_after)
                    require(wb_before, "WB appeared: " + to_text(pos) + " -> " + to_text(step));
                ++checked;
            }
        }
    return std::to_string(checked) + " improvement edges verified";
}

std::string certificate_soundness() {
    SplitMix64 rng{mix64(config::default_seed)};
    long feasible_seen = 0;
    for (int trial = 0; trial < 500; ++trial) {
        int n = 16 + (int)rng.bounded(5);
        int k = 2 + (int)(trial % 3);
        DealModel model = make_deal_model(DealKind::unbiased_iid, n);
        Position pos = sample_deal(model, config::default_seed, (std::uint64_t)trial);
        std::vector<long long> a_counts(k, 0), b_counts(k, 0);
        for (int card = 1; card <= n; ++card) {
            int interval = (int)(((long long)card * k - 1) / n);
            (holds(pos.alice, card) ? a_counts : b_counts)[interval] += 1;
        }
        IntervalPlan bob_defends = interval_certificate(a_counts, b_counts);
        if (bob_defends.feasible) {
            ++feasible_seen;
            require(outcome(*g_table, pos) != Outcome::alice_win,
                    "feasible certificate but Alice wins " + to_text(pos));
        }
        IntervalPlan alice_defends = interval_certificate(b_counts, a_counts);
        if (alice_defends.feasible) {
            ++feasible_seen;
            require(outcome(*g_table, pos) != Outcome::bob_win,
                    "feasible mirrored certificate but Bob wins " + to_text(pos));
        }
    }
    require(feasible_seen > 0, "no feasible certificates sampled");
    return std::to_string(feasible_seen) + " feasible certificates, all sound";
}

std::string proof_constants() {
    // .063n > .101n/phi and .243/.101 > phi, scaled to integers
    require(phi_times_less(101, 63), "63*phi > 101 failed");
    require(phi_times_greater(243, 101), "243 > 101*phi failed");
    // the allocation arithmetic behind them: .099 - .063 = .036 per interval,
    // 4 * .036 + .099 = .243 left for the top interval
    require(99 - 63 == 36, "leftover step");
    require(4 * 36 + 99 == 243, "leftover total");
    return "63*phi > 101 and 243 > 101*phi via the quadratic form";
}

std::string comparator_oracle() {
    for (std::uint64_t a = 1; a <= 2000; ++a)
        for (std::uint64_t b = 1; b <= 2000; ++b) {
            if (phi_times_less(a, b) != pptest::oracle_phi_less(a, b) ||
                phi_times_greater(a, b) != pptest::oracle_phi_greater(a, b))
                throw Failure("comparator disagrees at " + std::to_string(a) + "," +
                              std::to_string(b));
        }
    std::uint64_t prev = 1, cur = 1;
    bool expect_greater = true;
    while (cur + prev <= 2000) {
        std::uint64_t next = cur + prev;
        require(phi_times_greater(next, cur) == expect_greater, "Fibonacci alternation");
        prev = cur;
        cur = next;
        expect_greater = !expect_greater;
    }
    return "4M pairs match the 50-digit oracle";
}

std::string exact_draw_probability() {
    DealModel ui = make_deal_model(DealKind::unbiased_iid, 5);
    EstimateRow row = estimate_draw_rate(*g_table, ui, 0, 0, true);
    require(row.trials == 32, "expected 32 assignments");
    require(row.draw == 2, "expected 2 draws");
    require(row.rate == 0.0625, "rate != 2/32");
    return "enumerated draw probability is exactly 2/32";
}

std::string threshold_trend_solver() {
    const long long trials = 10000;
    std::vector<long long> ns{8, 12, 16, 20};
    std::vector<EstimateRow> rows;
    std::ostringstream detail;
    detail.setf(std::ios::fixed);
    detail.precision(3);
    for (long long n : ns) {
        DealModel ui = make_deal_model(DealKind::unbiased_iid, n);
        rows.push_back(estimate_draw_rate(*g_table, ui, trials, config::default_seed));
        detail << " n" << n << "=" << rows.back().rate;
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        bool nondecreasing = rows[i + 1].rate >= rows[i].rate;
        bool overlap = rows[i + 1].ci_hi >= rows[i].ci_lo;
        require(nondecreasing || overlap, "draw rate dropped between n grid points");
    }

    DealModel biased = make_deal_model(DealKind::biased_iid, 20, {9, 5});
    EstimateRow row = estimate_draw_rate(*g_table, biased, trials, config::default_seed);
    double alice_rate = (double)row.alice_win / (double)row.trials;
    if (alice_rate < 0.95) {
        // the sampled rate is not seed luck: enumerate all 2^20 assignments
        // with their iid weights for the exact probabilities
        long double p = 9.0L / 14.0L, pa = 0, pb = 0;
        for (std::uint64_t mask = 1; mask < (1ull << 20) - 1; ++mask) {
            long double w = powl(p, __builtin_popcountll(mask)) *
                            powl(1 - p, 20 - __builtin_popcountll(mask));
            Outcome o = outcome_mask(*g_table, 20, (std::uint32_t)mask);
            if (o == Outcome::alice_win) pa += w;
            if (o == Outcome::bob_win) pb += w;
        }
        std::ostringstream why;
        why.setf(std::ios::fixed);
        why.precision(4);
        why << "draw trend held (" << detail.str() << ") but the 0.95 alice-win target is"
            << " unreachable under iid bias 9/5 at n=20: sampled " << alice_rate
            << ", exact " << pa << " (share of decided games " << pa / (pa + pb) << ")";
        throw Failure(why.str());
    }
    detail << "; alice@r=1.8:" << alice_rate;
    return "draw rate nondecreasing" + detail.str();
}

std::string threshold_trend_certificate() {
    DealModel ui = make_deal_model(DealKind::unbiased_iid, 1000000);
    EstimateRow cert = estimate_certificate_rate(ui, 5, 200, config::default_seed);
    require(cert.rate >= 0.99,
            "certificate feasibility " + std::to_string(cert.rate) + " < 0.99");

    std::vector<Rational> rs{{17, 10}};
    std::vector<long long> ns{10000};
    std::vector<EstimateRow> rows = sweep(nullptr, rs, ns, DealKind::biased_iid,
                                          SweepMode::count_only, 1000, config::default_seed);
    require(rows.size() == 1, "sweep grid size");
    require(rows[0].rate >= 0.99,
            "count-only rate " + std::to_string(rows[0].rate) + " < 0.99");
    std::ostringstream out;
    out << "cert@1e6:" << cert.rate << " countonly@r=1.7:" << rows[0].rate;
    return out.str();
}

std::string solver_self_consistency() {
    ReferenceSolver ref;
    for (int m = 1; m <= 12; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            if (ref.alice_wins(m, mask) != g_table->alice_wins(m, mask) ||
                ref.bob_wins(m, mask) != g_table->bob_wins(m, mask))
                throw Failure("reference disagrees at m=" + std::to_string(m));
        }
    for (int m = 1; m <= g_table->m_max(); ++m)
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask)
            if (g_table->alice_wins(m, (std::uint32_t)mask) &&
                g_table->bob_wins(m, (std::uint32_t)mask))
                throw Failure("WA and WB both set at m=" + std::to_string(m));

    require(g_table->m_max() == 22, "table not built to 22");
    require(g_build_seconds < 120.0,
            "build took " + std::to_string(g_build_seconds) + " s >= 120 s");
    long rss = peak_rss_kib();
    require(rss < 0 || rss < 2ll * 1024 * 1024, "peak rss above 2 GiB");
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << "reference agreement to m=12; exclusive predicates to m=22; build " << g_build_seconds
        << " s";
    if (rss > 0) out << ", peak rss " << rss / 1024 << " MiB";
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    auto start = std::chrono::steady_clock::now();
    g_table = std::make_shared<SolverTable>(build_table(config::default_m_max));
    g_build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    struct Criterion {
        int id;
        const char* title;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "small-n classification", small_n_classification},
        {2, "the 5-card draw", five_card_draw},
        {3, "main-lemma soundness (m <= 12)", lemma_soundness},
        {4, "constructive strategy correctness (m <= 12)", lemma_strategy_correctness},
        {5, "monotonicity (m <= 10)", monotonicity},
        {6, "certificate soundness (500 deals)", certificate_soundness},
        {7, "proof-constant arithmetic", proof_constants},
        {8, "phi comparator vs 50-digit oracle", comparator_oracle},
        {9, "exact draw probability at n=5", exact_draw_probability},
        {10, "threshold trend, solver regime", threshold_trend_solver},
        {11, "threshold trend, certificate regime", threshold_trend_certificate},
        {12, "solver self-consistency and build budget", solver_self_consistency},
    };

    int only = argc > 1 ? std::atoi(argv[1]) : 0; // run one criterion when given
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        if (only != 0 && criterion.id != only) continue;
        try {
            std::string detail = criterion.run();
            std::printf("PASS %2d %s: %s\n", criterion.id, criterion.title, detail.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL %2d %s: %s\n", criterion.id, criterion.title, e.what());
        }
        std::fflush(stdout);
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
