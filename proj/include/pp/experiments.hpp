#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pp/deal.hpp"
#include "pp/lemma.hpp"
#include "pp/solver.hpp"

namespace pp {

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// 95% Wilson score interval; well behaved at rates near 0 and 1.
WilsonInterval wilson_interval(long long successes, long long trials);

// One grid point of any estimation run. Solver mode fills alice_win /
// bob_win / draw and rates draws; certificate mode reuses alice_win as
// "feasible" and bob_win as "infeasible"; count-only mode reuses them as
// "count exceeds phi ratio" / "does not". rejections counts redealt
// empty-hand deals and is not part of the CSV row.
struct EstimateRow {
    std::string model;
    std::string r;
    long long n = 0;
    int k = 0; // 0 when unused
    long long trials = 0;
    std::uint64_t seed = 0;
    long long alice_win = 0;
    long long bob_win = 0;
    long long draw = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    long long rejections = 0;
};

inline constexpr const char* estimate_csv_header =
    "model,r,n,k,trials,seed,alice_win,bob_win,draw,rate,ci_lo,ci_hi";

std::string to_csv_row(const EstimateRow& row);
void write_csv(std::ostream& out, std::span<const EstimateRow> rows);
std::string to_json(const EstimateRow& row);

// Exhaustive tally over all 2^n - 2 ordered deals with both hands nonempty.
struct CensusReport {
    int n = 0;
    long long alice_win = 0;
    long long bob_win = 0;
    long long draw = 0;
    std::vector<Position> draw_positions; // canonical, ascending mask order
};

CensusReport census(const SolverTable& table, int n, int workers = 0);
std::string to_json(const CensusReport& report);

// Monte Carlo draw-rate estimate through the solver. exact_enumeration
// replaces sampling with a uniform enumeration of every assignment (all 2^n
// for unbiased iid, all equal splits for unbiased exact); empty-hand
// assignments then count as decided games rather than being redealt.
EstimateRow estimate_draw_rate(const SolverTable& table, const DealModel& model,
                               long long trials, std::uint64_t seed,
                               bool exact_enumeration = false, int workers = 0);

// Feasibility rate of the interval certificate with Bob defending; counting
// only, no solver, so n may be large.
EstimateRow estimate_certificate_rate(const DealModel& model, int k, long long trials,
                                      std::uint64_t seed, int workers = 0);

// How often the dealt counts alone decide the game (hand size ratio above phi).
EstimateRow estimate_count_rate(const DealModel& model, long long trials, std::uint64_t seed,
                                int workers = 0);

enum class SweepMode { solver, certificate, count_only };

SweepMode parse_sweep_mode(const std::string& text);

// Cross product of r and n grids, one row per point, in grid order.
std::vector<EstimateRow> sweep(const SolverTable* table, std::span<const Rational> r_values,
                               std::span<const long long> n_values, DealKind kind, SweepMode mode,
                               long long trials, std::uint64_t seed, int k = 5, int workers = 0);

} // namespace pp
