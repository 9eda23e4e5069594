// pp: solver and experiment driver for the card game Peer Pressure.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pp/config.hpp"
#include "pp/deal.hpp"
#include "pp/experiments.hpp"
#include "pp/lemma.hpp"
#include "pp/phi.hpp"
#include "pp/reference_solver.hpp"
#include "pp/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace pp;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

long peak_rss_kib() {
    struct rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0) return -1;
    return usage.ru_maxrss;
}

// The position argument is either a literal ("1,2,4/3,5" or JSON) or the name
// of a file holding one.
Position load_position_arg(const std::string& arg) {
    if (std::filesystem::exists(arg) && std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_position(buf.str());
    }
    return parse_position(arg);
}

struct TableOptions {
    std::string cache_path; // from --table / PP_TABLE_PATH
    int m_max = 0;          // from --mmax, 0 = default
    int workers = 0;
};

// Load the cache when it is big enough, otherwise build (and refresh the
// cache if a path was given).
std::shared_ptr<const SolverTable> acquire_table(const TableOptions& opt, int needed) {
    int target = std::max(needed, opt.m_max > 0 ? opt.m_max : config::default_m_max);
    if (needed > config::table_hard_cap)
        fail(ErrorCode::capacity_exceeded,
             std::to_string(needed) + " live cards exceed the hard cap " +
                 std::to_string(config::table_hard_cap));
    if (opt.m_max > 0 && needed > opt.m_max)
        fail(ErrorCode::capacity_exceeded,
             "position needs m_max >= " + std::to_string(needed));

    if (!opt.cache_path.empty() && std::filesystem::exists(opt.cache_path)) {
        SolverTable cached = load_table(opt.cache_path);
        if (cached.m_max() >= needed)
            return std::make_shared<SolverTable>(std::move(cached));
    }
    auto table = std::make_shared<SolverTable>(build_table(target, opt.workers));
    if (!opt.cache_path.empty()) save_table(*table, opt.cache_path);
    return table;
}

void write_out(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::parse_error, "cannot write " + path);
    out << content;
}

std::unique_ptr<Strategy> make_policy(const std::string& spec, const Position& pos, Player player,
                                      const TableOptions& topt) {
    if (spec == "lowest") return lowest_card_strategy();
    if (spec == "highest") return highest_card_strategy();
    if (spec == "lemma") return lemma_strategy(pos, player);
    if (spec == "solver") return solver_strategy(acquire_table(topt, live_count(pos)));
    if (spec.rfind("random:", 0) == 0) {
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(spec.substr(7));
        } catch (const std::exception&) {
            fail(ErrorCode::parse_error, "bad policy seed in '" + spec + "'");
        }
        return random_card_strategy(seed);
    }
    fail(ErrorCode::parse_error,
         "unknown policy '" + spec + "' (lowest, highest, lemma, solver, random:SEED)");
}

int run_solve(const std::string& pos_arg, const TableOptions& topt, const std::string& out_path) {
    Position pos = load_position_arg(pos_arg);
    auto table = acquire_table(topt, std::max(1, live_count(pos)));
    Outcome result = outcome(*table, pos);

    std::cout << outcome_name(result) << '\n';

    std::ostringstream json;
    json << "{\"position\":\"" << to_text(pos) << "\",\"outcome\":\"" << outcome_name(result)
         << "\"";

    if (result != Outcome::draw && !terminal_winner(pos)) {
        Player winner = result == Outcome::alice_win ? Player::alice : Player::bob;
        std::vector<Rank> moves = winning_moves(*table, pos, winner);
        std::cout << "winning moves for " << player_name(winner) << ": " << to_text(moves) << '\n';

        auto strat = extract_strategy(table, pos, winner);
        BestResponseReport report = best_response(pos, *strat, opponent(winner));
        std::cout << "best response by " << player_name(opponent(winner)) << ": "
                  << (report.beaten ? "beats the strategy" : "cannot beat the strategy") << '\n';

        auto opp = solver_strategy(table);
        Transcript t = winner == Player::alice ? play_out(pos, *strat, *opp)
                                               : play_out(pos, *opp, *strat);
        std::cout << "sample line against best defense:\n" << to_text(t);

        json << ",\"winning_moves\":" << '[';
        for (std::size_t i = 0; i < moves.size(); ++i) json << (i ? "," : "") << moves[i];
        json << "],\"beaten\":" << (report.beaten ? "true" : "false");
    }
    json << "}";
    if (!out_path.empty()) write_out(out_path, json.str() + "\n");
    return 0;
}

int run_census(int n, const TableOptions& topt, const std::string& out_path) {
    auto table = acquire_table(topt, n);
    CensusReport report = census(*table, n, topt.workers);
    std::cout << "census n=" << report.n << ": deals=" << (report.alice_win + report.bob_win + report.draw)
              << " alice_win=" << report.alice_win << " bob_win=" << report.bob_win
              << " draw=" << report.draw << '\n';
    if (!report.draw_positions.empty()) {
        std::size_t shown = std::min<std::size_t>(report.draw_positions.size(), 50);
        std::cout << "draw positions" << (shown < report.draw_positions.size() ? " (first 50)" : "")
                  << ":\n";
        for (std::size_t i = 0; i < shown; ++i)
            std::cout << "  " << to_text(report.draw_positions[i]) << '\n';
        if (shown < report.draw_positions.size())
            std::cout << "  ... " << report.draw_positions.size()
                      << " total; use --out for the full list\n";
    }
    if (!out_path.empty()) write_out(out_path, to_json(report) + "\n");
    return 0;
}

struct SweepOptions {
    std::string r_list = "1";
    std::string n_list;
    std::string model = "ui";
    std::string mode = "solver";
    long long trials = 1000;
    std::uint64_t seed = config::default_seed;
    int k = 5;
};

int run_sweep(const SweepOptions& sopt, const TableOptions& topt, const std::string& out_path,
              const std::string& format) {
    std::vector<Rational> rs;
    for (std::size_t begin = 0; begin <= sopt.r_list.size();) {
        std::size_t end = sopt.r_list.find(',', begin);
        if (end == std::string::npos) end = sopt.r_list.size();
        rs.push_back(parse_rational(sopt.r_list.substr(begin, end - begin)));
        begin = end + 1;
    }
    std::vector<long long> ns;
    for (std::size_t begin = 0; begin <= sopt.n_list.size();) {
        std::size_t end = sopt.n_list.find(',', begin);
        if (end == std::string::npos) end = sopt.n_list.size();
        try {
            ns.push_back(std::stoll(sopt.n_list.substr(begin, end - begin)));
        } catch (const std::exception&) {
            fail(ErrorCode::parse_error, "bad --n list '" + sopt.n_list + "'");
        }
        begin = end + 1;
    }

    DealKind kind = parse_deal_kind(sopt.model);
    SweepMode mode = parse_sweep_mode(sopt.mode);

    std::shared_ptr<const SolverTable> table;
    if (mode == SweepMode::solver) {
        long long max_n = 0;
        for (long long n : ns) max_n = std::max(max_n, n);
        table = acquire_table(topt, (int)std::min<long long>(max_n, 1000));
    }

    std::vector<EstimateRow> rows = sweep(table.get(), rs, ns, kind, mode, sopt.trials, sopt.seed,
                                          sopt.k, topt.workers);

    for (const EstimateRow& row : rows) {
        std::cout << row.model << " r=" << row.r << " n=" << row.n << " k=" << row.k
                  << " trials=" << row.trials << " -> rate=" << row.rate << " [" << row.ci_lo
                  << ", " << row.ci_hi << "] counts=" << row.alice_win << '/' << row.bob_win << '/'
                  << row.draw;
        if (row.rejections > 0) std::cout << " redeals=" << row.rejections;
        std::cout << '\n';
    }

    if (!out_path.empty()) {
        if (format == "json") {
            std::ostringstream out;
            out << '[';
            for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << to_json(rows[i]);
            out << "]\n";
            write_out(out_path, out.str());
        } else {
            std::ostringstream out;
            write_csv(out, rows);
            write_out(out_path, out.str());
        }
    }
    return 0;
}

int run_certify(const std::string& pos_arg, int k, const std::string& out_path) {
    Position pos = load_position_arg(pos_arg);
    if (k < 1) fail(ErrorCode::invalid_k, "--k must be >= 1");
    int m = live_count(pos);
    if (k > m) fail(ErrorCode::invalid_k, "more intervals than live cards");

    // partition the live ranks, low to high, into k nearly equal intervals
    CanonicalPosition canon = canonicalize(pos);
    std::vector<long long> alice_counts(k, 0), bob_counts(k, 0);
    for (int i = 1; i <= m; ++i) {
        int interval = (int)(((long long)i * k - 1) / m);
        if (canon.owner(i) == Player::alice)
            ++alice_counts[interval];
        else
            ++bob_counts[interval];
    }

    IntervalPlan bob_defends = interval_certificate(alice_counts, bob_counts);
    IntervalPlan alice_defends = interval_certificate(bob_counts, alice_counts);

    std::cout << "bob defends:   " << (bob_defends.feasible ? "feasible" : "infeasible")
              << " leftover=" << bob_defends.leftover << '\n';
    std::cout << "alice defends: " << (alice_defends.feasible ? "feasible" : "infeasible")
              << " leftover=" << alice_defends.leftover << '\n';

    std::string json = "{\"position\":\"" + to_text(pos) + "\",\"bob_defends\":" +
                       to_json(bob_defends) + ",\"alice_defends\":" + to_json(alice_defends) + "}";
    std::cout << json << '\n';
    if (!out_path.empty()) write_out(out_path, json + "\n");
    return 0;
}

int run_playout(const std::string& pos_arg, const std::string& alice_spec,
                const std::string& bob_spec, const TableOptions& topt,
                const std::string& out_path) {
    Position pos = load_position_arg(pos_arg);
    auto alice = make_policy(alice_spec, pos, Player::alice, topt);
    auto bob = make_policy(bob_spec, pos, Player::bob, topt);
    Transcript t = play_out(pos, *alice, *bob);
    std::string text = to_text(t);
    std::cout << "position: " << to_text(pos) << "\nalice: " << alice->name()
              << "\nbob: " << bob->name() << '\n'
              << text;
    if (!out_path.empty()) write_out(out_path, text);
    return 0;
}

int run_bench(int m_max, int workers, bool with_reference) {
    if (m_max < 1 || m_max > config::table_hard_cap)
        fail(ErrorCode::capacity_exceeded, "bench m_max outside 1.." +
                                               std::to_string(config::table_hard_cap));
#ifdef _OPENMP
    int threads = workers > 0 ? workers : omp_get_max_threads();
#else
    int threads = 1;
#endif

    std::cout << "table build m_max=" << m_max << '\n';

    auto start = std::chrono::steady_clock::now();
    SolverTable parallel = build_table(m_max, threads);
    double parallel_s = seconds_since(start);
    std::cout << "  openmp (" << threads << " threads): " << parallel_s << " s\n";

    start = std::chrono::steady_clock::now();
    SolverTable serial = build_table(m_max, 1);
    double serial_s = seconds_since(start);
    std::cout << "  serial:             " << serial_s << " s\n";
    std::cout << "  speedup: " << serial_s / parallel_s << "x\n";

    bool identical = true;
    for (int m = 1; m <= m_max && identical; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m) && identical; ++mask)
            identical = parallel.alice_wins(m, mask) == serial.alice_wins(m, mask) &&
                        parallel.bob_wins(m, mask) == serial.bob_wins(m, mask);
    std::cout << "  tables identical: " << (identical ? "yes" : "NO") << '\n';
    std::cout << "  table size: " << parallel.byte_size() << " bytes\n";

    if (with_reference) {
        int ref_m = std::min(m_max, 18);
        start = std::chrono::steady_clock::now();
        ReferenceSolver ref;
        bool agrees = true;
        for (std::uint32_t mask = 0; mask < (1u << ref_m); ++mask)
            if (ref.outcome_mask(ref_m, mask) != outcome_mask(parallel, ref_m, mask)) {
                agrees = false;
                break;
            }
        double ref_s = seconds_since(start);
        std::cout << "  top-down reference (m=" << ref_m << "): " << ref_s << " s, "
                  << ref.states_visited() << " states, agrees: " << (agrees ? "yes" : "NO") << '\n';
        if (!agrees) return 1;
    }

    long rss = peak_rss_kib();
    if (rss > 0) std::cout << "  peak rss: " << rss / 1024.0 << " MiB\n";
    return identical ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peer Pressure solver and experiment harness"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    TableOptions topt;
    std::string out_path;
    std::string format;

    app.add_option("--table", topt.cache_path, "tablebase cache path")
        ->envname("PP_TABLE_PATH");
    app.add_option("--mmax", topt.m_max, "tablebase live-card limit");
    app.add_option("--workers", topt.workers, "worker threads (default: all)");
    app.add_option("--out", out_path, "write machine-readable output here");
    app.add_option("--format", format, "output format for --out")
        ->check(CLI::IsMember({"csv", "json", "plain"}));

    std::string pos_arg;
    auto* solve_cmd = app.add_subcommand("solve", "decide a position");
    solve_cmd->add_option("position", pos_arg, "position text, JSON, or file")->required();

    int census_n = 0;
    auto* census_cmd = app.add_subcommand("census", "classify every deal of n cards");
    census_cmd->add_option("n", census_n, "number of cards")->required();

    SweepOptions sopt;
    auto* sweep_cmd = app.add_subcommand("sweep", "estimate rates over an (r, n) grid");
    sweep_cmd->add_option("--r", sopt.r_list, "bias ratios, comma separated (p/q or decimal)");
    sweep_cmd->add_option("--n", sopt.n_list, "card counts, comma separated")->required();
    sweep_cmd->add_option("--model", sopt.model, "deal model: ui, ue, bi, be");
    sweep_cmd->add_option("--mode", sopt.mode, "solver, certificate, or countonly");
    sweep_cmd->add_option("--trials", sopt.trials, "Monte Carlo trials per grid point");
    sweep_cmd->add_option("--seed", sopt.seed, "base seed");
    sweep_cmd->add_option("--k", sopt.k, "intervals for certificate mode");

    std::string certify_pos;
    int certify_k = 5;
    auto* certify_cmd = app.add_subcommand("certify", "interval certificate for a position");
    certify_cmd->add_option("position", certify_pos, "position text, JSON, or file")->required();
    certify_cmd->add_option("--k", certify_k, "number of intervals");

    std::string playout_pos, alice_spec = "lowest", bob_spec = "lowest";
    auto* playout_cmd = app.add_subcommand("playout", "referee two policies");
    playout_cmd->add_option("position", playout_pos, "position text, JSON, or file")->required();
    playout_cmd->add_option("--alice", alice_spec, "lowest, highest, lemma, solver, random:SEED");
    playout_cmd->add_option("--bob", bob_spec, "lowest, highest, lemma, solver, random:SEED");

    int bench_mmax = 20;
    bool bench_reference = false;
    auto* bench_cmd = app.add_subcommand("bench", "time the table build");
    bench_cmd->add_option("--mmax", bench_mmax, "levels to build")
        ->default_val(20);
    bench_cmd->add_flag("--reference", bench_reference, "also time the top-down reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) return run_solve(pos_arg, topt, out_path);
        if (*census_cmd) return run_census(census_n, topt, out_path);
        if (*sweep_cmd) return run_sweep(sopt, topt, out_path, format.empty() ? "csv" : format);
        if (*certify_cmd) return run_certify(certify_pos, certify_k, out_path);
        if (*playout_cmd) return run_playout(playout_pos, alice_spec, bob_spec, topt, out_path);
        if (*bench_cmd) return run_bench(topt.m_max > 0 ? topt.m_max : bench_mmax,
                                         topt.workers, bench_reference);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::capacity_exceeded ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
