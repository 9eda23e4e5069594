#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "pp/cards.hpp"
#include "pp/deal.hpp"
#include "pp/reference_solver.hpp"
#include "pp/solver.hpp"

#include "test_support.hpp"

using namespace pp;

namespace {

std::shared_ptr<const SolverTable> shared_table() {
    static std::shared_ptr<const SolverTable> table =
        std::make_shared<SolverTable>(build_table(12));
    return table;
}

Position pos_of(const char* text) { return parse_position(text); }

// Independent oracle: Bob can refute EVERY pure Alice strategy iff, with
// Alice's current choice exposed each round, Bob always has a good reply.
// Positions never repeat within a game (live count strictly drops), so this
// move-tree recursion covers exactly the positional strategies.
bool bob_refutes_all(const Position& pos) {
    if (auto winner = terminal_winner(pos)) return *winner == Player::bob;
    for (Rank a : pos.alice) {
        bool refuted = false;
        for (Rank b : pos.bob)
            if (bob_refutes_all(successor(pos, a, b))) {
                refuted = true;
                break;
            }
        if (!refuted) return false;
    }
    return true;
}

// Every pure Alice strategy on the move tree, as explicit position -> card
// maps. Feasible only for tiny games.
void enumerate_alice_strategies(const Position& pos, std::map<std::string, Rank> partial,
                                std::vector<std::map<std::string, Rank>>& out) {
    if (terminal_winner(pos)) {
        out.push_back(std::move(partial));
        return;
    }
    if (auto it = partial.find(to_text(pos)); it != partial.end()) {
        // a collision from another branch already fixed this position's choice
        Rank a = it->second;
        std::vector<std::map<std::string, Rank>> partials{std::move(partial)};
        for (Rank b : pos.bob) {
            std::vector<std::map<std::string, Rank>> next;
            for (auto& p : partials) enumerate_alice_strategies(successor(pos, a, b), p, next);
            partials = std::move(next);
        }
        for (auto& p : partials) out.push_back(std::move(p));
        return;
    }
    for (Rank a : pos.alice) {
        std::map<std::string, Rank> with_choice = partial;
        with_choice[to_text(pos)] = a;
        std::vector<std::map<std::string, Rank>> partials{with_choice};
        for (Rank b : pos.bob) {
            std::vector<std::map<std::string, Rank>> next;
            for (auto& p : partials) enumerate_alice_strategies(successor(pos, a, b), p, next);
            partials = std::move(next);
        }
        for (auto& p : partials) out.push_back(std::move(p));
    }
}

void check_transcript_valid(const Position& start, const Transcript& t, Player expected_winner) {
    Position current = start;
    for (const BattleRecord& rec : t.battles) current = successor(current, rec.alice_card, rec.bob_card);
    CHECK(terminal_winner(current) == expected_winner);
    CHECK(t.final_winner == expected_winner);
}

} // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("two-card levels match hand evaluation") {
    auto table = shared_table();
    // Alice holds the lower card: forced battle loses her only card
    CHECK_FALSE(table->alice_wins(2, 0b01));
    CHECK(table->bob_wins(2, 0b01));
    // Alice holds the higher card
    CHECK(table->alice_wins(2, 0b10));
    CHECK_FALSE(table->bob_wins(2, 0b10));
}

TEST_CASE("outcome spot checks") {
    auto table = shared_table();
    CHECK(outcome(*table, pos_of("1,2,4/3,5")) == Outcome::draw);
    CHECK(outcome(*table, pos_of("2,3/1,4")) == Outcome::bob_win);
    CHECK(outcome(*table, pos_of("1,2/3")) == Outcome::alice_win);
    // terminal positions report the trivial winner
    CHECK(outcome(*table, pos_of("1,2/-")) == Outcome::alice_win);
    CHECK(outcome(*table, pos_of("-/9")) == Outcome::bob_win);
}

TEST_CASE("capacity errors") {
    auto table = shared_table();
    CHECK_THROWS_AS(outcome(*table, decode_mask(13, 0b11)), Error);
    CHECK_THROWS_AS(build_table(27), Error);
    CHECK_THROWS_AS(build_table(0), Error);
}

TEST_CASE("mutual exclusion of the win predicates") {
    auto table = shared_table();
    for (int m = 1; m <= table->m_max(); ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
            CHECK_FALSE((table->alice_wins(m, mask) && table->bob_wins(m, mask)));
}

TEST_CASE("relabeling invariance") {
    auto table = shared_table();
    SplitMix64 rng{5};
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + (int)rng.bounded(8);
        std::uint32_t mask = (std::uint32_t)rng.bounded(1u << m);
        Position canon_pos = decode_mask(m, mask);
        Position relabeled;
        Rank next = 0;
        for (int i = 1; i <= m; ++i) {
            next += 1 + (Rank)rng.bounded(20);
            ((mask >> (i - 1)) & 1u ? relabeled.alice : relabeled.bob).push_back(next);
        }
        CHECK(outcome(*table, canon_pos) == outcome(*table, relabeled));
    }
}

TEST_CASE("player symmetry: swapping hands mirrors the outcome") {
    auto table = shared_table();
    for (int m = 1; m <= 10; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::uint32_t full = (1u << m) - 1;
            CHECK(table->alice_wins(m, mask) == table->bob_wins(m, full ^ mask));
        }
}

TEST_CASE("winning moves") {
    auto table = shared_table();
    CHECK(winning_moves(*table, pos_of("2/1"), Player::alice) == std::vector<Rank>{2});

    // enumerate both Alice options against Bob's forced reply: only 1 works
    std::vector<Rank> moves = winning_moves(*table, pos_of("1,2/3"), Player::alice);
    CHECK(moves == std::vector<Rank>{1});

    CHECK_THROWS_AS(winning_moves(*table, pos_of("1,2,4/3,5"), Player::alice), Error);
    try {
        winning_moves(*table, pos_of("1,2,4/3,5"), Player::alice);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_winning);
    }
}

TEST_CASE("winning moves are exactly the always-still-winning cards") {
    auto table = shared_table();
    for (int m = 2; m <= 8; ++m)
        for (std::uint32_t mask = 1; mask < (1u << m) - 1u; ++mask) {
            Position pos = decode_mask(m, mask);
            Outcome result = outcome(*table, pos);
            if (result == Outcome::draw) continue;
            Player winner = result == Outcome::alice_win ? Player::alice : Player::bob;
            std::vector<Rank> moves = winning_moves(*table, pos, winner);
            CHECK_FALSE(moves.empty());
            // brute-force re-derivation through successor + outcome
            for (Rank mine : hand_of(pos, winner)) {
                bool all = true;
                for (Rank theirs : hand_of(pos, opponent(winner))) {
                    Rank a = winner == Player::alice ? mine : theirs;
                    Rank b = winner == Player::alice ? theirs : mine;
                    if (outcome(*table, successor(pos, a, b)) != result) {
                        all = false;
                        break;
                    }
                }
                CHECK(std::binary_search(moves.begin(), moves.end(), mine) == all);
            }
        }
}

TEST_CASE("extracted strategies win and draws refuse extraction") {
    auto table = shared_table();

    auto strat = extract_strategy(table, pos_of("2,3/1"), Player::alice);
    BestResponseReport vs = best_response(pos_of("2,3/1"), *strat, Player::bob);
    CHECK_FALSE(vs.beaten);

    // wins within the total-card round budget against any opponent
    auto extracted = extract_strategy(table, pos_of("1,2/3"), Player::alice);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rnd = random_card_strategy(seed);
        auto mine = extracted->clone();
        Transcript t = play_out(pos_of("1,2/3"), *mine, *rnd, 3);
        CHECK(t.final_winner == Player::alice);
    }

    CHECK_THROWS_AS(extract_strategy(table, pos_of("1,2,4/3,5"), Player::alice), Error);
}

TEST_CASE("best response refutes revealed strategies in non-won positions") {
    // the 5-card draw: every revealed Alice strategy is refutable
    auto lowest = lowest_card_strategy();
    BestResponseReport report = best_response(pos_of("1,2,4/3,5"), *lowest, Player::bob);
    CHECK(report.beaten);
    REQUIRE(report.witness.has_value());
    check_transcript_valid(pos_of("1,2,4/3,5"), *report.witness, Player::bob);

    // 8 > phi * 1: Bob simply wins, so any Alice strategy falls
    report = best_response(pos_of("5/1,2,3,4,6,7,8,9"), *lowest, Player::bob);
    CHECK(report.beaten);
    auto highest = highest_card_strategy();
    report = best_response(pos_of("5/1,2,3,4,6,7,8,9"), *highest, Player::bob);
    CHECK(report.beaten);

    // a revealed strategy that cheats is reported as such
    auto cheat = function_strategy("cheat", [](const Position&, Player) -> Rank { return 999; });
    CHECK_THROWS_AS(best_response(pos_of("1,2/3"), *cheat, Player::bob), Error);
}

TEST_CASE("self-consistency: extracted strategy is unbeatable iff winning") {
    auto table = shared_table();
    for (int m = 2; m <= 8; ++m)
        for (std::uint32_t mask = 1; mask < (1u << m) - 1u; ++mask) {
            Position pos = decode_mask(m, mask);
            if (table->alice_wins(m, mask)) {
                auto strat = extract_strategy(table, pos, Player::alice);
                CHECK_FALSE(best_response(pos, *strat, Player::bob).beaten);
            }
            if (table->bob_wins(m, mask)) {
                auto strat = extract_strategy(table, pos, Player::bob);
                CHECK_FALSE(best_response(pos, *strat, Player::alice).beaten);
            }
        }
}

TEST_CASE("refutability of non-wins, exhaustively to 6 cards") {
    auto table = shared_table();
    for (int m = 1; m <= 6; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            Position pos = decode_mask(m, mask);
            CHECK(bob_refutes_all(pos) == !table->alice_wins(m, mask));
        }
}

TEST_CASE("every literal Alice strategy of a non-won position is beaten") {
    auto table = shared_table();
    for (int m = 2; m <= 4; ++m)
        for (std::uint32_t mask = 1; mask < (1u << m) - 1u; ++mask) {
            Position pos = decode_mask(m, mask);
            std::vector<std::map<std::string, Rank>> strategies;
            enumerate_alice_strategies(pos, {}, strategies);
            bool alice_wins = table->alice_wins(m, mask);
            bool some_survives = false;
            for (const auto& choices : strategies) {
                pptest::MapStrategy strat(choices);
                if (!best_response(pos, strat, Player::bob).beaten) some_survives = true;
            }
            CHECK(some_survives == alice_wins);
        }
}

TEST_CASE("self-consistency holds on sampled positions beyond the exhaustive range") {
    auto table = std::make_shared<SolverTable>(build_table(16));
    SplitMix64 rng{2024};
    int wins_checked = 0, draws_checked = 0;
    auto lowest = lowest_card_strategy();
    while (wins_checked < 25 || draws_checked < 25) {
        int m = 13 + (int)rng.bounded(4);
        std::uint32_t mask = 1 + (std::uint32_t)rng.bounded((1u << m) - 2);
        Position pos = decode_mask(m, mask);
        switch (outcome_mask(*table, m, mask)) {
            case Outcome::alice_win: {
                if (wins_checked >= 25) break;
                ++wins_checked;
                auto strat = extract_strategy(table, pos, Player::alice);
                CHECK_FALSE(best_response(pos, *strat, Player::bob).beaten);
                break;
            }
            case Outcome::draw: {
                if (draws_checked >= 25) break;
                ++draws_checked;
                // in a draw, any revealed pure strategy is refutable
                BestResponseReport report = best_response(pos, *lowest, Player::bob);
                CHECK(report.beaten);
                break;
            }
            default: break;
        }
    }
}

TEST_CASE("bottom-up table agrees with the top-down reference") {
    auto table = shared_table();
    ReferenceSolver ref;
    for (int m = 1; m <= 10; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            CHECK(ref.alice_wins(m, mask) == table->alice_wins(m, mask));
            CHECK(ref.bob_wins(m, mask) == table->bob_wins(m, mask));
        }
}

TEST_CASE("serial and parallel builds are identical") {
    SolverTable serial = build_table(9, 1);
    SolverTable parallel = build_table(9, 2);
    for (int m = 1; m <= 9; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            CHECK(serial.alice_wins(m, mask) == parallel.alice_wins(m, mask));
            CHECK(serial.bob_wins(m, mask) == parallel.bob_wins(m, mask));
        }
}

TEST_CASE("table cache round trip") {
    std::string path = (std::filesystem::temp_directory_path() / "pp_table_test.bin").string();
    SolverTable table = build_table(8);
    save_table(table, path);
    SolverTable loaded = load_table(path);
    CHECK(loaded.m_max() == 8);
    for (int m = 1; m <= 8; ++m)
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            CHECK(loaded.alice_wins(m, mask) == table.alice_wins(m, mask));
            CHECK(loaded.bob_wins(m, mask) == table.bob_wins(m, mask));
        }

    // corrupt header and truncation are rejected
    {
        std::ofstream out(path, std::ios::binary);
        out << "PPTBxxxx";
    }
    CHECK_THROWS_AS(load_table(path), Error);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_table(path), Error);
}

TEST_SUITE_END();
