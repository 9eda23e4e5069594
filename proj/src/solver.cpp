#include "pp/solver.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pp/errors.hpp"

namespace pp {

namespace {

constexpr std::uint32_t full_mask(int m) { return m >= 32 ? ~0u : (1u << m) - 1; }

constexpr std::size_t words_for(int m) { return (((std::size_t)1 << m) + 63) / 64; }

// WA at a nonterminal mask: some Alice card works against every Bob reply.
inline bool exists_forall(std::uint32_t mover_bits, std::uint32_t other_bits,
                          std::uint32_t alice_mask, bool mover_is_alice,
                          const std::vector<std::uint64_t>& prev_win) {
    for (std::uint32_t mb = mover_bits; mb; mb &= mb - 1) {
        int mover_card = std::countr_zero(mb);
        bool all = true;
        for (std::uint32_t ob = other_bits; ob; ob &= ob - 1) {
            int other_card = std::countr_zero(ob);
            int a = mover_is_alice ? mover_card : other_card;
            int b = mover_is_alice ? other_card : mover_card;
            std::uint32_t child = successor_mask(alice_mask, a, b);
            if (!((prev_win[child >> 6] >> (child & 63)) & 1u)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

} // namespace

std::size_t SolverTable::byte_size() const {
    std::size_t bytes = 0;
    for (const auto& level : wa_) bytes += level.size() * sizeof(std::uint64_t);
    for (const auto& level : wb_) bytes += level.size() * sizeof(std::uint64_t);
    return bytes;
}

SolverTable build_table(int m_max, int workers) {
    if (m_max < 1 || m_max > config::table_hard_cap)
        fail(ErrorCode::capacity_exceeded,
             "m_max " + std::to_string(m_max) + " outside 1.." +
                 std::to_string(config::table_hard_cap));

    SolverTable table;
    table.m_max_ = m_max;
    table.wa_.resize(m_max + 1);
    table.wb_.resize(m_max + 1);

#ifdef _OPENMP
    if (workers <= 0) workers = omp_get_max_threads();
#else
    workers = 1;
#endif

    for (int m = 1; m <= m_max; ++m) {
        const std::uint32_t full = full_mask(m);
        std::vector<std::uint64_t> wa(words_for(m), 0), wb(words_for(m), 0);
        // level 1 is all-terminal, so the (empty) level-0 vectors are never read
        const std::vector<std::uint64_t>& prev_wa = table.wa_[m - 1];
        const std::vector<std::uint64_t>& prev_wb = table.wb_[m - 1];

        const std::int64_t word_count = (std::int64_t)(((std::uint64_t)full + 1 + 63) / 64);
        auto fill_word = [&](std::int64_t w) {
            std::uint64_t wa_word = 0, wb_word = 0;
            std::uint32_t base = (std::uint32_t)(w << 6);
            int lanes = (int)std::min<std::uint64_t>(64, (std::uint64_t)full + 1 - base);
            for (int lane = 0; lane < lanes; ++lane) {
                std::uint32_t mask = base + lane;
                bool wins_a, wins_b;
                if (mask == full) { // Bob out of cards
                    wins_a = true;
                    wins_b = false;
                } else if (mask == 0) {
                    wins_a = false;
                    wins_b = true;
                } else {
                    wins_a = exists_forall(mask, full ^ mask, mask, true, prev_wa);
                    wins_b = exists_forall(full ^ mask, mask, mask, false, prev_wb);
                }
                wa_word |= (std::uint64_t)wins_a << lane;
                wb_word |= (std::uint64_t)wins_b << lane;
            }
            wa[w] = wa_word;
            wb[w] = wb_word;
        };

        if (workers > 1 && word_count > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
#endif
            for (std::int64_t w = 0; w < word_count; ++w) fill_word(w);
        } else {
            for (std::int64_t w = 0; w < word_count; ++w) fill_word(w);
        }

        table.wa_[m] = std::move(wa);
        table.wb_[m] = std::move(wb);
    }
    return table;
}

Outcome outcome_mask(const SolverTable& table, int m, std::uint32_t alice_mask) {
    if (m < 1) fail(ErrorCode::both_empty, "no live cards");
    if (m > table.m_max())
        fail(ErrorCode::capacity_exceeded,
             std::to_string(m) + " live cards exceed table m_max " + std::to_string(table.m_max()));
    bool wa = table.alice_wins(m, alice_mask);
    bool wb = table.bob_wins(m, alice_mask);
    if (wa) return Outcome::alice_win;
    if (wb) return Outcome::bob_win;
    return Outcome::draw;
}

Outcome outcome(const SolverTable& table, const Position& pos) {
    if (auto winner = terminal_winner(pos))
        return *winner == Player::alice ? Outcome::alice_win : Outcome::bob_win;
    CanonicalPosition canon = canonicalize(pos);
    return outcome_mask(table, canon.live_count, canon.alice_mask);
}

std::vector<Rank> winning_moves(const SolverTable& table, const Position& pos, Player player) {
    Outcome want = player == Player::alice ? Outcome::alice_win : Outcome::bob_win;
    if (outcome(table, pos) != want)
        fail(ErrorCode::not_winning, std::string(player_name(player)) + " has no winning strategy at " +
                                         to_text(pos));
    if (terminal_winner(pos))
        fail(ErrorCode::terminal_position, "terminal position has no moves");

    CanonicalPosition canon = canonicalize(pos);
    int m = canon.live_count;
    std::uint32_t mine = player == Player::alice ? canon.alice_mask
                                                 : full_mask(m) ^ canon.alice_mask;
    std::uint32_t theirs = full_mask(m) ^ mine;

    std::vector<Rank> moves;
    for (std::uint32_t mb = mine; mb; mb &= mb - 1) {
        int card = std::countr_zero(mb);
        bool all = true;
        for (std::uint32_t ob = theirs; ob; ob &= ob - 1) {
            int reply = std::countr_zero(ob);
            int a = player == Player::alice ? card : reply;
            int b = player == Player::alice ? reply : card;
            std::uint32_t child = successor_mask(canon.alice_mask, a, b);
            bool child_win = player == Player::alice ? table.alice_wins(m - 1, child)
                                                     : table.bob_wins(m - 1, child);
            if (!child_win) {
                all = false;
                break;
            }
        }
        if (all) moves.push_back(canon.rank_map[card]);
    }
    return moves;
}

namespace {

// Lowest winning move wherever the table says the mover wins; lowest held
// card elsewhere (correct play never gets there, but the policy stays total).
class TablePolicy final : public Strategy {
public:
    TablePolicy(std::shared_ptr<const SolverTable> table, std::string name)
        : table_(std::move(table)), name_(std::move(name)) {}

    Rank pick(const Position& pos, Player self) override {
        const Hand& hand = hand_of(pos, self);
        Outcome want = self == Player::alice ? Outcome::alice_win : Outcome::bob_win;
        if (outcome(*table_, pos) == want) return winning_moves(*table_, pos, self).front();
        return hand.front();
    }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<TablePolicy>(*this); }
    std::string name() const override { return name_; }

private:
    std::shared_ptr<const SolverTable> table_;
    std::string name_;
};

} // namespace

std::unique_ptr<Strategy> extract_strategy(std::shared_ptr<const SolverTable> table,
                                           const Position& pos, Player player) {
    Outcome want = player == Player::alice ? Outcome::alice_win : Outcome::bob_win;
    if (outcome(*table, pos) != want)
        fail(ErrorCode::not_winning, std::string(player_name(player)) +
                                         " has no winning strategy at " + to_text(pos));
    return std::make_unique<TablePolicy>(std::move(table),
                                         std::string("solver-extracted(") + player_name(player) + ")");
}

std::unique_ptr<Strategy> solver_strategy(std::shared_ptr<const SolverTable> table) {
    return std::make_unique<TablePolicy>(std::move(table), "solver");
}

namespace {

// Best-response search state: positions are masks over the root's live ranks
// (bit i = root_ranks[i] still live / held by Alice), plus the revealed
// strategy's exact state key. Live count drops every battle, so the graph is
// a DAG and plain memoization is enough.
struct BrKey {
    std::uint32_t live;
    std::uint32_t alice;
    std::uint64_t skey;

    bool operator==(const BrKey&) const = default;
};

struct BrKeyHash {
    std::size_t operator()(const BrKey& k) const {
        std::uint64_t h = ((std::uint64_t)k.live << 32) | k.alice;
        h ^= k.skey + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ull;
        return (std::size_t)(h ^ (h >> 29));
    }
};

class BestResponseSearch {
public:
    BestResponseSearch(const Position& root, Player defender)
        : defender_(defender), revealed_player_(opponent(defender)) {
        ranks_ = root.alice;
        ranks_.insert(ranks_.end(), root.bob.begin(), root.bob.end());
        std::sort(ranks_.begin(), ranks_.end());
        root_live_ = full_mask((int)ranks_.size());
        root_alice_ = 0;
        for (Rank r : root.alice) root_alice_ |= 1u << index_of(r);
    }

    bool defender_wins(const Strategy& revealed) {
        return wins(root_live_, root_alice_, revealed);
    }

    Transcript witness(const Strategy& revealed) {
        Transcript t;
        std::uint32_t live = root_live_, alice = root_alice_;
        std::unique_ptr<Strategy> strat = revealed.clone();
        while (true) {
            Position pos = decode(live, alice);
            if (auto winner = terminal_winner(pos)) {
                t.final_winner = *winner;
                return t;
            }
            Rank pinned = strat->pick(pos, revealed_player_);
            int pinned_idx = checked_index(pos, pinned);
            std::uint32_t dbits = defender_bits(live, alice);
            for (std::uint32_t db = dbits;; db &= db - 1) {
                // wins(live, alice, ...) was true, so some reply must win
                int reply = std::countr_zero(db);
                auto [nlive, nalice] = apply(live, alice, pinned_idx, reply);
                if (wins(nlive, nalice, *strat)) {
                    int a = revealed_player_ == Player::alice ? pinned_idx : reply;
                    int b = revealed_player_ == Player::alice ? reply : pinned_idx;
                    t.battles.push_back({ranks_[a], ranks_[b],
                                         ranks_[a] > ranks_[b] ? Player::alice : Player::bob});
                    live = nlive;
                    alice = nalice;
                    break;
                }
            }
        }
    }

private:
    static constexpr std::uint32_t full_mask(int m) { return m >= 32 ? ~0u : (1u << m) - 1; }

    int index_of(Rank r) const {
        return (int)(std::lower_bound(ranks_.begin(), ranks_.end(), r) - ranks_.begin());
    }

    Position decode(std::uint32_t live, std::uint32_t alice) const {
        Position pos;
        for (std::uint32_t b = live; b; b &= b - 1) {
            int i = std::countr_zero(b);
            if ((alice >> i) & 1u)
                pos.alice.push_back(ranks_[i]);
            else
                pos.bob.push_back(ranks_[i]);
        }
        return pos;
    }

    std::uint32_t defender_bits(std::uint32_t live, std::uint32_t alice) const {
        return defender_ == Player::alice ? alice : live & ~alice;
    }

    int checked_index(const Position& pos, Rank pinned) const {
        if (!holds(hand_of(pos, revealed_player_), pinned))
            fail(ErrorCode::strategy_error,
                 "revealed strategy returned unheld card " + std::to_string(pinned));
        return index_of(pinned);
    }

    std::pair<std::uint32_t, std::uint32_t> apply(std::uint32_t live, std::uint32_t alice,
                                                  int revealed_card, int defender_card) const {
        int a = revealed_player_ == Player::alice ? revealed_card : defender_card;
        int b = revealed_player_ == Player::alice ? defender_card : revealed_card;
        int high = std::max(a, b);
        int low = std::min(a, b);
        std::uint32_t nlive = live & ~(1u << high);
        std::uint32_t nalice = alice;
        if (a > b)
            nalice = (nalice & ~(1u << high)) | (1u << low);
        else
            nalice &= ~(1u << low);
        return {nlive, nalice & nlive};
    }

    bool wins(std::uint32_t live, std::uint32_t alice, const Strategy& revealed) {
        std::uint32_t revealed_bits = revealed_player_ == Player::alice ? alice : live & ~alice;
        std::uint32_t dbits = defender_bits(live, alice);
        if (revealed_bits == 0) return true; // revealed player ran out
        if (dbits == 0) return false;

        BrKey key{live, alice, revealed.state_key()};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        Position pos = decode(live, alice);
        std::unique_ptr<Strategy> strat = revealed.clone();
        Rank pinned = strat->pick(pos, revealed_player_);
        int pinned_idx = checked_index(pos, pinned);

        bool won = false;
        for (std::uint32_t db = dbits; db && !won; db &= db - 1) {
            auto [nlive, nalice] = apply(live, alice, pinned_idx, std::countr_zero(db));
            won = wins(nlive, nalice, *strat);
        }
        memo_.emplace(key, won);
        return won;
    }

    Player defender_;
    Player revealed_player_;
    std::vector<Rank> ranks_;
    std::uint32_t root_live_ = 0;
    std::uint32_t root_alice_ = 0;
    std::unordered_map<BrKey, bool, BrKeyHash> memo_;
};

} // namespace

BestResponseReport best_response(const Position& pos, const Strategy& revealed, Player defender) {
    if (live_count(pos) > config::max_live_cards)
        fail(ErrorCode::capacity_exceeded, "position too large for best-response search");

    BestResponseSearch search(pos, defender);
    BestResponseReport report;
    report.beaten = search.defender_wins(revealed);
    if (report.beaten) report.witness = search.witness(revealed);
    return report;
}

namespace {

constexpr char table_magic[4] = {'P', 'P', 'T', 'B'};
constexpr std::uint32_t table_version = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v & 0xff), (unsigned char)((v >> 8) & 0xff),
                          (unsigned char)((v >> 16) & 0xff), (unsigned char)((v >> 24) & 0xff)};
    out.write((const char*)b, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read((char*)b, 4);
    return (std::uint32_t)b[0] | ((std::uint32_t)b[1] << 8) | ((std::uint32_t)b[2] << 16) |
           ((std::uint32_t)b[3] << 24);
}

void put_words(std::ostream& out, const std::vector<std::uint64_t>& words) {
    for (std::uint64_t w : words) {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((w >> (8 * i)) & 0xff);
        out.write((const char*)b, 8);
    }
}

void get_words(std::istream& in, std::vector<std::uint64_t>& words) {
    for (std::uint64_t& w : words) {
        unsigned char b[8];
        in.read((char*)b, 8);
        w = 0;
        for (int i = 0; i < 8; ++i) w |= (std::uint64_t)b[i] << (8 * i);
    }
}

} // namespace

void save_table(const SolverTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::parse_error, "cannot write table cache " + path);
    out.write(table_magic, 4);
    put_u32(out, table_version);
    put_u32(out, (std::uint32_t)table.m_max());
    for (int m = 1; m <= table.m_max(); ++m) {
        put_words(out, table.wa_[m]);
        put_words(out, table.wb_[m]);
    }
    if (!out) fail(ErrorCode::parse_error, "short write to table cache " + path);
}

SolverTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::parse_error, "cannot read table cache " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, table_magic, 4) != 0)
        fail(ErrorCode::parse_error, path + " is not a PPTB table cache");
    std::uint32_t version = get_u32(in);
    if (version != table_version)
        fail(ErrorCode::parse_error, "unsupported table cache version " + std::to_string(version));
    std::uint32_t m_max = get_u32(in);
    if (m_max < 1 || m_max > (std::uint32_t)config::table_hard_cap)
        fail(ErrorCode::parse_error, "table cache m_max out of range");

    SolverTable table;
    table.m_max_ = (int)m_max;
    table.wa_.resize(m_max + 1);
    table.wb_.resize(m_max + 1);
    for (int m = 1; m <= (int)m_max; ++m) {
        table.wa_[m].resize(words_for(m));
        table.wb_[m].resize(words_for(m));
        get_words(in, table.wa_[m]);
        get_words(in, table.wb_[m]);
    }
    if (!in) fail(ErrorCode::parse_error, path + " is truncated");
    in.peek();
    if (!in.eof()) fail(ErrorCode::parse_error, path + " has trailing bytes");
    return table;
}

} // namespace pp
