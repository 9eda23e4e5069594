#include "pp/cards.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "json.hpp"

#include "pp/config.hpp"

namespace pp {

namespace {

void check_hand(const Hand& hand, const char* who) {
    for (std::size_t i = 0; i < hand.size(); ++i) {
        if (hand[i] < 1) fail(ErrorCode::parse_error, std::string(who) + ": ranks must be positive");
        if (i > 0 && hand[i] == hand[i - 1])
            fail(ErrorCode::duplicate_rank, std::string(who) + ": duplicate rank " + std::to_string(hand[i]));
    }
}

} // namespace

Position make_position(Hand alice, Hand bob) {
    std::sort(alice.begin(), alice.end());
    std::sort(bob.begin(), bob.end());
    check_hand(alice, "alice");
    check_hand(bob, "bob");
    for (Rank r : alice)
        if (holds(bob, r))
            fail(ErrorCode::overlap, "hands overlap at rank " + std::to_string(r));
    if ((int)(alice.size() + bob.size()) > config::max_live_cards)
        fail(ErrorCode::capacity_exceeded,
             "more than " + std::to_string(config::max_live_cards) + " live cards");
    return Position{std::move(alice), std::move(bob)};
}

const Hand& hand_of(const Position& pos, Player p) {
    return p == Player::alice ? pos.alice : pos.bob;
}

bool holds(const Hand& hand, Rank card) {
    return std::binary_search(hand.begin(), hand.end(), card);
}

int live_count(const Position& pos) { return (int)(pos.alice.size() + pos.bob.size()); }

std::optional<Player> terminal_winner(const Position& pos) {
    if (pos.alice.empty() && pos.bob.empty())
        fail(ErrorCode::both_empty, "both hands empty: corrupted state");
    if (pos.bob.empty()) return Player::alice;
    if (pos.alice.empty()) return Player::bob;
    return std::nullopt;
}

Position successor(const Position& pos, Rank alice_card, Rank bob_card) {
    if (pos.alice.empty() || pos.bob.empty())
        fail(ErrorCode::terminal_position, "battle in a terminal position");
    if (!holds(pos.alice, alice_card))
        fail(ErrorCode::card_not_held, "alice does not hold " + std::to_string(alice_card));
    if (!holds(pos.bob, bob_card))
        fail(ErrorCode::card_not_held, "bob does not hold " + std::to_string(bob_card));

    Position next = pos;
    auto erase = [](Hand& h, Rank r) { h.erase(std::lower_bound(h.begin(), h.end(), r)); };
    auto insert = [](Hand& h, Rank r) { h.insert(std::lower_bound(h.begin(), h.end(), r), r); };

    if (alice_card > bob_card) {
        erase(next.alice, alice_card); // higher card discarded
        erase(next.bob, bob_card);
        insert(next.alice, bob_card); // winner receives the lower card
    } else {
        erase(next.bob, bob_card);
        erase(next.alice, alice_card);
        insert(next.bob, alice_card);
    }
    return next;
}

bool dominates(const Hand& c, const Hand& c_prime) {
    if (c.size() < c_prime.size()) return false;
    // compare k-th highest cards; hands are stored ascending
    for (std::size_t k = 0; k < c_prime.size(); ++k)
        if (c[c.size() - 1 - k] < c_prime[c_prime.size() - 1 - k]) return false;
    return true;
}

CanonicalPosition canonicalize(const Position& pos) {
    for (Rank r : pos.alice)
        if (holds(pos.bob, r))
            fail(ErrorCode::overlap, "hands overlap at rank " + std::to_string(r));

    CanonicalPosition canon;
    canon.rank_map.reserve(pos.alice.size() + pos.bob.size());
    std::size_t ia = 0, ib = 0;
    while (ia < pos.alice.size() || ib < pos.bob.size()) {
        bool take_alice = ib == pos.bob.size() ||
                          (ia < pos.alice.size() && pos.alice[ia] < pos.bob[ib]);
        if (take_alice) {
            canon.alice_mask |= 1u << canon.rank_map.size();
            canon.rank_map.push_back(pos.alice[ia++]);
        } else {
            canon.rank_map.push_back(pos.bob[ib++]);
        }
    }
    canon.live_count = (int)canon.rank_map.size();
    return canon;
}

Position decode_mask(int m, std::uint32_t alice_mask) {
    Position pos;
    for (int i = 0; i < m; ++i) {
        if ((alice_mask >> i) & 1u)
            pos.alice.push_back(i + 1);
        else
            pos.bob.push_back(i + 1);
    }
    return pos;
}

std::uint32_t successor_mask(std::uint32_t alice_mask, int alice_card, int bob_card) {
    int high = std::max(alice_card, bob_card);
    int low = std::min(alice_card, bob_card);
    std::uint32_t below = alice_mask & ((1u << high) - 1);
    std::uint32_t above = (alice_mask >> (high + 1)) << high;
    std::uint32_t next = below | above;
    if (alice_card > bob_card)
        next |= 1u << low; // Alice wins the battle and receives Bob's card
    else
        next &= ~(1u << low);
    return next;
}

std::string to_text(const Hand& hand) {
    if (hand.empty()) return "-";
    std::ostringstream out;
    for (std::size_t i = 0; i < hand.size(); ++i) {
        if (i) out << ',';
        out << hand[i];
    }
    return out.str();
}

std::string to_text(const Position& pos) { return to_text(pos.alice) + "/" + to_text(pos.bob); }

namespace {

Hand parse_hand(const std::string& text) {
    Hand hand;
    if (text == "-" || text.empty()) return hand;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            fail(ErrorCode::parse_error, "bad rank '" + item + "'");
        }
        if (used != item.size()) fail(ErrorCode::parse_error, "bad rank '" + item + "'");
        hand.push_back(value);
    }
    return hand;
}

Position parse_json_position(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("bad position JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("alice") || !doc.contains("bob"))
        fail(ErrorCode::parse_error, "position JSON needs \"alice\" and \"bob\" arrays");
    Hand alice, bob;
    try {
        alice = doc["alice"].get<Hand>();
        bob = doc["bob"].get<Hand>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("bad position JSON: ") + e.what());
    }
    return make_position(std::move(alice), std::move(bob));
}

} // namespace

Position parse_position(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) fail(ErrorCode::parse_error, "empty position");
    std::size_t end = text.find_last_not_of(" \t\r\n");
    std::string body = text.substr(begin, end - begin + 1);

    if (body.front() == '{') return parse_json_position(body);

    std::size_t slash = body.find('/');
    if (slash == std::string::npos)
        fail(ErrorCode::parse_error, "expected <alice>/<bob>, e.g. 1,2,4/3,5");
    return make_position(parse_hand(body.substr(0, slash)), parse_hand(body.substr(slash + 1)));
}

std::string position_json(const Position& pos) {
    nlohmann::json doc;
    doc["alice"] = pos.alice;
    doc["bob"] = pos.bob;
    return doc.dump();
}

} // namespace pp
