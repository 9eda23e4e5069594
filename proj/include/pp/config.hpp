#pragma once

namespace pp::config {

// Positions the engine will materialize. The tablebase is exponential in the
// live-card count, so this is a deliberate desk-scale ceiling.
#ifndef PP_MAX_LIVE_CARDS
inline constexpr int max_live_cards = 24;
#else
inline constexpr int max_live_cards = PP_MAX_LIVE_CARDS;
#endif

// Tablebase limits. One bit per predicate per ownership mask; level 26 costs
// 2 * 2^26 bits = 16 MiB, which is where we stop.
inline constexpr int table_hard_cap = 26;
inline constexpr int default_m_max = 22;

// Default seed for every randomized workflow. Fixed (not time-based) so that
// runs are reproducible by default.
inline constexpr unsigned long long default_seed = 1729;

} // namespace pp::config
