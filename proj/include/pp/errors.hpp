#pragma once

#include <stdexcept>
#include <string>

namespace pp {

enum class ErrorCode {
    parse_error,
    duplicate_rank,
    overlap,
    card_not_held,
    terminal_position,
    both_empty,
    capacity_exceeded,
    not_winning,
    strategy_error,
    round_limit_exceeded,
    lemma_not_applicable,
    length_mismatch,
    invalid_trials,
    invalid_k,
    invalid_model,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace pp
