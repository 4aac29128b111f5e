// errors.hpp
// -----------------------------------------------------------------
// Exception types shared by the library. The CLI maps them onto its
// exit codes: parse -> 2, budget/inconclusive -> 3, hypothesis
// violations (unstable map, preperiodic start) -> 4.
// -----------------------------------------------------------------
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "integer.hpp"

namespace polytower {

/// Syntax error in polynomial text; position is a 0-based byte offset.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// A configured step/size budget was exhausted before an exact answer.
class budget_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The map is a single p-cycle modulo the witness prime, so tower
/// limits do not exist and lambda-chains need not terminate.
class unstable_error : public std::runtime_error {
public:
    unstable_error(const std::string& what, Int witness)
        : std::runtime_error(what), witness_(std::move(witness)) {}
    const Int& witness() const { return witness_; }

private:
    Int witness_;
};

/// The start point repeats over the exact integers: the tower sequence
/// is bounded and the divergence hypothesis fails.
class preperiodic_error : public std::runtime_error {
public:
    preperiodic_error(const std::string& what, Int start, std::uint64_t tail,
                      std::uint64_t cycle, Int repeated_value)
        : std::runtime_error(what),
          start_(std::move(start)),
          tail_(tail),
          cycle_(cycle),
          repeated_value_(std::move(repeated_value)) {}
    const Int& start() const { return start_; }
    std::uint64_t tail() const { return tail_; }
    std::uint64_t cycle() const { return cycle_; }
    const Int& repeated_value() const { return repeated_value_; }

private:
    Int start_;
    std::uint64_t tail_;
    std::uint64_t cycle_;
    Int repeated_value_;
};

/// A walk ended without either a repeat or a divergence certificate.
class inconclusive_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polytower
