#pragma once

#include <stdexcept>
#include <string>

namespace lehmer {

// Caller passed something outside an operation's contract (maps to CLI exit 2).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ord_p(0) requested.
struct infinite_valuation : invalid_input {
    infinite_valuation() : invalid_input("p-adic valuation of zero is infinite") {}
};

// Level requested beyond the supported unramified tower (composite levels > 3).
struct unsupported_level : invalid_input {
    using invalid_input::invalid_input;
};

// Certified root refinement ran out of precision budget (maps to CLI exit 3).
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant failed; signals an arithmetic bug, not bad input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// A root disk straddles a sector boundary ray; carries a perturbation hint.
struct boundary_ambiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lehmer
