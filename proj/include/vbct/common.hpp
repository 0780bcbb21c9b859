#ifndef VBCT_COMMON_HPP
#define VBCT_COMMON_HPP

#include <stdexcept>
#include <string>

namespace vbct {

// Parameter errors: caller passed values outside an operation's documented domain.
struct param_error : std::invalid_argument {
    explicit param_error(const std::string& what) : std::invalid_argument(what) {}
};

// Contract errors: an internal invariant or usage contract was broken
// (dangling label references, mismatched dimensions, state reuse, ...).
struct contract_error : std::logic_error {
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

enum class Party { Alice, Bob };

inline const char* party_name(Party p) { return p == Party::Alice ? "alice" : "bob"; }

} // namespace vbct

#endif
