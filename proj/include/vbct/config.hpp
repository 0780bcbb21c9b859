#pragma once

#include "vbct/analysis.hpp"
#include "vbct/protocols.hpp"

#include <cstdint>
#include <string>

namespace vbct::config {

// A complete, runnable scenario: protocol parameters, both strategies, Bob's
// input policy, and the statistics settings. The text form is a JSON object;
// unknown keys anywhere are rejected, and sections that do not apply to the
// chosen protocol are rejected rather than ignored.
struct ScenarioConfig {
    protocols::ProtocolParams params;
    protocols::Strategy alice{Party::Alice, "vbct1", "honest", {}};
    protocols::Strategy bob{Party::Bob, "vbct1", "honest", {}};
    long long trials = 1000;
    std::uint64_t seed = 1;
    int w = -1;        // Bob's input: 0, 1, or -1 for an even per-trial mix
    int full_runs = 3; // leading trials whose full message record is kept
    analysis::ReportOptions report;

    // Cross-field checks; throws param_error naming the offending field.
    void validate() const;

    // Sorted-key JSON with every applicable field materialized, defaults
    // included; from_text(canonical()) reproduces it byte for byte.
    std::string canonical() const;

    static ScenarioConfig from_text(const std::string& text);
};

} // namespace vbct::config
