#pragma once

#include "vbct/analysis.hpp"
#include "vbct/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vbct::scenario {

// One line of the transcript file: enough to spot-check a trial and to compare
// against a re-derived run without replaying the full message record.
struct TrialRecord {
    std::uint64_t digest = 0;
    int w = 0;
    std::string outcome; // zero | one | abort
    std::string reason;  // none, or the abort reason
    long long view = 0;
};

struct ScenarioOutput {
    config::ScenarioConfig cfg;
    std::vector<TrialRecord> trials;
    std::vector<std::string> full_texts; // serialized leading trials, cfg.full_runs of them
    analysis::SecurityReport report;

    std::string transcript_file() const; // self-describing, embeds the canonical config
    std::string report_file() const { return report.serialize(); }
};

// Per-trial derivations shared by running and verifying. Bob's mixed input is
// drawn from a stream salted away from the trial streams.
std::uint64_t trial_seed(std::uint64_t seed, long long index);
int trial_w(const config::ScenarioConfig& cfg, long long index);

// Executes every trial and builds the report. Workers split the trial indices;
// the output is assembled in index order and the tallies merge additively, so
// any parallelism level yields byte-identical files.
ScenarioOutput run_scenario(const config::ScenarioConfig& cfg, int parallelism = 1);

struct VerifyIssue {
    long long trial = -1; // -1 for file-level issues
    std::string what;
};

struct VerifyResult {
    bool ok = false;
    long long trials_checked = 0;
    int full_checked = 0;
    std::vector<VerifyIssue> issues;
};

// Re-derives every trial from the embedded config and compares digests; then
// replays each fully recorded trial, requiring byte-identical serialization
// and a clean schedule check (runs that ended in an abort may carry the
// violations that caused it). Malformed files throw param_error.
VerifyResult verify_transcript_text(const std::string& file_text, int parallelism = 1);

// Ready-to-run configurations compiled into the binary.
std::vector<std::string> fixture_names();
const std::string& fixture_config(const std::string& name); // throws param_error

} // namespace vbct::scenario
