#include "vbct/scenario.hpp"

#include "vbct/protocols.hpp"
#include "vbct/rng.hpp"
#include "vbct/spacetime.hpp"
#include "vbct/transcript.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vbct::scenario {

namespace {

// Salt separating the mixed-input stream from the per-trial run streams.
constexpr std::uint64_t kInputSalt = 0x9e3779b97f4a7c15ull;

constexpr int kMaxWorkers = 64;

// Runs fn(index, worker) for every index in [0, n) across the worker pool;
// rethrows the first captured exception after all workers join.
template <typename Fn>
void for_indices(long long n, int workers, Fn&& fn) {
    workers = std::clamp<long long>(workers, 1, std::min<long long>(kMaxWorkers, n));
    if (workers <= 1) {
        for (long long i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int worker = 0; worker < workers; ++worker) {
        pool.emplace_back([&, worker] {
            try {
                for (long long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i, worker);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(n);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

TrialRecord make_record(const transcript::Transcript& t) {
    TrialRecord rec;
    rec.digest = t.digest();
    rec.w = t.w;
    rec.outcome = transcript::outcome_name(t.outcome.value);
    rec.reason = transcript::abort_reason_name(t.outcome.reason);
    rec.view = t.alice_view;
    return rec;
}

transcript::Transcript run_trial(const config::ScenarioConfig& cfg, long long index,
                                 bool record_messages) {
    protocols::ProtocolParams p = cfg.params;
    p.record_messages = record_messages;
    return protocols::run_protocol(p, cfg.alice, cfg.bob, trial_w(cfg, index),
                                   trial_seed(cfg.seed, index));
}

} // namespace

std::uint64_t trial_seed(std::uint64_t seed, long long index) {
    return rng::derive_seed(seed, static_cast<std::uint64_t>(index));
}

int trial_w(const config::ScenarioConfig& cfg, long long index) {
    if (cfg.w >= 0) return cfg.w;
    rng::Stream stream(rng::derive_seed(cfg.seed ^ kInputSalt, static_cast<std::uint64_t>(index)));
    return static_cast<int>(stream.uniform_below(2));
}

ScenarioOutput run_scenario(const config::ScenarioConfig& cfg, int parallelism) {
    cfg.validate();
    if (parallelism < 1 || parallelism > kMaxWorkers)
        throw param_error("parallelism must lie in 1..64");

    ScenarioOutput out;
    out.cfg = cfg;
    const long long n = cfg.trials;
    const long long n_full = std::min<long long>(cfg.full_runs, n);
    out.trials.resize(static_cast<std::size_t>(n));
    out.full_texts.resize(static_cast<std::size_t>(n_full));

    std::vector<analysis::SampleTable> tables(static_cast<std::size_t>(
        std::clamp<long long>(parallelism, 1, std::min<long long>(kMaxWorkers, n))));
    for_indices(n, parallelism, [&](long long i, int worker) {
        const bool keep = i < n_full;
        const transcript::Transcript t = run_trial(cfg, i, keep);
        tables[static_cast<std::size_t>(worker)].add(t);
        out.trials[static_cast<std::size_t>(i)] = make_record(t);
        if (keep) out.full_texts[static_cast<std::size_t>(i)] = t.serialize();
    });

    analysis::SampleTable merged;
    for (const auto& t : tables) merged.merge(t);
    out.report = analysis::report_from_table(merged, cfg.params, cfg.alice, cfg.bob, cfg.report);
    return out;
}

std::string ScenarioOutput::transcript_file() const {
    std::string out = "vbct transcripts v1\n";
    out += "begin config\n";
    out += cfg.canonical();
    out += "end config\n";
    out += "trials " + std::to_string(cfg.trials) + "\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const TrialRecord& r = trials[i];
        char line[160];
        std::snprintf(line, sizeof line,
                      "trial %zu w %d outcome %s reason %s view %lld digest %" PRIu64 "\n", i,
                      r.w, r.outcome.c_str(), r.reason.c_str(), r.view, r.digest);
        out += line;
    }
    for (std::size_t k = 0; k < full_texts.size(); ++k) {
        out += "begin full " + std::to_string(k) + "\n";
        out += full_texts[k];
        out += "end full " + std::to_string(k) + "\n";
    }
    out += "end transcripts\n";
    return out;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

} // namespace

VerifyResult verify_transcript_text(const std::string& file_text, int parallelism) {
    const std::vector<std::string> lines = split_lines(file_text);
    std::size_t pos = 0;
    auto next_line = [&]() -> const std::string& {
        static const std::string empty;
        if (pos >= lines.size()) throw param_error("transcript file ends unexpectedly");
        return lines[pos++];
    };

    if (next_line() != "vbct transcripts v1")
        throw param_error("transcript file lacks the expected header");
    if (next_line() != "begin config")
        throw param_error("transcript file lacks an embedded config");
    std::string config_text;
    for (;;) {
        const std::string& line = next_line();
        if (line == "end config") break;
        config_text += line;
        config_text += '\n';
    }
    const config::ScenarioConfig cfg = config::ScenarioConfig::from_text(config_text);

    long long declared = -1;
    if (std::sscanf(next_line().c_str(), "trials %lld", &declared) != 1)
        throw param_error("transcript file lacks a trial count");

    VerifyResult result;
    if (declared != cfg.trials) {
        result.issues.push_back({-1, "trial count disagrees with the embedded config"});
        return result;
    }

    std::vector<TrialRecord> records(static_cast<std::size_t>(declared));
    for (long long i = 0; i < declared; ++i) {
        const std::string& line = next_line();
        long long idx = -1;
        int w = -1;
        char outcome[16] = {0};
        char reason[32] = {0};
        long long view = 0;
        std::uint64_t digest = 0;
        if (std::sscanf(line.c_str(),
                        "trial %lld w %d outcome %15s reason %31s view %lld digest %" SCNu64,
                        &idx, &w, outcome, reason, &view, &digest) != 6 ||
            idx != i)
            throw param_error("transcript file has a malformed trial line at index " +
                              std::to_string(i));
        records[static_cast<std::size_t>(i)] =
            TrialRecord{digest, w, outcome, reason, view};
    }

    std::map<long long, std::string> full_blocks;
    for (;;) {
        const std::string& line = next_line();
        if (line == "end transcripts") break;
        long long k = -1;
        if (std::sscanf(line.c_str(), "begin full %lld", &k) != 1)
            throw param_error("transcript file has an unexpected line: " + line);
        if (full_blocks.count(k))
            throw param_error("transcript file repeats full record " + std::to_string(k));
        std::string body;
        const std::string terminator = "end full " + std::to_string(k);
        for (;;) {
            const std::string& inner = next_line();
            if (inner == terminator) break;
            body += inner;
            body += '\n';
        }
        full_blocks[k] = std::move(body);
    }

    const long long n_full = std::min<long long>(cfg.full_runs, cfg.trials);
    std::mutex issue_mutex;
    std::vector<VerifyIssue> issues;
    auto report_issue = [&](long long trial, std::string what) {
        std::lock_guard<std::mutex> lock(issue_mutex);
        issues.push_back({trial, std::move(what)});
    };

    for_indices(declared, parallelism, [&](long long i, int) {
        transcript::Transcript t;
        try {
            t = run_trial(cfg, i, i < n_full);
        } catch (const std::exception& e) {
            report_issue(i, std::string("replay failed: ") + e.what());
            return;
        }
        const TrialRecord want = records[static_cast<std::size_t>(i)];
        const TrialRecord got = make_record(t);
        if (got.digest != want.digest)
            report_issue(i, "digest differs from the replayed run");
        else if (got.w != want.w || got.outcome != want.outcome || got.reason != want.reason ||
                 got.view != want.view)
            report_issue(i, "summary fields differ from the replayed run");
        if (i < n_full) {
            const auto it = full_blocks.find(i);
            if (it == full_blocks.end()) {
                report_issue(i, "full record is missing");
                return;
            }
            if (t.serialize() != it->second)
                report_issue(i, "full record differs from the replayed run");
            const auto violations = spacetime::verify_schedule(t.messages, t.constraints);
            if (!violations.empty() && !t.outcome.aborted())
                report_issue(i, "completed toss violates its schedule constraints");
        }
    });
    for (const auto& [k, body] : full_blocks)
        if (k < 0 || k >= n_full) report_issue(k, "unexpected full record index");

    std::sort(issues.begin(), issues.end(),
              [](const VerifyIssue& a, const VerifyIssue& b) { return a.trial < b.trial; });
    result.trials_checked = declared;
    result.full_checked = static_cast<int>(full_blocks.size());
    result.issues = std::move(issues);
    result.ok = result.issues.empty();
    return result;
}

namespace {

const std::map<std::string, std::string>& fixtures() {
    static const std::map<std::string, std::string> table = {
        {"vbct1_honest", R"json({
  "protocol": "vbct1",
  "trials": 2000,
  "seed": 411001,
  "w": 0,
  "bias": {"theta": 0.9272952180016122},
  "rounds": {"poisson_mean": 20.0}
})json"},
        {"vbct1_substitution", R"json({
  "protocol": "vbct1",
  "trials": 1500,
  "seed": 411002,
  "w": 0,
  "bias": {"theta": 0.6435011087932844},
  "rounds": {"poisson_mean": 50.0},
  "alice": {"strategy": "alice_vbct1_substitution", "params": {"delta": 0.2, "gamma": 1.0}}
})json"},
        {"vbct2_honest", R"json({
  "protocol": "vbct2",
  "trials": 1500,
  "seed": 412001,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 10, "test_exponent": 4}
})json"},
        {"vbct2_bob_cheat", R"json({
  "protocol": "vbct2",
  "trials": 2000,
  "seed": 412002,
  "bias": {"alpha0_sq": 0.6, "alpha1_sq": 0.4},
  "batch": {"states": 20, "test_exponent": 10},
  "bob": {"strategy": "bob_vbct2_substitution", "params": {"delta": 0.3}}
})json"},
        {"vbct2_z_mismatch", R"json({
  "protocol": "vbct2",
  "trials": 2000,
  "seed": 412003,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 8, "test_exponent": 4},
  "alice": {"strategy": "alice_vbct2_z_mismatch", "params": {"z1": 0, "z2": 1}}
})json"},
        {"vbct3_honest", R"json({
  "protocol": "vbct3",
  "trials": 1000,
  "seed": 413001,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 8, "test_exponent": 4},
  "commitment": {"mask_length": 8}
})json"},
        {"vbct3_z_mismatch", R"json({
  "protocol": "vbct3",
  "trials": 2000,
  "seed": 413002,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 8, "test_exponent": 4},
  "commitment": {"mask_length": 8},
  "alice": {"strategy": "alice_vbct2_z_mismatch", "params": {"z1": 0, "z2": 1}}
})json"},
        {"vbct3_unveil_forge", R"json({
  "protocol": "vbct3",
  "trials": 3000,
  "seed": 413003,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 6, "test_exponent": 2},
  "commitment": {"mask_length": 8},
  "bob": {"strategy": "bob_vbct3_unveil_forge", "params": {"flip_mask": 1}}
})json"},
        {"vbct3_premature_unveil", R"json({
  "protocol": "vbct3",
  "trials": 500,
  "seed": 413004,
  "bias": {"alpha0_sq": 0.9, "alpha1_sq": 0.1},
  "batch": {"states": 6, "test_exponent": 2},
  "commitment": {"mask_length": 8},
  "bob": {"strategy": "bob_vbct3_premature_unveil", "params": {"advance": 0.3}}
})json"},
        {"vbct4_honest", R"json({
  "protocol": "vbct4",
  "trials": 1200,
  "seed": 414001,
  "bias": {"alpha0_sq": 0.75, "alpha1_sq": 0.25},
  "batch": {"states": 100, "test_exponent": 8},
  "commitment": {"mask_length": 8}
})json"},
        {"vbct4_malformed_pair", R"json({
  "protocol": "vbct4",
  "trials": 1600,
  "seed": 414002,
  "bias": {"alpha0_sq": 0.75, "alpha1_sq": 0.25},
  "batch": {"states": 100, "test_exponent": 8},
  "commitment": {"mask_length": 8},
  "bob": {"strategy": "bob_vbct4_malformed_pair"}
})json"},
        {"dieroll_biased", R"json({
  "protocol": "dieroll",
  "trials": 1500,
  "seed": 415001,
  "die": {"faces": 3, "dice": [[0.3333333333333333, 0.3333333333333334, 0.3333333333333333], [0.5, 0.3, 0.2]], "choice": 1},
  "batch": {"states": 8, "test_exponent": 3}
})json"},
    };
    return table;
}

} // namespace

std::vector<std::string> fixture_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : fixtures()) names.push_back(name);
    return names;
}

const std::string& fixture_config(const std::string& name) {
    const auto it = fixtures().find(name);
    if (it == fixtures().end()) {
        std::string msg = "unknown fixture '" + name + "'; available:";
        for (const auto& n : fixture_names()) msg += " " + n;
        throw param_error(msg);
    }
    return it->second;
}

} // namespace vbct::scenario
