#pragma once

#include "vbct/common.hpp"
#include "vbct/protocols.hpp"
#include "vbct/transcript.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace vbct::analysis {

// Two-sided Wilson score interval. The default z is the two-sided 99% normal
// quantile, so honest-run checks are wrong roughly once per hundred reruns.
inline constexpr double kZ99 = 2.5758293035489004;

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
    bool contains(double p) const { return lower <= p && p <= upper; }
};

Interval wilson_interval(long long successes, long long trials, double z = kZ99);

struct BiasEstimate {
    long long trials = 0;
    long long zeros = 0;
    long long ones = 0;
    long long aborts = 0;
    double p0_hat = 0.0;
    double p1_hat = 0.0;
    double abort_rate = 0.0; // 1 - p0_hat - p1_hat, so the three sum to one exactly
    Interval p0_ci;
    Interval p1_ci;
};

// Outcome tallies with confidence intervals over a set of runs. Empty input is
// a parameter error; runs from mixed protocols are rejected.
BiasEstimate estimate_bias(const std::vector<transcript::Transcript>& runs);

// View channels with more distinct tokens than this are rejected: the plug-in
// information estimate is meaningless once cells outnumber samples.
inline constexpr int kMaxLeakageViews = 4096;

using ViewExtractor = std::function<long long(const transcript::Transcript&)>;

// The default observable view is the token the protocol engines expose.
long long default_view(const transcript::Transcript& t);

// Excess information the recorded views carry about Bob's input beyond what
// the coin outcome itself reveals: jackknife-corrected plug-in estimate of
// I(W; view) - I(W; outcome) in bits, clipped below at zero.
double estimate_leakage(const std::vector<transcript::Transcript>& runs,
                        const ViewExtractor& view = default_view);

struct CurvePoint {
    int n_states = 0;
    double sigma_distance = 0.0; // distinguishability of the unselected remainders
    double full_success = 0.0;   // optimal guess success on the full ensembles
};

struct DistinguishabilityCurve {
    std::vector<CurvePoint> points;
    double limit = 0.0; // large-batch ceiling: optimal success on one pair state alone
};

// Exact distinguishability of the two batch ensembles as the batch size grows,
// for a 2-state batch with outcome-0 weights alpha0_sq and alpha1_sq.
DistinguishabilityCurve exact_distinguishability_curve(int n_min, int n_max,
                                                       double alpha0_sq,
                                                       double alpha1_sq);

// Probability that a per-round substitution cheat survives every identity
// check, averaged over the Poisson-distributed round count: each tampered
// round passes with probability at most 1 - delta^2 and a fraction gamma of
// the n rounds is tampered. The Poisson tail is truncated at mass 1 - 1e-12.
double detection_bound_vbct1(double delta, double gamma, double poisson_mean);

// Undetected-substitution ceiling for batched audits: every audited batch
// fails with probability at least delta_prime * delta^2, and the number of
// audited batches before the toss is geometric with rate 2^-test_exponent.
double detection_bound_vbct2(double delta, double delta_prime, int test_exponent);

struct BoundComparison {
    std::string name;
    double bound = 0.0;     // analytic value
    double empirical = 0.0; // measured counterpart
    bool upper = true;      // true: empirical must not exceed the bound
    double slack = 0.0;     // statistical allowance applied when judging
    bool satisfied = false;
};

struct ReportOptions {
    int bootstrap_resamples = 200;
    double leakage_allowance = 0.02; // bits; the estimator noise floor
};

// Joint outcome statistics in mergeable form. All fields are additive, so
// merging tables from disjoint trial chunks in any order or grouping yields
// the same table, and hence the same report.
struct SampleTable {
    std::string protocol;
    std::string alice_strategy;
    std::string bob_strategy;
    long long trials = 0;
    long long detections = 0;
    long long cheat_tested = 0;
    long long cheat_passed = 0;
    long long tested = 0;
    long long passed = 0;
    std::map<std::string, long long> abort_reasons;
    // (w, view token, outcome token 0|1|2) -> count
    std::map<std::tuple<int, long long, int>, long long> cells;

    void add(const transcript::Transcript& t, const ViewExtractor& view = default_view);
    void merge(const SampleTable& other);
};

struct SecurityReport {
    std::string protocol;
    protocols::ProtocolParams params;
    protocols::Strategy alice;
    protocols::Strategy bob;
    long long trials = 0;
    long long zeros = 0;
    long long ones = 0;
    long long aborts = 0;
    std::map<std::string, long long> abort_reasons;
    double p0_hat = 0.0;
    double p1_hat = 0.0;
    double abort_rate = 0.0;
    Interval p0_ci;
    Interval p1_ci;
    double detection_rate = 0.0;
    double leakage_bits = 0.0;
    double epsilon_hat = 0.0;    // three binomial standard errors on p0_hat
    double zeta_hat = 0.0;       // bootstrap frequency of leakage above the allowance
    double delta_bits_hat = 0.0; // the leakage estimate itself
    std::vector<BoundComparison> bounds;
    bool all_satisfied = true;

    std::string serialize() const;
};

// Builds the report from a merged table. Deterministic: the same table, the
// same configuration, and the same options give a byte-identical serialization.
SecurityReport report_from_table(const SampleTable& table, const protocols::ProtocolParams& params,
                                 const protocols::Strategy& alice, const protocols::Strategy& bob,
                                 const ReportOptions& opts = {});

// Convenience wrapper: tabulates the runs and builds the report.
SecurityReport build_report(const std::vector<transcript::Transcript>& runs,
                            const protocols::ProtocolParams& params, const protocols::Strategy& alice,
                            const protocols::Strategy& bob, const ReportOptions& opts = {});

} // namespace vbct::analysis
