#include "vbct/analysis.hpp"

#include "vbct/qstate.hpp"
#include "vbct/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vbct::analysis {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Joint counts in index-compressed form so leave-one-out passes are O(cells).
struct Channel {
    long long total = 0;
    std::vector<int> cell_row;
    std::vector<int> cell_col;
    std::vector<long long> cell_count;
    std::vector<long long> row_sum;
    std::vector<long long> col_sum;
};

Channel make_channel(const std::map<std::pair<int, long long>, long long>& counts) {
    Channel ch;
    std::map<int, int> rows;
    std::map<long long, int> cols;
    for (const auto& [key, c] : counts) {
        if (c <= 0) continue;
        rows.emplace(key.first, static_cast<int>(rows.size()));
        cols.emplace(key.second, static_cast<int>(cols.size()));
    }
    ch.row_sum.assign(rows.size(), 0);
    ch.col_sum.assign(cols.size(), 0);
    for (const auto& [key, c] : counts) {
        if (c <= 0) continue;
        const int r = rows.at(key.first);
        const int v = cols.at(key.second);
        ch.cell_row.push_back(r);
        ch.cell_col.push_back(v);
        ch.cell_count.push_back(c);
        ch.row_sum[r] += c;
        ch.col_sum[v] += c;
        ch.total += c;
    }
    return ch;
}

// Plug-in mutual information in bits, optionally with one observation removed
// from cell `removed`; the marginals shift with it.
double plug_in_bits(const Channel& ch, int removed) {
    const double n = static_cast<double>(ch.total - (removed >= 0 ? 1 : 0));
    if (n < 1.0) return 0.0;
    double bits = 0.0;
    for (std::size_t j = 0; j < ch.cell_count.size(); ++j) {
        long long c = ch.cell_count[j];
        long long r = ch.row_sum[ch.cell_row[j]];
        long long v = ch.col_sum[ch.cell_col[j]];
        if (removed >= 0) {
            const auto k = static_cast<std::size_t>(removed);
            if (j == k) --c;
            if (ch.cell_row[j] == ch.cell_row[k]) --r;
            if (ch.cell_col[j] == ch.cell_col[k]) --v;
        }
        if (c <= 0) continue;
        const double cd = static_cast<double>(c);
        bits += cd / n * std::log2(cd * n / (static_cast<double>(r) * static_cast<double>(v)));
    }
    return bits;
}

// Jackknife-corrected plug-in estimate: n * full - (n - 1) * mean(leave-one-out).
double jackknife_bits(const Channel& ch) {
    const double full = plug_in_bits(ch, -1);
    if (ch.total < 2) return full;
    double acc = 0.0;
    for (std::size_t j = 0; j < ch.cell_count.size(); ++j)
        acc += static_cast<double>(ch.cell_count[j]) * plug_in_bits(ch, static_cast<int>(j));
    const double n = static_cast<double>(ch.total);
    return n * full - (n - 1.0) * (acc / n);
}

int outcome_token(const transcript::Outcome& o) {
    if (o.aborted()) return 2;
    return o.value == transcript::OutcomeValue::One ? 1 : 0;
}

double leakage_from_counts(const std::map<std::pair<int, long long>, long long>& view_counts,
                           const std::map<std::pair<int, long long>, long long>& out_counts) {
    const double bits =
        jackknife_bits(make_channel(view_counts)) - jackknife_bits(make_channel(out_counts));
    return std::max(0.0, bits);
}

double ratio(long long num, long long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double binomial_slack(double p, long long trials) {
    const double q = std::clamp(p, 0.0, 1.0);
    return 3.0 * std::sqrt(q * (1.0 - q) / static_cast<double>(std::max<long long>(trials, 1)));
}

} // namespace

Interval wilson_interval(long long successes, long long trials, double z) {
    if (trials <= 0) throw param_error("wilson interval needs a positive trial count");
    if (successes < 0 || successes > trials)
        throw param_error("wilson interval successes must lie in [0, trials]");
    if (!(z > 0.0) || !std::isfinite(z)) throw param_error("wilson interval z must be positive");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    // clamp so the interval always contains the point estimate, even when the
    // boundary cancellation at p = 0 or p = 1 leaves a stray ulp
    return {std::min(std::max(0.0, center - half), p), std::max(std::min(1.0, center + half), p)};
}

BiasEstimate estimate_bias(const std::vector<transcript::Transcript>& runs) {
    if (runs.empty()) throw param_error("bias estimate needs at least one run");
    BiasEstimate e;
    e.trials = static_cast<long long>(runs.size());
    for (const auto& t : runs) {
        if (t.protocol != runs.front().protocol)
            throw param_error("bias estimate rejects runs from different protocols");
        switch (outcome_token(t.outcome)) {
            case 0: ++e.zeros; break;
            case 1: ++e.ones; break;
            default: ++e.aborts; break;
        }
    }
    e.p0_hat = ratio(e.zeros, e.trials);
    e.p1_hat = ratio(e.ones, e.trials);
    e.abort_rate = 1.0 - (e.p0_hat + e.p1_hat);
    e.p0_ci = wilson_interval(e.zeros, e.trials);
    e.p1_ci = wilson_interval(e.ones, e.trials);
    return e;
}

long long default_view(const transcript::Transcript& t) { return t.alice_view; }

double estimate_leakage(const std::vector<transcript::Transcript>& runs,
                        const ViewExtractor& view) {
    if (runs.empty()) throw param_error("leakage estimate needs at least one run");
    if (!view) throw param_error("leakage estimate needs a view extractor");
    std::map<std::pair<int, long long>, long long> view_counts;
    std::map<std::pair<int, long long>, long long> out_counts;
    std::set<long long> distinct;
    for (const auto& t : runs) {
        const long long v = view(t);
        distinct.insert(v);
        if (distinct.size() > static_cast<std::size_t>(kMaxLeakageViews))
            throw contract_error("view channel exceeds " + std::to_string(kMaxLeakageViews) +
                                 " distinct tokens; information estimates need bounded views");
        ++view_counts[{t.w, v}];
        ++out_counts[{t.w, outcome_token(t.outcome)}];
    }
    return leakage_from_counts(view_counts, out_counts);
}

DistinguishabilityCurve exact_distinguishability_curve(int n_min, int n_max, double alpha0_sq,
                                                       double alpha1_sq) {
    if (n_min < 2) throw param_error("distinguishability curve starts at two states");
    if (n_max < n_min) throw param_error("distinguishability curve range is empty");
    if (!(alpha0_sq > 0.0 && alpha0_sq < 1.0) || !(alpha1_sq > 0.0 && alpha1_sq < 1.0))
        throw param_error("distinguishability curve needs outcome-0 weights inside (0, 1)");
    DistinguishabilityCurve curve;
    curve.points.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        CurvePoint pt;
        pt.n_states = n;
        pt.sigma_distance = qstate::trace_distance(
            qstate::sigma_mixtures(n, alpha0_sq, alpha1_sq, 0),
            qstate::sigma_mixtures(n, alpha0_sq, alpha1_sq, 1));
        pt.full_success =
            0.5 * (1.0 + qstate::full_state_trace_distance(n, alpha0_sq, alpha1_sq));
        curve.points.push_back(pt);
    }
    const auto rho0 = qstate::DensityMatrix::from_pure(qstate::make_pair_state(alpha0_sq));
    const auto rho1 = qstate::DensityMatrix::from_pure(qstate::make_pair_state(alpha1_sq));
    curve.limit = 0.5 * (1.0 + qstate::trace_distance(rho0, rho1));
    return curve;
}

double detection_bound_vbct1(double delta, double gamma, double poisson_mean) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw param_error("detection bound needs delta in [0, 1]");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw param_error("detection bound needs gamma in (0, 1]");
    if (!(poisson_mean > 0.0 && poisson_mean <= 500.0))
        throw param_error("detection bound needs a mean round count in (0, 500]");
    const long double lam = poisson_mean;
    const long double keep = 1.0L - static_cast<long double>(delta) * delta;
    long double pmf = std::exp(-lam); // mass at n = 0
    long double cum = 0.0L;
    long double total = 0.0L;
    const long double target = 1.0L - 1e-12L;
    for (int n = 0; cum < target && n <= 100000; ++n) {
        if (n > 0) pmf *= lam / n;
        cum += pmf;
        total += pmf * gamma * std::pow(keep, static_cast<long double>(gamma) * n);
    }
    return static_cast<double>(total);
}

double detection_bound_vbct2(double delta, double delta_prime, int test_exponent) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw param_error("detection bound needs delta in [0, 1]");
    if (!(delta_prime > 0.0 && delta_prime <= 1.0))
        throw param_error("detection bound needs delta_prime in (0, 1]");
    if (test_exponent < 1 || test_exponent > 24)
        throw param_error("detection bound needs a test exponent in 1..24");
    const double q = std::ldexp(1.0, -test_exponent);
    const double fail = delta_prime * delta * delta; // per audited batch, at least this
    return q / (1.0 - (1.0 - q) * (1.0 - fail));
}

void SampleTable::add(const transcript::Transcript& t, const ViewExtractor& view) {
    if (!view) throw param_error("tabulation needs a view extractor");
    if (trials == 0) {
        protocol = t.protocol;
        alice_strategy = t.alice_strategy;
        bob_strategy = t.bob_strategy;
    } else {
        if (protocol != t.protocol)
            throw param_error("cannot tabulate runs from different protocols");
        if (alice_strategy != t.alice_strategy || bob_strategy != t.bob_strategy)
            throw param_error("cannot tabulate runs from different strategy pairs");
    }
    ++trials;
    if (t.detection) ++detections;
    cheat_tested += t.cheat_tested;
    cheat_passed += t.cheat_passed;
    tested += t.tested;
    passed += t.passed;
    if (t.outcome.aborted()) ++abort_reasons[transcript::abort_reason_name(t.outcome.reason)];
    ++cells[{t.w, view(t), outcome_token(t.outcome)}];
}

void SampleTable::merge(const SampleTable& other) {
    if (other.trials == 0) return;
    if (trials == 0) {
        *this = other;
        return;
    }
    if (protocol != other.protocol)
        throw param_error("cannot merge tables from different protocols");
    if (alice_strategy != other.alice_strategy || bob_strategy != other.bob_strategy)
        throw param_error("cannot merge tables from different strategy pairs");
    trials += other.trials;
    detections += other.detections;
    cheat_tested += other.cheat_tested;
    cheat_passed += other.cheat_passed;
    tested += other.tested;
    passed += other.passed;
    for (const auto& [reason, c] : other.abort_reasons) abort_reasons[reason] += c;
    for (const auto& [cell, c] : other.cells) cells[cell] += c;
}

namespace {

// Canonical text of the cell table; seeds the bootstrap so the zeta estimate
// depends only on the merged counts, not on trial order or chunking.
std::string cell_fingerprint(const SampleTable& table) {
    std::string s = table.protocol + "|" + std::to_string(table.trials);
    for (const auto& [cell, c] : table.cells) {
        const auto& [w, v, tok] = cell;
        s += ";" + std::to_string(w) + ":" + std::to_string(v) + ":" + std::to_string(tok) +
             ":" + std::to_string(c);
    }
    return s;
}

double bootstrap_zeta(const SampleTable& table, const ReportOptions& opts) {
    if (opts.bootstrap_resamples == 0 || table.trials < 2) return 0.0;
    std::vector<std::tuple<int, long long, int>> keys;
    std::vector<long long> prefix; // cumulative counts for inverse-CDF draws
    keys.reserve(table.cells.size());
    long long cum = 0;
    for (const auto& [cell, c] : table.cells) {
        cum += c;
        keys.push_back(cell);
        prefix.push_back(cum);
    }
    rng::Stream stream(transcript::fnv1a64(cell_fingerprint(table)));
    int excess = 0;
    std::vector<long long> resampled(keys.size());
    for (int r = 0; r < opts.bootstrap_resamples; ++r) {
        std::fill(resampled.begin(), resampled.end(), 0);
        for (long long i = 0; i < table.trials; ++i) {
            const auto u = static_cast<long long>(stream.uniform_below(
                static_cast<std::uint64_t>(table.trials)));
            const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
            ++resampled[static_cast<std::size_t>(it - prefix.begin())];
        }
        std::map<std::pair<int, long long>, long long> view_counts;
        std::map<std::pair<int, long long>, long long> out_counts;
        for (std::size_t j = 0; j < keys.size(); ++j) {
            if (resampled[j] == 0) continue;
            const auto& [w, v, tok] = keys[j];
            view_counts[{w, v}] += resampled[j];
            out_counts[{w, tok}] += resampled[j];
        }
        if (leakage_from_counts(view_counts, out_counts) > opts.leakage_allowance) ++excess;
    }
    return static_cast<double>(excess) / static_cast<double>(opts.bootstrap_resamples);
}

double bias_ceiling(const protocols::ProtocolParams& params) {
    if (params.protocol == "dieroll") {
        double best = 0.0;
        for (const auto& die : params.dice) best = std::max(best, die.empty() ? 0.0 : die[0]);
        return best;
    }
    return params.bias.p_max();
}

void add_bound(SecurityReport& rep, std::string name, double bound, double empirical,
               bool upper, double slack) {
    BoundComparison b;
    b.name = std::move(name);
    b.bound = bound;
    b.empirical = empirical;
    b.upper = upper;
    b.slack = slack;
    b.satisfied = upper ? empirical <= bound + slack : empirical >= bound - slack;
    rep.all_satisfied = rep.all_satisfied && b.satisfied;
    rep.bounds.push_back(std::move(b));
}

std::string strategy_line(const protocols::Strategy& s) {
    std::string out = s.name;
    for (const auto& [key, value] : s.params) out += " " + key + "=" + fmt(value);
    return out;
}

} // namespace

SecurityReport report_from_table(const SampleTable& table,
                                 const protocols::ProtocolParams& params,
                                 const protocols::Strategy& alice,
                                 const protocols::Strategy& bob, const ReportOptions& opts) {
    if (table.trials == 0) throw param_error("security report needs at least one run");
    if (opts.bootstrap_resamples < 0 || opts.bootstrap_resamples > 10000)
        throw param_error("bootstrap resample count must lie in 0..10000");
    if (!(opts.leakage_allowance > 0.0))
        throw param_error("leakage allowance must be positive");
    params.validate();
    protocols::detail::check_strategies(params, alice, bob);
    if (params.protocol != table.protocol)
        throw param_error("parameters and tabulated runs disagree on the protocol");
    if (alice.name != table.alice_strategy || bob.name != table.bob_strategy)
        throw param_error("strategy descriptors disagree with the tabulated runs");

    SecurityReport rep;
    rep.protocol = table.protocol;
    rep.params = params;
    rep.alice = alice;
    rep.bob = bob;
    rep.trials = table.trials;
    rep.abort_reasons = table.abort_reasons;

    std::map<std::pair<int, long long>, long long> view_counts;
    std::map<std::pair<int, long long>, long long> out_counts;
    std::set<long long> distinct;
    for (const auto& [cell, c] : table.cells) {
        const auto& [w, v, tok] = cell;
        distinct.insert(v);
        if (distinct.size() > static_cast<std::size_t>(kMaxLeakageViews))
            throw contract_error("view channel exceeds " + std::to_string(kMaxLeakageViews) +
                                 " distinct tokens; information estimates need bounded views");
        view_counts[{w, v}] += c;
        out_counts[{w, tok}] += c;
        switch (tok) {
            case 0: rep.zeros += c; break;
            case 1: rep.ones += c; break;
            default: rep.aborts += c; break;
        }
    }

    rep.p0_hat = ratio(rep.zeros, rep.trials);
    rep.p1_hat = ratio(rep.ones, rep.trials);
    rep.abort_rate = 1.0 - (rep.p0_hat + rep.p1_hat);
    rep.p0_ci = wilson_interval(rep.zeros, rep.trials);
    rep.p1_ci = wilson_interval(rep.ones, rep.trials);
    rep.detection_rate = ratio(table.detections, rep.trials);
    rep.leakage_bits = leakage_from_counts(view_counts, out_counts);
    rep.delta_bits_hat = rep.leakage_bits;
    rep.epsilon_hat = binomial_slack(rep.p0_hat, rep.trials);
    rep.zeta_hat = bootstrap_zeta(table, opts);

    add_bound(rep, "outcome-0 rate within bias ceiling", bias_ceiling(params), rep.p0_hat, true,
              rep.epsilon_hat);

    const bool honest_pair = alice.name == "honest" && bob.name == "honest";
    if (honest_pair)
        add_bound(rep, "view leakage within estimator allowance", opts.leakage_allowance,
                  rep.leakage_bits, true, 0.0);

    if (alice.name == "alice_vbct1_substitution") {
        const double delta = alice.param("delta", 0.0);
        const double gamma = alice.param("gamma", 1.0);
        const double ceiling = detection_bound_vbct1(delta, gamma, params.poisson_mean);
        add_bound(rep, "undetected tampering within round-count ceiling", ceiling,
                  1.0 - rep.detection_rate, true, binomial_slack(ceiling, rep.trials));
        add_bound(rep, "tampered-state pass rate within overlap ceiling",
                  1.0 - delta * delta, ratio(table.cheat_passed, table.cheat_tested), true,
                  binomial_slack(1.0 - delta * delta, std::max<long long>(table.cheat_tested, 1)));
    }
    if (bob.name == "bob_vbct2_substitution") {
        const double delta = bob.param("delta", 0.0);
        const double ceiling = detection_bound_vbct2(delta, 1.0, params.test_exponent);
        add_bound(rep, "tampered-state pass rate within overlap ceiling",
                  1.0 - delta * delta, ratio(table.cheat_passed, table.cheat_tested), true,
                  binomial_slack(1.0 - delta * delta, std::max<long long>(table.cheat_tested, 1)));
        add_bound(rep, "undetected substitution within batch ceiling", ceiling,
                  1.0 - rep.detection_rate, true, binomial_slack(ceiling, rep.trials));
    }
    if (alice.name == "alice_vbct2_z_mismatch") {
        add_bound(rep, "announcement mismatch always caught", 1.0, rep.detection_rate, false, 0.0);
        if (params.protocol == "vbct2" && rep.trials >= 1000)
            add_bound(rep, "cross-lab identity leak near one bit", 0.05,
                      std::fabs(rep.leakage_bits - 1.0), true, 0.0);
        if (params.protocol == "vbct3")
            add_bound(rep, "view leakage within estimator allowance", opts.leakage_allowance,
                      rep.leakage_bits, true, 0.0);
    }
    if (bob.name == "bob_vbct3_unveil_forge") {
        const double ceiling = std::ldexp(1.0, -params.mask_length);
        add_bound(rep, "forged unveiling acceptance within masking ceiling", ceiling,
                  ratio(rep.zeros + rep.ones, rep.trials), true,
                  binomial_slack(ceiling, rep.trials));
    }
    if (bob.name == "bob_vbct4_malformed_pair") {
        const double coverage =
            static_cast<double>(params.test_exponent - 1) / params.test_exponent;
        add_bound(rep, "malformed-pair detection near audit coverage", coverage,
                  rep.detection_rate, false, binomial_slack(coverage, rep.trials));
    }
    if (alice.name == "refuse" || bob.name == "refuse")
        add_bound(rep, "refusal always aborts", 1.0, rep.abort_rate, false, 0.0);
    if (alice.name == "alice_vbct2_spoil_supplementary") {
        add_bound(rep, "spoiling aborts the rerun", 1.0, rep.abort_rate, false, 0.0);
        add_bound(rep, "spoiling leaves no detection flag", 0.0, rep.detection_rate, true, 0.0);
    }
    if (alice.name == "alice_vbct3_premature_commit" ||
        bob.name == "bob_vbct3_premature_unveil") {
        const auto it = table.abort_reasons.find("timing");
        const long long timing = it == table.abort_reasons.end() ? 0 : it->second;
        add_bound(rep, "timing fault always flagged", 1.0, ratio(timing, rep.trials), false, 0.0);
    }

    return rep;
}

SecurityReport build_report(const std::vector<transcript::Transcript>& runs,
                            const protocols::ProtocolParams& params,
                            const protocols::Strategy& alice, const protocols::Strategy& bob,
                            const ReportOptions& opts) {
    SampleTable table;
    for (const auto& t : runs) table.add(t);
    return report_from_table(table, params, alice, bob, opts);
}

std::string SecurityReport::serialize() const {
    std::string out = "security report v1\n";
    out += "protocol " + protocol + "\n";
    out += "alice " + strategy_line(alice) + "\n";
    out += "bob " + strategy_line(bob) + "\n";
    out += "trials " + std::to_string(trials) + "\n";
    out += "zeros " + std::to_string(zeros) + "\n";
    out += "ones " + std::to_string(ones) + "\n";
    out += "aborts " + std::to_string(aborts) + "\n";
    out += "p0_hat " + fmt(p0_hat) + "\n";
    out += "p1_hat " + fmt(p1_hat) + "\n";
    out += "abort_rate " + fmt(abort_rate) + "\n";
    out += "p0_ci " + fmt(p0_ci.lower) + " " + fmt(p0_ci.upper) + "\n";
    out += "p1_ci " + fmt(p1_ci.lower) + " " + fmt(p1_ci.upper) + "\n";
    out += "detection_rate " + fmt(detection_rate) + "\n";
    out += "leakage_bits " + fmt(leakage_bits) + "\n";
    out += "epsilon_hat " + fmt(epsilon_hat) + "\n";
    out += "zeta_hat " + fmt(zeta_hat) + "\n";
    out += "delta_bits_hat " + fmt(delta_bits_hat) + "\n";
    for (const auto& [reason, c] : abort_reasons)
        out += "abort_reason " + reason + " " + std::to_string(c) + "\n";
    for (const auto& b : bounds) {
        out += std::string("bound ") + (b.upper ? "upper" : "lower") + " " + fmt(b.bound) + " " +
               fmt(b.empirical) + " " + fmt(b.slack) + " " + (b.satisfied ? "yes" : "no") + " " +
               b.name + "\n";
    }
    out += std::string("all_satisfied ") + (all_satisfied ? "yes" : "no") + "\n";
    out += "end " + std::to_string(transcript::fnv1a64(out)) + "\n";
    return out;
}

} // namespace vbct::analysis
