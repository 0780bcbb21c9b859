#include "vbct/protocols.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vbct::protocols {

namespace {

using spacetime::ScheduleConstraint;
using spacetime::TimedMessage;
using transcript::AbortReason;
using transcript::Outcome;
using transcript::Transcript;

constexpr double kQuarterPi = 0.78539816339744830962;

struct Vbct1Run {
    const ProtocolParams& p;
    const Strategy& alice;
    const Strategy& bob;
    int w;
    rng::Stream rng;
    SiteLayout sites;
    Transcript t;

    Vbct1Run(const ProtocolParams& p_, const Strategy& a, const Strategy& b, int w_,
             std::uint64_t seed)
        : p(p_), alice(a), bob(b), w(w_), rng(seed), sites(make_sites(p_)) {
        t.protocol = p.protocol;
        t.seed = seed;
        t.w = w;
        t.alice_strategy = alice.name;
        t.bob_strategy = bob.name;
        t.has_messages = p.record_messages;
    }

    void msg(const std::string& label, const spacetime::Site& from, const spacetime::Site& to,
             double emit, std::string payload) {
        if (!t.has_messages) return;
        double recv = spacetime::earliest_arrival(from, to, emit);
        t.messages.emplace_back(label, from, to, emit, recv, std::move(payload));
    }

    void refuse_abort(const spacetime::Site& from, const spacetime::Site& to, double emit) {
        msg("refuse", from, to, emit, "refuse");
        t.outcome = Outcome::abort(AbortReason::Refusal);
        t.detection = true;
        t.alice_view = 8; // reserved abort token, outside the honest 0..7 range
    }

    Transcript run() {
        if (alice.name == "refuse") {
            int s = int(alice.required("at_step"));
            if (s != 2 && s != 4 && s != 8)
                throw param_error("Alice does not act at that step");
        }
        if (bob.name == "refuse") {
            int s = int(bob.required("at_step"));
            if (s != 1 && s != 5 && s != 6 && s != 7 && s != 8)
                throw param_error("Bob does not act at that step");
        }
        const double off = p.lab_offset;
        const double d = p.site_distance;
        const double tau = p.round_interval;
        const double theta = p.bias.theta;
        const double p_max = p.bias.p_max();

        const bool sub = alice.name == "alice_vbct1_substitution";
        const double delta = sub ? alice.required("delta") : 0.0;
        const double gamma = sub ? alice.required("gamma") : 0.0;
        if (sub && p_max + delta > 1.0 + 1e-12)
            throw param_error("substituted outcome-0 weight exceeds 1 for this bias");

        const bool meas = bob.name == "bob_vbct1_measure";
        const double basis = meas ? bob.required("basis_angle") : kQuarterPi;
        const int flip = meas ? int(bob.required("flip")) : w;

        // step 1: the three B agents pre-agree the round count n
        if (detail::refuses(bob, 1)) {
            refuse_abort(sites.b3, sites.a3, -3.0 * d);
            return finish();
        }
        const int n = int(rng.poisson_positive(p.poisson_mean));
        t.batches = n;
        msg("agree_n_b3_b2", sites.b3, sites.b2, -3.0 * d, "n=" + std::to_string(n));
        msg("agree_n_b3_b1", sites.b3, sites.b1, -3.0 * d, "n=" + std::to_string(n));

        if (detail::refuses(alice, 2)) {
            refuse_abort(sites.a1, sites.b1, 0.0);
            return finish();
        }
        if (detail::refuses(alice, 4)) {
            refuse_abort(sites.a2, sites.b2, 0.0);
            return finish();
        }

        // the announcement of n reaches A1 after light crossing; rounds keep
        // their cadence until then
        const double t_announce = (n - 1) * tau;
        const double t_report_a1 = t_announce + off + 2.0 * d;
        int n_total = n;
        while (n_total * tau < t_report_a1) ++n_total;

        // steps 2-4: draw every round's content up front (fixed stream order)
        std::vector<int> declared(n_total + 1, 0);
        std::vector<char> cheat(n_total + 1, 0);
        for (int i = 1; i <= n_total; ++i) {
            if (sub) cheat[i] = rng.bernoulli(gamma) ? 1 : 0;
            declared[i] = cheat[i] ? adversary::vbct1_cheat_label(delta)
                                   : int(rng.uniform_below(2));
        }

        // step 7 draw happens at the toss measurement below; keep stream order
        // by drawing checks after it only when they temporally follow it: the
        // stream is private to the run, so a fixed order (toss first) is fine.
        const qstate::StateVector e0({std::cos(basis), std::sin(basis)});
        qstate::StateVector toss_state =
            cheat[n] ? adversary::vbct1_cheat_state(p_max, delta)
                     : qstate::make_vbct1_state(theta, declared[n]);
        const double prob0 = qstate::pure_overlap_prob(e0, toss_state);
        const bool outcome0 = rng.uniform01() < prob0;

        // step 5: honesty checks in round order; first failure ends the run
        int fail_round = 0;
        const double pass_prob = sub ? qstate::pass_probability(p_max, delta) : 1.0;
        if (detail::refuses(bob, 5)) {
            refuse_abort(sites.b1, sites.a1, off + d);
            return finish();
        }
        for (int i = 1; i <= n_total && fail_round == 0; ++i) {
            if (i == n) continue;
            ++t.tested;
            if (cheat[i]) ++t.cheat_tested;
            bool pass = cheat[i] ? rng.bernoulli(pass_prob) : true;
            if (pass) {
                ++t.passed;
                if (cheat[i]) ++t.cheat_passed;
            } else {
                fail_round = i;
            }
        }

        int n_emitted = n_total;
        if (fail_round > 0) {
            // rounds already in flight when the abort notice reaches Alice
            double t_stop = (fail_round - 1) * tau + 2.0 * off + d;
            n_emitted = 0;
            while (n_emitted < n_total && n_emitted * tau < t_stop) ++n_emitted;
        }
        for (int i = 1; i <= n_emitted; ++i) {
            double ti = (i - 1) * tau;
            std::string idx = std::to_string(i);
            msg("qubit[" + idx + "]", sites.a1, sites.b1, ti, "qubit " + idx);
            msg("id[" + idx + "]", sites.a2, sites.b2, ti,
                "a[" + idx + "]=" + std::to_string(declared[i]));
            msg("relay[" + idx + "]", sites.b2, sites.b1, ti + off,
                "a[" + idx + "]=" + std::to_string(declared[i]));
            if (t.has_messages)
                t.constraints.push_back(ScheduleConstraint::independent(
                    "qubit[" + idx + "]", "id[" + idx + "]",
                    "state and its identity leave independently"));
        }

        if (fail_round > 0) {
            double t_fail = (fail_round - 1) * tau + off + d;
            msg("abort_check", sites.b1, sites.a1, t_fail,
                "failed check at round " + std::to_string(fail_round));
            t.outcome = Outcome::abort(AbortReason::FailedHonestyTest);
            t.detection = true;
            t.alice_view = 8;
            return finish();
        }

        // step 6: count announcement, spacelike from the nth round emissions
        if (detail::refuses(bob, 6)) {
            refuse_abort(sites.b3, sites.a3, t_announce);
            return finish();
        }
        msg("announce_n", sites.b3, sites.a3, t_announce, "n=" + std::to_string(n));
        msg("report_n_a1", sites.a3, sites.a1, t_announce + off, "n=" + std::to_string(n));
        msg("report_n_a2", sites.a3, sites.a2, t_announce + off, "n=" + std::to_string(n));
        if (t.has_messages) {
            std::string nn = std::to_string(n);
            t.constraints.push_back(ScheduleConstraint::independent(
                "announce_n", "qubit[" + nn + "]", "count reveal independent of the toss state"));
            t.constraints.push_back(ScheduleConstraint::independent(
                "announce_n", "id[" + nn + "]", "count reveal independent of the toss identity"));
        }

        // step 7: measure the toss state, reveal b
        if (detail::refuses(bob, 7)) {
            refuse_abort(sites.b1, sites.a1, (n - 1) * tau + off);
            return finish();
        }
        int guess = outcome0 ? 0 : 1;
        int b = guess ^ flip;

        if (detail::refuses(alice, 8) || detail::refuses(bob, 8)) {
            refuse_abort(detail::refuses(alice, 8) ? sites.a1 : sites.b1,
                         detail::refuses(alice, 8) ? sites.b1 : sites.a1, (n - 1) * tau + off);
            return finish();
        }
        msg("b_reveal", sites.b1, sites.a1, (n - 1) * tau + off,
            "toss=" + std::to_string(n) + " b=" + std::to_string(b));

        // step 8: both sides now hold a and b
        int a = declared[n];
        int c = a ^ b;
        t.outcome = Outcome::bit(c);
        t.a_bit = a;
        t.b_bit = b;
        t.alice_view = a * 4 + b * 2 + c;
        return finish();
    }

    Transcript finish() {
        if (!t.outcome.well_formed()) throw contract_error("run ended without an outcome");
        return std::move(t);
    }
};

} // namespace

transcript::Transcript run_vbct1(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed) {
    p.validate();
    if (p.protocol != "vbct1") throw param_error("params are not for vbct1");
    detail::check_strategies(p, alice, bob);
    if (w != 0 && w != 1) throw param_error("Bob's input must be 0 or 1");
    Vbct1Run run(p, alice, bob, w, seed);
    return run.run();
}

} // namespace vbct::protocols
