#include "vbct/protocols.hpp"
#include "vbct/relcommit.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vbct::protocols {

namespace {

using spacetime::ScheduleConstraint;
using transcript::AbortReason;
using transcript::Outcome;
using transcript::Transcript;

// Labels for one batch, redrawn until both values occur. N >= 2 makes the
// loop terminate with probability 1; the cap guards engine bugs only.
std::vector<int> draw_labels(rng::Stream& rng, int n) {
    for (int tries = 0; tries < 100000; ++tries) {
        std::vector<int> y(n);
        bool all_same = true;
        for (int i = 0; i < n; ++i) {
            y[i] = int(rng.uniform_below(2));
            if (y[i] != y[0]) all_same = false;
        }
        if (!all_same) return y;
    }
    throw contract_error("label redraw loop did not terminate");
}

int pick_index(rng::Stream& rng, const std::vector<int>& y, int w) {
    std::vector<int> cands;
    for (int i = 0; i < int(y.size()); ++i)
        if (y[i] == w) cands.push_back(i);
    if (cands.empty()) throw contract_error("batch accepted without the wanted label");
    return cands[size_t(rng.uniform_below(cands.size()))];
}

int bit_width(int n) {
    int b = 1;
    while ((1 << b) < n) ++b;
    return b;
}

std::vector<int> index_bits(int v, int width) {
    std::vector<int> bits(width);
    for (int b = 0; b < width; ++b) bits[b] = (v >> b) & 1;
    return bits;
}

std::string id_list_payload(const std::vector<int>& y) {
    std::string s = "ids";
    for (int v : y) s += v ? "1" : "0";
    return s;
}

struct BatchRun {
    const ProtocolParams& p;
    const Strategy& alice;
    const Strategy& bob;
    int w;
    rng::Stream rng;
    SiteLayout sites;
    Transcript t;
    double off, d, zprob, interval;
    int max_batches;

    BatchRun(const ProtocolParams& p_, const Strategy& a, const Strategy& b, int w_,
             std::uint64_t seed)
        : p(p_), alice(a), bob(b), w(w_), rng(seed), sites(make_sites(p_)) {
        t.protocol = p.protocol;
        t.seed = seed;
        t.w = w;
        t.alice_strategy = alice.name;
        t.bob_strategy = bob.name;
        t.has_messages = p.record_messages;
        off = p.lab_offset;
        d = p.site_distance;
        zprob = std::ldexp(1.0, -p.test_exponent);
        interval = d + 4.0 * off;
        max_batches = 64 * (1 << std::min(p.test_exponent, 24)) + 64;
    }

    void msg(const std::string& label, const spacetime::Site& from, const spacetime::Site& to,
             double emit, std::string payload) {
        if (!t.has_messages) return;
        double recv = spacetime::earliest_arrival(from, to, emit);
        t.messages.emplace_back(label, from, to, emit, recv, std::move(payload));
    }

    void constraint(ScheduleConstraint c) {
        if (t.has_messages) t.constraints.push_back(std::move(c));
    }

    void refuse_abort(const spacetime::Site& from, const spacetime::Site& to, double emit) {
        msg("refuse", from, to, emit, "refuse");
        t.outcome = Outcome::abort(AbortReason::Refusal);
        t.detection = true;
        t.alice_view = 2 * p.n_states;
    }

    void abort(AbortReason r, long long view) {
        t.outcome = Outcome::abort(r);
        t.detection = true;
        t.alice_view = view;
    }

    Transcript finish() {
        if (!t.outcome.well_formed()) throw contract_error("run ended without an outcome");
        return std::move(t);
    }

    // Steps shared by both batch protocols: creation and the z announcements.
    // Returns the batch base time.
    double open_batch(int k) {
        double ti = (k - 1) * interval;
        msg("batch[" + std::to_string(k) + "]", sites.b1, sites.a1, ti,
            "pairs " + std::to_string(p.n_states));
        return ti;
    }

    void announce_z(int k, double ti, int z1, int z2) {
        std::string ks = std::to_string(k);
        msg("z_a1[" + ks + "]", sites.a1, sites.b1, ti + off, "z=" + std::to_string(z1));
        msg("z_a2[" + ks + "]", sites.a2, sites.b2, ti + off, "z=" + std::to_string(z2));
        msg("zx_b1[" + ks + "]", sites.b1, sites.b2, ti + 2 * off, "z=" + std::to_string(z1));
        msg("zx_b2[" + ks + "]", sites.b2, sites.b1, ti + 2 * off, "z=" + std::to_string(z2));
    }
};

// ---------------------------------------------------------------------------
// Protocol with direct simultaneous choice announcements.

struct Vbct2Run : BatchRun {
    using BatchRun::BatchRun;

    Transcript run() {
        const bool mism = alice.name == "alice_vbct2_z_mismatch";
        const bool spoil = alice.name == "alice_vbct2_spoil_supplementary";
        const bool sub = bob.name == "bob_vbct2_substitution";
        const double p_max = p.bias.p_max();
        const double delta = sub ? bob.required("delta") : 0.0;
        if (sub && p_max + delta > 1.0 + 1e-12)
            throw param_error("substituted outcome-0 weight exceeds 1 for this bias");
        if (spoil && !p.supplementary)
            throw param_error("spoiling needs the supplementary test enabled");
        check_refusal_steps();
        const double pass_prob = sub ? qstate::pass_probability(p_max, delta) : 1.0;

        if (detail::refuses(bob, 1)) {
            refuse_abort(sites.b1, sites.a1, 0.0);
            return finish();
        }
        if (detail::refuses(alice, 2)) {
            refuse_abort(sites.a1, sites.b1, off);
            return finish();
        }

        for (int k = 1; k <= max_batches; ++k) {
            t.batches = k;
            std::vector<int> y = draw_labels(rng, p.n_states);
            double ti = open_batch(k);
            std::string ks = std::to_string(k);

            int z1, z2;
            if (mism && k == 1) {
                z1 = int(alice.required("z1"));
                z2 = int(alice.required("z2"));
            } else {
                z1 = z2 = rng.bernoulli(zprob) ? 0 : 1;
            }
            announce_z(k, ti, z1, z2);
            constraint(ScheduleConstraint::independent(
                "z_a2[" + ks + "]", "batch[" + ks + "]",
                "far-side test announcement independent of batch creation"));

            if (k == 1 && (detail::refuses(alice, 3) || detail::refuses(bob, 3))) {
                bool a = detail::refuses(alice, 3);
                refuse_abort(a ? sites.a1 : sites.b1, a ? sites.b1 : sites.a1, ti + 2 * off);
                return finish();
            }

            if (z1 != z2) {
                run_mismatch(k, ti, y, z1);
                return finish();
            }
            if (z1 == 1) {
                if (!run_audit(k, ti, y, sub, pass_prob)) return finish();
                continue;
            }
            run_toss(k, ti, y, sub, spoil, p_max, delta, pass_prob);
            return finish();
        }
        throw contract_error("batch loop exceeded its cap");
    }

    void check_refusal_steps() const {
        if (alice.name == "refuse") {
            int s = int(alice.required("at_step"));
            if (s != 2 && s != 3 && s != 4 && s != 5)
                throw param_error("Alice does not act at that step");
            if (s == 5 && !p.supplementary)
                throw param_error("refusal at the optional test needs it enabled");
        }
        if (bob.name == "refuse") {
            int s = int(bob.required("at_step"));
            if (s != 1 && s != 3 && s != 4 && s != 5)
                throw param_error("Bob does not act at that step");
            if (s == 5 && !p.supplementary)
                throw param_error("refusal at the optional test needs it enabled");
        }
    }

    // Both agents received the same z = 1: Bob opens the batch for checking.
    // Returns false when the run aborted.
    bool run_audit(int k, double ti, const std::vector<int>& y, bool sub, double pass_prob) {
        std::string ks = std::to_string(k);
        msg("audit_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off,
            "qubits+" + id_list_payload(y));
        msg("audit_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off, id_list_payload(y));
        msg("audit_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off, id_list_payload(y));
        for (int i = 0; i < p.n_states; ++i) {
            ++t.tested;
            bool cheat = sub && y[i] == 0;
            if (cheat) ++t.cheat_tested;
            bool pass = cheat ? rng.bernoulli(pass_prob) : true;
            if (!pass) {
                msg("abort_audit[" + ks + "]", sites.a1, sites.b1, ti + 4 * off,
                    "failed check at state " + std::to_string(i));
                abort(AbortReason::FailedHonestyTest, 2 * p.n_states);
                return false;
            }
            ++t.passed;
            if (cheat) ++t.cheat_passed;
        }
        return true;
    }

    // The agents received different z values; whoever heard 0 proceeds with
    // the toss, whoever heard 1 opens the batch. Either way the identity list
    // and the choice both reach Alice before the cross-check exposes her.
    void run_mismatch(int k, double ti, const std::vector<int>& y, int z1) {
        std::string ks = std::to_string(k);
        int j = pick_index(rng, y, w);
        if (z1 == 0) {
            // near agent tosses, far agent opens the batch
            msg("choice_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off,
                "j=" + std::to_string(j));
            msg("audit_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off, id_list_payload(y));
            msg("audit_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off, id_list_payload(y));
            (void)rng.uniform01(); // the near agent still burns his measurement
        } else {
            msg("audit_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off,
                "qubits+" + id_list_payload(y));
            msg("choice_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off,
                "j=" + std::to_string(j));
            msg("choice_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off,
                "j=" + std::to_string(j));
            for (int i = 0; i < p.n_states; ++i) {
                ++t.tested;
                ++t.passed;
            }
        }
        msg("abort_z[" + ks + "]", sites.b1, sites.a1, ti + 2 * off + d, "z mismatch");
        abort(AbortReason::ZMismatch, y[j]);
    }

    void run_toss(int k, double ti, const std::vector<int>& y, bool sub, bool spoil,
                  double p_max, double delta, double pass_prob) {
        std::string ks = std::to_string(k);
        if (detail::refuses(alice, 4) || detail::refuses(bob, 4)) {
            bool a = detail::refuses(alice, 4);
            refuse_abort(a ? sites.a1 : sites.b1, a ? sites.b1 : sites.a1, ti + 2 * off);
            return;
        }
        int j = pick_index(rng, y, w);
        double tp = ti + 2 * off;
        msg("choice_b1[" + ks + "]", sites.b1, sites.a1, tp, "j=" + std::to_string(j));
        msg("choice_b2[" + ks + "]", sites.b2, sites.a2, tp, "j=" + std::to_string(j));
        msg("choice_fwd[" + ks + "]", sites.a2, sites.a1, tp + off, "j=" + std::to_string(j));
        constraint(ScheduleConstraint::independent(
            "choice_b1[" + ks + "]", "choice_b2[" + ks + "]",
            "the two choice announcements are simultaneous"));

        bool toss_cheated = sub && y[j] == 0;
        double prob0 = toss_cheated ? std::norm(adversary::vbct2_cheat_pair(p_max, delta)[0])
                                    : std::norm(qstate::make_pair_state(
                                          y[j] == 0 ? p.bias.alpha0_sq : p.bias.alpha1_sq)[0]);
        int m = rng.uniform01() < prob0 ? 0 : 1;
        msg("outcome_b1[" + ks + "]", sites.b1, sites.a1, tp + off, "m=" + std::to_string(m));

        t.outcome = Outcome::bit(m);
        t.alice_view = 2 * j + m;

        if (!p.supplementary) return;
        if (detail::refuses(alice, 5) || detail::refuses(bob, 5)) {
            bool a = detail::refuses(alice, 5);
            refuse_abort(a ? sites.a1 : sites.b1, a ? sites.b1 : sites.a1, tp + 5 * off);
            return;
        }
        msg("supp_b1[" + ks + "]", sites.b1, sites.a1, tp + 5 * off,
            "rest+" + id_list_payload(y));
        for (int i = 0; i < p.n_states; ++i) {
            if (i == j) continue;
            ++t.tested;
            bool cheat = sub && y[i] == 0;
            if (cheat) ++t.cheat_tested;
            bool pass = cheat ? rng.bernoulli(pass_prob) : true;
            if (!pass) {
                msg("abort_supp[" + ks + "]", sites.a1, sites.b1, tp + 7 * off,
                    "failed check at state " + std::to_string(i));
                t.outcome = Outcome::abort(AbortReason::PostOutcomeTest);
                t.detection = true;
                return;
            }
            ++t.passed;
            if (cheat) ++t.cheat_passed;
        }
        if (spoil) {
            // Alice falsely claims a failure after seeing the outcome; the
            // claim is unverifiable, so nothing is pinned on her.
            msg("abort_supp[" + ks + "]", sites.a1, sites.b1, tp + 7 * off, "claimed failure");
            t.outcome = Outcome::abort(AbortReason::PostOutcomeTest);
        }
    }
};

// ---------------------------------------------------------------------------
// Protocol with the committed choice: the far agents run a challenge-mask
// commitment of the chosen index, and the near agent unveils only after the
// cross-check of z would have exposed a split announcement.

struct Vbct3Run : BatchRun {
    using BatchRun::BatchRun;

    Transcript run() {
        const bool mism = alice.name == "alice_vbct2_z_mismatch";
        const bool premature = alice.name == "alice_vbct3_premature_commit";
        const bool forge = bob.name == "bob_vbct3_unveil_forge";
        const bool early = bob.name == "bob_vbct3_premature_unveil";
        check_refusal_steps();

        if (detail::refuses(bob, 1)) {
            refuse_abort(sites.b1, sites.a1, 0.0);
            return finish();
        }
        if (detail::refuses(alice, 2)) {
            refuse_abort(sites.a1, sites.b1, off);
            return finish();
        }

        for (int k = 1; k <= max_batches; ++k) {
            t.batches = k;
            std::vector<int> y = draw_labels(rng, p.n_states);
            double ti = open_batch(k);

            int z1, z2;
            if (mism && k == 1) {
                z1 = int(alice.required("z1"));
                z2 = int(alice.required("z2"));
            } else {
                z1 = z2 = rng.bernoulli(zprob) ? 0 : 1;
            }
            announce_z(k, ti, z1, z2);

            if (z1 != z2) {
                run_mismatch(k, ti, y, z1);
                return finish();
            }
            if (z1 == 1) {
                if (!run_audit(k, ti, y)) return finish();
                continue;
            }
            run_toss(k, ti, y, premature, forge, early);
            return finish();
        }
        throw contract_error("batch loop exceeded its cap");
    }

    void check_refusal_steps() const {
        if (alice.name == "refuse") {
            int s = int(alice.required("at_step"));
            if (s != 2 && s != 5 && s != 9 && s != 10)
                throw param_error("Alice does not act at that step");
            if (s == 10 && !p.supplementary)
                throw param_error("refusal at the optional test needs it enabled");
        }
        if (bob.name == "refuse") {
            int s = int(bob.required("at_step"));
            if (s != 1 && s != 4 && s != 6 && s != 8 && s != 9 && s != 10)
                throw param_error("Bob does not act at that step");
            if (s == 10 && !p.supplementary)
                throw param_error("refusal at the optional test needs it enabled");
        }
    }

    // Audit responses must leave before the counterpart's z crosses over.
    void audit_constraints(const std::string& ks) {
        constraint(ScheduleConstraint::min_delay(
            "audit_b1[" + ks + "]", ScheduleConstraint::Anchor::Emission, "zx_b2[" + ks + "]",
            ScheduleConstraint::Anchor::Reception, 0.0,
            "batch opened before the counterpart z arrives"));
        constraint(ScheduleConstraint::min_delay(
            "audit_b2[" + ks + "]", ScheduleConstraint::Anchor::Emission, "zx_b1[" + ks + "]",
            ScheduleConstraint::Anchor::Reception, 0.0,
            "identity list sent before the counterpart z arrives"));
    }

    bool run_audit(int k, double ti, const std::vector<int>& y) {
        std::string ks = std::to_string(k);
        if (detail::refuses(bob, 4)) {
            refuse_abort(sites.b1, sites.a1, ti + 2 * off);
            return false;
        }
        msg("audit_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off,
            "qubits+" + id_list_payload(y));
        msg("audit_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off, id_list_payload(y));
        msg("audit_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off, id_list_payload(y));
        audit_constraints(ks);
        for (int i = 0; i < p.n_states; ++i) {
            ++t.tested;
            ++t.passed;
        }
        return true;
    }

    void run_mismatch(int k, double ti, const std::vector<int>& y, int z1) {
        std::string ks = std::to_string(k);
        int j = pick_index(rng, y, w);
        long long view;
        if (z1 == 0) {
            // near agent waits for a commitment start that never comes; far
            // agent opens the batch, so Alice holds identities but no choice
            msg("audit_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off, id_list_payload(y));
            msg("audit_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off, id_list_payload(y));
            view = (long long)(transcript::fnv1a64(id_list_payload(y)) & 0xF);
        } else {
            // near agent opens the batch; the committed choice stays masked,
            // so Alice holds identities and an information-free record
            msg("audit_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off,
                "qubits+" + id_list_payload(y));
            for (int i = 0; i < p.n_states; ++i) {
                ++t.tested;
                ++t.passed;
            }
            double t_init = ti + off + d / 2.0;
            msg("commit_init[" + ks + "]", sites.a2, sites.b2, t_init, "challenges");
            int bc = bit_width(p.n_states);
            std::vector<std::uint64_t> challenge(bc), keys(bc);
            std::uint64_t mask = relcommit_mask();
            for (auto& c : challenge) c = rng.next_u64() & mask;
            for (auto& kk : keys) kk = rng.next_u64() & mask;
            auto record = relcommit::commit_record(index_bits(j, bc), challenge, keys,
                                                   p.mask_length);
            msg("commit_rec[" + ks + "]", sites.b2, sites.a2, t_init + off, "record");
            msg("rec_fwd[" + ks + "]", sites.a2, sites.a1, t_init + 2 * off, "record");
            view = (long long)(record.blocks[0] & 0xF);
        }
        msg("abort_z[" + ks + "]", sites.b1, sites.a1, ti + 2 * off + d, "z mismatch");
        abort(AbortReason::ZMismatch, view);
    }

    std::uint64_t relcommit_mask() const {
        return p.mask_length == 64 ? ~std::uint64_t{0}
                                   : ((std::uint64_t{1} << p.mask_length) - 1);
    }

    void run_toss(int k, double ti, const std::vector<int>& y, bool premature, bool forge,
                  bool early) {
        std::string ks = std::to_string(k);
        const double tz = ti + off;
        const double tol = p.tolerance();

        // far side starts the commitment a half separation after z
        if (detail::refuses(alice, 5)) {
            refuse_abort(sites.a2, sites.b2, tz + d / 2.0);
            return;
        }
        double t_init = tz + (premature ? alice.required("factor") : 1.0) * d / 2.0;
        msg("commit_init[" + ks + "]", sites.a2, sites.b2, t_init, "challenges");
        {
            auto c = ScheduleConstraint::exact_delay(
                "z_a2[" + ks + "]", ScheduleConstraint::Anchor::Emission,
                "commit_init[" + ks + "]", ScheduleConstraint::Anchor::Emission, d / 2.0,
                "commitment starts exactly half a separation after z");
            c.tolerance = tol;
            constraint(std::move(c));
        }
        if (std::fabs((t_init - tz) - d / 2.0) > tol) {
            msg("abort_timing[" + ks + "]", sites.b2, sites.a2, t_init + 2 * off,
                "commitment started off schedule");
            abort(AbortReason::Timing, 2 * p.n_states);
            return;
        }

        if (detail::refuses(bob, 6)) {
            refuse_abort(sites.b2, sites.a2, t_init + off);
            return;
        }
        int j = pick_index(rng, y, w);
        int bc = bit_width(p.n_states);
        std::vector<std::uint64_t> challenge(bc), keys(bc);
        std::uint64_t mask = relcommit_mask();
        for (auto& c : challenge) c = rng.next_u64() & mask;
        for (auto& kk : keys) kk = rng.next_u64() & mask;
        relcommit::CommitmentSession session(Party::Bob, Party::Alice, p.mask_length,
                                             relcommit::BindingMode::StrictSpacelike);
        spacetime::Event commit_event{t_init + off, sites.b2.position};
        session.commit(index_bits(j, bc), challenge, keys, commit_event);
        msg("commit_rec[" + ks + "]", sites.b2, sites.a2, t_init + off, "record");
        msg("rec_fwd[" + ks + "]", sites.a2, sites.a1, t_init + 2 * off, "record");

        // cross-check of z completes before any unveiling is accepted
        if (detail::refuses(bob, 8)) {
            refuse_abort(sites.b1, sites.a1, tz + d + 2 * off);
            return;
        }
        double t_unveil = tz + d + 2 * off - (early ? bob.required("advance") : 0.0);
        int claimed = j;
        std::vector<std::uint64_t> claimed_keys = keys;
        if (forge) {
            int target = j ^ (int(bob.required("flip_mask")) & ((1 << bc) - 1));
            if (target >= p.n_states || target == j) target = j ^ 1;
            if (target >= p.n_states) target = j - 1;
            claimed = target;
            for (int b = 0; b < bc; ++b)
                if (((claimed ^ j) >> b) & 1) claimed_keys[b] = rng.next_u64() & mask;
        }
        msg("unveil[" + ks + "]", sites.b1, sites.a1, t_unveil,
            "i=" + std::to_string(claimed));
        constraint(ScheduleConstraint::min_delay(
            "z_a1[" + ks + "]", ScheduleConstraint::Anchor::Emission, "unveil[" + ks + "]",
            ScheduleConstraint::Anchor::Emission, d,
            "unveiling waits out the z cross-check"));

        double arrival = t_unveil + off;
        if (arrival < tz + d + 3 * off - tol) {
            msg("abort_timing[" + ks + "]", sites.a1, sites.b1, arrival, "early unveiling");
            abort(AbortReason::Timing, 2 * p.n_states);
            return;
        }
        spacetime::Event unveil_event{t_unveil, sites.b1.position};
        spacetime::Event challenge_reception{t_init + off, sites.b2.position};
        auto res = session.unveil(index_bits(claimed, bc), claimed_keys, unveil_event,
                                  challenge_reception);
        if (!res.accepted) {
            double t_verify = std::max(arrival, t_init + 2 * off + d);
            msg("abort_unveil[" + ks + "]", sites.a1, sites.b1, t_verify,
                res.reason == relcommit::RejectReason::Timing ? "unveiling out of position"
                                                              : "unveiling mismatch");
            abort(res.reason == relcommit::RejectReason::Timing ? AbortReason::Timing
                                                                : AbortReason::InvalidUnveiling,
                  2 * p.n_states);
            return;
        }

        if (detail::refuses(alice, 9) || detail::refuses(bob, 9)) {
            bool a = detail::refuses(alice, 9);
            refuse_abort(a ? sites.a1 : sites.b1, a ? sites.b1 : sites.a1,
                         tz + 3.0 * d / 2.0 + 3 * off);
            return;
        }
        double prob0 = std::norm(qstate::make_pair_state(
            y[claimed] == 0 ? p.bias.alpha0_sq : p.bias.alpha1_sq)[0]);
        int m = rng.uniform01() < prob0 ? 0 : 1;
        double t_meas = std::max(arrival, t_init + 2 * off + d) + off;
        msg("outcome_b1[" + ks + "]", sites.b1, sites.a1, t_meas, "m=" + std::to_string(m));
        t.outcome = Outcome::bit(m);
        t.alice_view = 2 * claimed + m;

        if (!p.supplementary) return;
        if (detail::refuses(alice, 10) || detail::refuses(bob, 10)) {
            bool a = detail::refuses(alice, 10);
            refuse_abort(a ? sites.a1 : sites.b1, a ? sites.b1 : sites.a1, t_meas + 2 * off);
            return;
        }
        msg("supp_b1[" + ks + "]", sites.b1, sites.a1, t_meas + 2 * off,
            "rest+" + id_list_payload(y));
        for (int i = 0; i < p.n_states; ++i) {
            if (i == claimed) continue;
            ++t.tested;
            ++t.passed;
        }
    }
};

} // namespace

transcript::Transcript run_vbct2(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed) {
    p.validate();
    if (p.protocol != "vbct2") throw param_error("params are not for vbct2");
    detail::check_strategies(p, alice, bob);
    if (w != 0 && w != 1) throw param_error("Bob's input must be 0 or 1");
    Vbct2Run run(p, alice, bob, w, seed);
    return run.run();
}

transcript::Transcript run_vbct3(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed) {
    p.validate();
    if (p.protocol != "vbct3") throw param_error("params are not for vbct3");
    detail::check_strategies(p, alice, bob);
    if (w != 0 && w != 1) throw param_error("Bob's input must be 0 or 1");
    Vbct3Run run(p, alice, bob, w, seed);
    return run.run();
}

} // namespace vbct::protocols
