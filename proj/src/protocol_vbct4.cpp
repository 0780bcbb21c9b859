#include "vbct/protocols.hpp"
#include "vbct/relcommit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace vbct::protocols {

namespace {

using spacetime::ScheduleConstraint;
using transcript::AbortReason;
using transcript::Outcome;
using transcript::Transcript;

// All commitments stay sealed for the whole run except the audited pairs and
// the one toss element, so binding rests on the validity window rather than
// on spacelike unveiling.
struct Vbct4Run {
    const ProtocolParams& p;
    const Strategy& alice;
    const Strategy& bob;
    int w;
    rng::Stream rng;
    SiteLayout sites;
    Transcript t;
    double off, d;
    int m_pairs, n_cols;

    Vbct4Run(const ProtocolParams& p_, const Strategy& a, const Strategy& b, int w_,
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
        m_pairs = p.test_exponent;
        n_cols = p.n_states;
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
        t.alice_view = 4;
    }

    void abort(AbortReason r) {
        t.outcome = Outcome::abort(r);
        t.detection = true;
        t.alice_view = 4;
    }

    Transcript finish() {
        if (!t.outcome.well_formed()) throw contract_error("run ended without an outcome");
        return std::move(t);
    }

    std::uint64_t block_mask() const {
        return p.mask_length == 64 ? ~std::uint64_t{0}
                                   : ((std::uint64_t{1} << p.mask_length) - 1);
    }

    // One row with the requested zero count, zeros at random positions.
    std::vector<int> make_row(int zeros) {
        std::vector<int> row(n_cols, 1);
        std::fill(row.begin(), row.begin() + zeros, 0);
        rng.shuffle(row);
        return row;
    }

    Transcript run() {
        check_refusal_steps();
        if (p.window() + 1e-12 < 2.0 * d + 9.0 * off)
            throw param_error("sustain window shorter than the honest unveiling needs");
        const bool malform = bob.name == "bob_vbct4_malformed_pair";
        const int z0 = int(std::lround(p.bias.alpha0_sq * n_cols));
        const int z1 = int(std::lround(p.bias.alpha1_sq * n_cols));
        const std::uint64_t mask = block_mask();

        // step 1: Bob lays out M row pairs, each pair holding one row per
        // bias value in a random order
        if (detail::refuses(bob, 1)) {
            refuse_abort(sites.b1, sites.a1, 0.0);
            return finish();
        }
        int malformed_pair = malform ? int(rng.uniform_below(std::uint64_t(m_pairs))) : -1;
        std::vector<int> zero_slot(m_pairs); // slot of the heavier-zero row in its pair
        std::vector<std::vector<int>> rows(2 * m_pairs);
        for (int pm = 0; pm < m_pairs; ++pm) {
            zero_slot[pm] = int(rng.uniform_below(2));
            int zb = pm == malformed_pair ? z0 : z1; // malformed: both rows heavy
            rows[2 * pm + zero_slot[pm]] = make_row(z0);
            rows[2 * pm + 1 - zero_slot[pm]] = make_row(zb);
        }
        t.batches = 1;

        // step 2: every element goes under a challenge-mask commitment; the
        // far agents exchange challenges and records, then records flow back
        if (detail::refuses(bob, 2)) {
            refuse_abort(sites.b2, sites.a2, 3 * off);
            return finish();
        }
        msg("challenges", sites.a2, sites.b2, off, "challenge blocks");
        std::vector<std::vector<std::uint64_t>> challenge(2 * m_pairs), keys(2 * m_pairs);
        std::vector<relcommit::MaskedRecord> records(2 * m_pairs);
        for (int r = 0; r < 2 * m_pairs; ++r) {
            challenge[r].resize(n_cols);
            for (auto& c : challenge[r]) c = rng.next_u64() & mask;
        }
        for (int r = 0; r < 2 * m_pairs; ++r) {
            keys[r].resize(n_cols);
            for (auto& k : keys[r]) k = rng.next_u64() & mask;
        }
        double t_commit = 3 * off;
        for (int r = 0; r < 2 * m_pairs; ++r)
            records[r] = relcommit::commit_record(rows[r], challenge[r], keys[r],
                                                  p.mask_length);
        msg("records", sites.b2, sites.a2, t_commit, "masked records");
        msg("rec_fwd", sites.a2, sites.a1, 5 * off, "masked records");
        double t_rec = 5 * off + d;

        // step 3: the audited pairs are everything except one uniform pick
        if (detail::refuses(alice, 3)) {
            refuse_abort(sites.a1, sites.b1, t_rec);
            return finish();
        }
        int skip = int(rng.uniform_below(std::uint64_t(m_pairs)));
        msg("skip_announce", sites.a1, sites.b1, t_rec, "skip=" + std::to_string(skip));

        // step 4: Bob opens every audited element; Alice checks the records
        // and the per-pair zero counts
        if (detail::refuses(bob, 4)) {
            refuse_abort(sites.b1, sites.a1, t_rec + 2 * off);
            return finish();
        }
        msg("audit_keys", sites.b1, sites.a1, t_rec + 2 * off, "keys for audited pairs");
        double t_val = t_rec + 3 * off;
        if (detail::refuses(alice, 4)) {
            refuse_abort(sites.a1, sites.b1, t_val);
            return finish();
        }
        for (int pm = 0; pm < m_pairs; ++pm) {
            if (pm == skip) continue;
            bool ok = true;
            for (int s = 0; s < 2 && ok; ++s) {
                int r = 2 * pm + s;
                for (int c = 0; c < n_cols; ++c) {
                    ++t.tested;
                    if (relcommit::record_matches(
                            {std::vector<std::uint64_t>{records[r].blocks[c]}, false},
                            {rows[r][c]}, {keys[r][c]}, {challenge[r][c]}, p.mask_length)) {
                        ++t.passed;
                    } else {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
                int zeros = int(std::count(rows[r].begin(), rows[r].end(), 0));
                if (zeros != (s == zero_slot[pm] ? z0 : z1)) ok = false;
            }
            if (!ok) {
                msg("abort_audit", sites.a1, sites.b1, t_val + off,
                    "pair " + std::to_string(pm) + " failed the audit");
                abort(AbortReason::FailedHonestyTest);
                return finish();
            }
        }

        // step 5: row choice by the near agent, column choice by the far
        // agent, mutually spacelike; the column crosses back over
        double t_sel = t_val + 2 * off;
        if (detail::refuses(bob, 5)) {
            refuse_abort(sites.b1, sites.a1, t_sel);
            return finish();
        }
        if (detail::refuses(alice, 5)) {
            refuse_abort(sites.a2, sites.b2, t_sel);
            return finish();
        }
        int slot = w == 0 ? zero_slot[skip] : 1 - zero_slot[skip];
        int row = 2 * skip + slot;
        int col = int(rng.uniform_below(std::uint64_t(n_cols)));
        msg("row_pick", sites.b1, sites.a1, t_sel, "row=" + std::to_string(row));
        msg("column_a2", sites.a2, sites.b2, t_sel, "col=" + std::to_string(col));
        msg("column_fwd", sites.a2, sites.a1, t_sel, "col=" + std::to_string(col));
        msg("column_relay", sites.b2, sites.b1, t_sel + off, "col=" + std::to_string(col));
        constraint(ScheduleConstraint::independent(
            "row_pick", "column_a2", "row and column are chosen independently"));

        // step 6: only the intersection element is ever unveiled
        double t_unveil = t_sel + off + d + off;
        if (detail::refuses(bob, 6)) {
            refuse_abort(sites.b1, sites.a1, t_unveil);
            return finish();
        }
        relcommit::CommitmentSession session(Party::Bob, Party::Alice, p.mask_length,
                                             relcommit::BindingMode::SustainWindow,
                                             p.window());
        spacetime::Event commit_event{t_commit, sites.b2.position};
        session.commit({rows[row][col]}, {challenge[row][col]}, {keys[row][col]},
                       commit_event);
        msg("final_unveil", sites.b1, sites.a1, t_unveil,
            "bit=" + std::to_string(rows[row][col]));
        {
            auto c = ScheduleConstraint::min_delay(
                "final_unveil", ScheduleConstraint::Anchor::Emission, "records",
                ScheduleConstraint::Anchor::Emission, -p.window(),
                "commitments stay sealed only for the validity window");
            constraint(std::move(c));
        }
        spacetime::Event unveil_event{t_unveil, sites.b1.position};
        auto res = session.unveil({rows[row][col]}, {keys[row][col]}, unveil_event,
                                  unveil_event);
        if (!res.accepted) {
            msg("abort_unveil", sites.a1, sites.b1, t_unveil + 2 * off,
                res.reason == relcommit::RejectReason::Timing ? "unveiling outside the window"
                                                              : "unveiling mismatch");
            abort(res.reason == relcommit::RejectReason::Timing ? AbortReason::Timing
                                                                : AbortReason::InvalidUnveiling);
            return finish();
        }

        int m = rows[row][col];
        t.outcome = Outcome::bit(m);
        t.alice_view = 2 * slot + m;
        return finish();
    }

    void check_refusal_steps() const {
        if (alice.name == "refuse") {
            int s = int(alice.required("at_step"));
            if (s != 3 && s != 4 && s != 5)
                throw param_error("Alice does not act at that step");
        }
        if (bob.name == "refuse") {
            int s = int(bob.required("at_step"));
            if (s != 1 && s != 2 && s != 4 && s != 5 && s != 6)
                throw param_error("Bob does not act at that step");
        }
    }
};

} // namespace

transcript::Transcript run_vbct4(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed) {
    p.validate();
    if (p.protocol != "vbct4") throw param_error("params are not for vbct4");
    detail::check_strategies(p, alice, bob);
    if (w != 0 && w != 1) throw param_error("Bob's input must be 0 or 1");
    Vbct4Run run(p, alice, bob, w, seed);
    return run.run();
}

} // namespace vbct::protocols
