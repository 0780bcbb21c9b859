#include "vbct/protocols.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vbct::protocols {

namespace {

using spacetime::ScheduleConstraint;
using transcript::Outcome;
using transcript::Transcript;

// A batch is acceptable when the labels are not all equal and the wanted die
// occurs at least once. For two dice this is the same acceptance region as
// the coin protocol's, which keeps the two engines draw-for-draw aligned.
std::vector<int> draw_die_labels(rng::Stream& rng, int n, int dice, int wanted) {
    for (int tries = 0; tries < 100000; ++tries) {
        std::vector<int> labels(n);
        bool all_same = true;
        bool has_wanted = false;
        for (int i = 0; i < n; ++i) {
            labels[i] = int(rng.uniform_below(std::uint64_t(dice)));
            if (labels[i] != labels[0]) all_same = false;
            if (labels[i] == wanted) has_wanted = true;
        }
        if (!all_same && has_wanted) return labels;
    }
    throw contract_error("label redraw loop did not terminate");
}

struct DieRollRun {
    const ProtocolParams& p;
    rng::Stream rng;
    SiteLayout sites;
    Transcript t;
    double off, d, zprob, interval;
    int max_batches;

    DieRollRun(const ProtocolParams& p_, std::uint64_t seed)
        : p(p_), rng(seed), sites(make_sites(p_)) {
        t.protocol = p.protocol;
        t.seed = seed;
        t.w = p.die_choice;
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

    Transcript run() {
        const int faces = p.die_faces;
        const auto& probs = p.dice[size_t(p.die_choice)];

        for (int k = 1; k <= max_batches; ++k) {
            t.batches = k;
            std::string ks = std::to_string(k);
            std::vector<int> labels =
                draw_die_labels(rng, p.n_states, int(p.dice.size()), p.die_choice);
            double ti = (k - 1) * interval;
            msg("batch[" + ks + "]", sites.b1, sites.a1, ti,
                "pairs " + std::to_string(p.n_states));

            int z = rng.bernoulli(zprob) ? 0 : 1;
            msg("z_a1[" + ks + "]", sites.a1, sites.b1, ti + off, "z=" + std::to_string(z));
            msg("z_a2[" + ks + "]", sites.a2, sites.b2, ti + off, "z=" + std::to_string(z));
            msg("zx_b1[" + ks + "]", sites.b1, sites.b2, ti + 2 * off,
                "z=" + std::to_string(z));
            msg("zx_b2[" + ks + "]", sites.b2, sites.b1, ti + 2 * off,
                "z=" + std::to_string(z));
            constraint(ScheduleConstraint::independent(
                "z_a2[" + ks + "]", "batch[" + ks + "]",
                "far-side test announcement independent of batch creation"));

            if (z == 1) {
                std::string ids = "ids";
                for (int v : labels) ids += std::to_string(v);
                msg("audit_b1[" + ks + "]", sites.b1, sites.a1, ti + 2 * off, "qubits+" + ids);
                msg("audit_b2[" + ks + "]", sites.b2, sites.a2, ti + 2 * off, ids);
                msg("audit_fwd[" + ks + "]", sites.a2, sites.a1, ti + 3 * off, ids);
                t.tested += p.n_states;
                t.passed += p.n_states;
                continue;
            }

            std::vector<int> cands;
            for (int i = 0; i < p.n_states; ++i)
                if (labels[i] == p.die_choice) cands.push_back(i);
            int j = cands[size_t(rng.uniform_below(cands.size()))];
            double tp = ti + 2 * off;
            msg("choice_b1[" + ks + "]", sites.b1, sites.a1, tp, "j=" + std::to_string(j));
            msg("choice_b2[" + ks + "]", sites.b2, sites.a2, tp, "j=" + std::to_string(j));
            msg("choice_fwd[" + ks + "]", sites.a2, sites.a1, tp + off,
                "j=" + std::to_string(j));
            constraint(ScheduleConstraint::independent(
                "choice_b1[" + ks + "]", "choice_b2[" + ks + "]",
                "the two choice announcements are simultaneous"));

            // correlated pair measurement: both ends read the same face
            qstate::StateVector pair = qstate::make_die_pair_state(probs);
            double u = rng.uniform01();
            double cum = 0.0;
            int face = faces - 1;
            for (int f = 0; f < faces; ++f) {
                cum += std::norm(pair[size_t(f) * faces + f]);
                if (u < cum) {
                    face = f;
                    break;
                }
            }
            msg("outcome_b1[" + ks + "]", sites.b1, sites.a1, tp + off,
                "face=" + std::to_string(face));

            t.die_face = face;
            t.outcome = Outcome::bit(face == 0 ? 0 : 1);
            t.alice_view = (long long)j * faces + face;
            return finish();
        }
        throw contract_error("batch loop exceeded its cap");
    }

    Transcript finish() {
        if (!t.outcome.well_formed()) throw contract_error("run ended without an outcome");
        return std::move(t);
    }
};

} // namespace

transcript::Transcript run_die_roll(const ProtocolParams& p, std::uint64_t seed) {
    p.validate();
    if (p.protocol != "dieroll") throw param_error("params are not for dieroll");
    DieRollRun run(p, seed);
    return run.run();
}

} // namespace vbct::protocols
