#include "vbct/protocols.hpp"

#include <cmath>
#include <set>

namespace vbct::protocols {

double ProtocolParams::tolerance() const {
    return timing_tolerance > 0.0 ? timing_tolerance : 1e-6 * site_distance;
}

double ProtocolParams::window() const {
    return sustain_window > 0.0 ? sustain_window : 4.0 * site_distance;
}

void ProtocolParams::validate() const {
    static const std::set<std::string> known = {"vbct1", "vbct2", "vbct3", "vbct4", "dieroll"};
    if (!known.count(protocol)) throw param_error("unknown protocol id '" + protocol + "'");
    if (n_states < 2) throw param_error("batch size must be at least 2");
    if (test_exponent < 1 || test_exponent > 24)
        throw param_error("test exponent must lie in 1..24");
    if (mask_length < 1 || mask_length > 64) throw param_error("mask length must lie in 1..64");
    if (!(site_distance > 0.0)) throw param_error("site distance must be positive");
    if (!(lab_offset > 0.0) || lab_offset > site_distance / 10.0)
        throw param_error("lab offset must be positive and at most a tenth of the separation");
    if (site_slack < 0.0 || site_slack >= lab_offset)
        throw param_error("site slack must be nonnegative and below the lab offset");
    if (timing_tolerance < 0.0) throw param_error("timing tolerance must be nonnegative");
    if (sustain_window < 0.0) throw param_error("sustain window must be nonnegative");

    if (protocol == "vbct1") {
        if (!(poisson_mean > 0.0) || poisson_mean > 500.0)
            throw param_error("round count mean must lie in (0, 500]");
        if (!(round_interval > 0.0)) throw param_error("round interval must be positive");
        if (bias.theta < 0.0) throw param_error("vbct1 needs the angular bias parameter");
    } else if (protocol == "dieroll") {
        if (die_faces < 2) throw param_error("a die needs at least 2 faces");
        if (dice.size() < 2) throw param_error("the dice set needs at least 2 dice");
        if (die_choice < 0 || die_choice >= int(dice.size()))
            throw param_error("die choice out of range");
        for (const auto& d : dice) {
            if (int(d.size()) != die_faces)
                throw param_error("every die needs one probability per face");
            double sum = 0.0;
            for (double q : d) {
                if (q < 0.0 || q > 1.0) throw param_error("face probabilities must lie in [0,1]");
                sum += q;
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw param_error("face probabilities must sum to 1");
        }
    } else {
        if (bias.alpha0_sq < 0.0 || bias.alpha1_sq < 0.0)
            throw param_error(protocol + " needs the amplitude bias parameters");
        if (protocol == "vbct4") {
            double z0 = bias.alpha0_sq * n_states;
            double z1 = bias.alpha1_sq * n_states;
            if (std::fabs(z0 - std::round(z0)) > 1e-9 || std::fabs(z1 - std::round(z1)) > 1e-9)
                throw param_error("row zero-counts must be whole: alpha^2 * N integral");
        }
    }
}

SiteLayout make_sites(const ProtocolParams& p) {
    using spacetime::Position;
    using spacetime::Site;
    double d = p.site_distance, off = p.lab_offset, s = p.site_slack;
    return SiteLayout{
        Site{Party::Alice, 1, Position{0.0}, s},     Site{Party::Bob, 1, Position{off}, s},
        Site{Party::Alice, 2, Position{d}, s},       Site{Party::Bob, 2, Position{d + off}, s},
        Site{Party::Alice, 3, Position{2 * d}, s},   Site{Party::Bob, 3, Position{2 * d + off}, s},
    };
}

namespace detail {

void check_strategies(const ProtocolParams& p, const Strategy& alice, const Strategy& bob) {
    if (alice.party != Party::Alice || bob.party != Party::Bob)
        throw param_error("strategies assigned to the wrong parties");
    if (alice.protocol != p.protocol || bob.protocol != p.protocol)
        throw param_error("strategy protocol does not match the run");
    // re-validate: descriptors may have been built without from_config
    (void)Strategy::from_config(alice.party, alice.protocol, alice.name, alice.params);
    (void)Strategy::from_config(bob.party, bob.protocol, bob.name, bob.params);
}

bool refuses(const Strategy& s, int step) {
    return s.name == "refuse" && int(s.required("at_step")) == step;
}

} // namespace detail

transcript::Transcript run_protocol(const ProtocolParams& p, const Strategy& alice,
                                    const Strategy& bob, int w, std::uint64_t seed) {
    if (p.protocol == "vbct1") return run_vbct1(p, alice, bob, w, seed);
    if (p.protocol == "vbct2") return run_vbct2(p, alice, bob, w, seed);
    if (p.protocol == "vbct3") return run_vbct3(p, alice, bob, w, seed);
    if (p.protocol == "vbct4") return run_vbct4(p, alice, bob, w, seed);
    if (p.protocol == "dieroll") {
        if (!alice.is_honest() || !bob.is_honest())
            throw param_error("die rolls support honest strategies only");
        return run_die_roll(p, seed);
    }
    throw param_error("unknown protocol id '" + p.protocol + "'");
}

} // namespace vbct::protocols
