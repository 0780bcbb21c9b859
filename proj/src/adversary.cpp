#include "vbct/adversary.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace vbct::adversary {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ParamRule {
    const char* key;
    double min;
    double max;
    bool min_open;
    bool max_open;
    bool integer;
    bool required;
    double fallback; // applied when !required and absent
};

struct NameRule {
    const char* name;
    bool alice_ok;
    bool bob_ok;
    std::set<std::string> protocols; // empty set = any
    std::vector<ParamRule> params;
};

const std::vector<NameRule>& rules() {
    static const std::vector<NameRule> r = {
        {"honest", true, true, {}, {}},
        {"alice_vbct1_substitution",
         true,
         false,
         {"vbct1"},
         {{"delta", 0.0, 1.0, false, false, false, true, 0.0},
          {"gamma", 0.0, 1.0, true, false, false, false, 1.0}}},
        {"bob_vbct1_measure",
         false,
         true,
         {"vbct1"},
         {{"basis_angle", 0.0, kPi, false, true, false, true, 0.0},
          {"flip", 0.0, 1.0, false, false, true, false, 0.0}}},
        {"alice_vbct2_z_mismatch",
         true,
         false,
         {"vbct2", "vbct3"},
         {{"z1", 0.0, 1.0, false, false, true, false, 0.0},
          {"z2", 0.0, 1.0, false, false, true, false, 1.0}}},
        {"bob_vbct2_substitution",
         false,
         true,
         {"vbct2"},
         {{"delta", 0.0, 1.0, false, false, false, true, 0.0}}},
        {"alice_vbct2_spoil_supplementary", true, false, {"vbct2"}, {}},
        {"alice_vbct3_premature_commit",
         true,
         false,
         {"vbct3"},
         {{"factor", 0.0, 1.0, true, true, false, false, 0.5}}},
        {"bob_vbct3_unveil_forge",
         false,
         true,
         {"vbct3"},
         {{"flip_mask", 1.0, 1e18, false, false, true, false, 1.0}}},
        {"bob_vbct3_premature_unveil",
         false,
         true,
         {"vbct3"},
         {{"advance", 0.0, 1e18, true, false, false, true, 0.0}}},
        {"bob_vbct4_malformed_pair", false, true, {"vbct4"}, {}},
        {"refuse", true, true, {}, {{"at_step", 1.0, 1e9, false, false, true, true, 0.0}}},
    };
    return r;
}

void check_protocol_id(const std::string& protocol) {
    static const std::set<std::string> known = {"vbct1", "vbct2", "vbct3", "vbct4", "dieroll"};
    if (!known.count(protocol)) throw param_error("unknown protocol id '" + protocol + "'");
}

} // namespace

StrategyDescriptor StrategyDescriptor::honest(Party party, std::string protocol) {
    return from_config(party, std::move(protocol), "honest", {});
}

std::vector<std::string> strategy_names(Party party, const std::string& protocol) {
    check_protocol_id(protocol);
    std::vector<std::string> names;
    for (const NameRule& r : rules()) {
        if (!(party == Party::Alice ? r.alice_ok : r.bob_ok)) continue;
        if (!r.protocols.empty() && !r.protocols.count(protocol)) continue;
        names.emplace_back(r.name);
    }
    return names;
}

StrategyDescriptor StrategyDescriptor::from_config(Party party, std::string protocol,
                                                   std::string name,
                                                   std::map<std::string, double> params) {
    check_protocol_id(protocol);
    const NameRule* rule = nullptr;
    for (const NameRule& r : rules())
        if (name == r.name) rule = &r;
    if (!rule) throw param_error("unknown strategy '" + name + "'");

    bool party_ok = party == Party::Alice ? rule->alice_ok : rule->bob_ok;
    if (!party_ok)
        throw param_error("strategy '" + name + "' does not apply to " + party_name(party));
    if (!rule->protocols.empty() && !rule->protocols.count(protocol))
        throw param_error("strategy '" + name + "' does not apply to protocol " + protocol);

    for (const auto& [key, value] : params) {
        const ParamRule* pr = nullptr;
        for (const ParamRule& p : rule->params)
            if (key == p.key) pr = &p;
        if (!pr)
            throw param_error("strategy '" + name + "' has no parameter '" + key + "'");
        bool below = pr->min_open ? value <= pr->min : value < pr->min;
        bool above = pr->max_open ? value >= pr->max : value > pr->max;
        if (!std::isfinite(value) || below || above)
            throw param_error("parameter '" + key + "' out of range for '" + name + "'");
        if (pr->integer && value != std::floor(value))
            throw param_error("parameter '" + key + "' must be an integer for '" + name + "'");
    }
    for (const ParamRule& p : rule->params) {
        if (!params.count(p.key)) {
            if (p.required)
                throw param_error("strategy '" + name + "' requires parameter '" +
                                  std::string(p.key) + "'");
            params[p.key] = p.fallback;
        }
    }
    if (name == "alice_vbct2_z_mismatch" && params.at("z1") == params.at("z2"))
        throw param_error("z claims must differ for a z mismatch");

    return StrategyDescriptor{party, std::move(protocol), std::move(name), std::move(params)};
}

double StrategyDescriptor::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double StrategyDescriptor::required(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end())
        throw param_error("strategy '" + name + "' is missing parameter '" + key + "'");
    return it->second;
}

qstate::StateVector vbct1_cheat_state(double p_max, double delta) {
    double p = p_max + delta;
    if (p_max < 0.0 || p_max > 1.0 || delta < 0.0 || p > 1.0 + 1e-12)
        throw param_error("substituted outcome-0 weight must stay in [0,1]");
    p = std::min(p, 1.0);
    double cp = std::sqrt(p), cm = std::sqrt(1.0 - p);
    const double inv_sqrt2 = 0.70710678118654752440;
    // amplitudes in the computational basis: |+> = (1,1)/sqrt2, |-> = (1,-1)/sqrt2
    return qstate::StateVector({(cp + cm) * inv_sqrt2, (cp - cm) * inv_sqrt2});
}

int vbct1_cheat_label(double delta) { return delta >= 0.0 ? 0 : 1; }

double vbct1_guess_success(double theta, double basis_angle, int flip) {
    if (theta < 0.0 || theta > kPi / 2) throw param_error("theta must lie in [0, pi/2]");
    if (basis_angle < 0.0 || basis_angle >= kPi)
        throw param_error("basis angle must lie in [0, pi)");
    if (flip != 0 && flip != 1) throw param_error("flip must be 0 or 1");
    qstate::StateVector e0({std::cos(basis_angle), std::sin(basis_angle)});
    double hit0 = qstate::pure_overlap_prob(e0, qstate::make_vbct1_state(theta, 0));
    double hit1 = 1.0 - qstate::pure_overlap_prob(e0, qstate::make_vbct1_state(theta, 1));
    double success = 0.5 * (hit0 + hit1);
    return flip ? 1.0 - success : success;
}

qstate::StateVector vbct2_cheat_pair(double p_max, double delta) {
    double p = p_max + delta;
    if (p_max < 0.0 || p_max > 1.0 || delta < 0.0 || p > 1.0 + 1e-12)
        throw param_error("substituted outcome-0 weight must stay in [0,1]");
    return qstate::make_pair_state(std::min(p, 1.0));
}

} // namespace vbct::adversary
