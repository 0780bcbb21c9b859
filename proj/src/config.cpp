#include "vbct/config.hpp"

#include "vbct/adversary.hpp"
#include "vbct/qstate.hpp"

#include "json.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace vbct::config {

namespace {

using nlohmann::json;

std::string quote_name(const std::string& s) { return "'" + s + "'"; }

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw param_error("config has unknown key " + quote_name(where + item.key()));
}

const json* find(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw param_error("config field " + quote_name(path) + " must be a number");
    return v.get<double>();
}

long long as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw param_error("config field " + quote_name(path) + " must be an integer");
    return v.get<long long>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    throw param_error("config field " + quote_name(path) + " must be a nonnegative integer");
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw param_error("config field " + quote_name(path) + " must be a boolean");
    return v.get<bool>();
}

protocols::Strategy parse_strategy(Party party, const std::string& protocol, const json& obj,
                                   const std::string& where) {
    if (!obj.is_object()) throw param_error("config section " + quote_name(where) + " must be an object");
    reject_unknown(obj, where + ".", {"strategy", "params"});
    std::string name = "honest";
    if (const json* v = find(obj, "strategy")) {
        if (!v->is_string())
            throw param_error("config field " + quote_name(where + ".strategy") + " must be a string");
        name = v->get<std::string>();
    }
    const auto valid = adversary::strategy_names(party, protocol);
    if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
        std::string msg = "unknown strategy " + quote_name(name) + " in " + quote_name(where) +
                          "; valid for this party and protocol:";
        for (const auto& n : valid) msg += " " + n;
        throw param_error(msg);
    }
    std::map<std::string, double> sparams;
    if (const json* v = find(obj, "params")) {
        if (!v->is_object())
            throw param_error("config field " + quote_name(where + ".params") + " must be an object");
        for (const auto& item : v->items())
            sparams[item.key()] = as_double(item.value(), where + ".params." + item.key());
    }
    return protocols::Strategy::from_config(party, protocol, name, std::move(sparams));
}

} // namespace

ScenarioConfig ScenarioConfig::from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw param_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw param_error("config root must be a JSON object");

    const json* proto = find(j, "protocol");
    if (!proto || !proto->is_string())
        throw param_error("config needs a string field 'protocol'");
    const std::string protocol = proto->get<std::string>();

    std::set<std::string> allowed = {"protocol", "trials", "seed",  "sites", "timing",
                                     "alice",    "bob",    "output", "report"};
    if (protocol == "vbct1") {
        allowed.insert({"bias", "rounds", "w"});
    } else if (protocol == "vbct2") {
        allowed.insert({"bias", "batch", "supplementary", "w"});
    } else if (protocol == "vbct3") {
        allowed.insert({"bias", "batch", "commitment", "supplementary", "w"});
    } else if (protocol == "vbct4") {
        allowed.insert({"bias", "batch", "commitment", "w"});
    } else if (protocol == "dieroll") {
        allowed.insert({"die", "batch"});
    } else {
        throw param_error("unknown protocol " + quote_name(protocol) +
                          "; valid: vbct1 vbct2 vbct3 vbct4 dieroll");
    }
    reject_unknown(j, "", allowed);

    ScenarioConfig cfg;
    cfg.params.protocol = protocol;
    if (const json* v = find(j, "trials")) cfg.trials = as_int(*v, "trials");
    if (const json* v = find(j, "seed")) cfg.seed = as_u64(*v, "seed");

    if (const json* v = find(j, "w")) {
        if (v->is_string()) {
            if (v->get<std::string>() != "mix")
                throw param_error("config field 'w' must be 0, 1, or \"mix\"");
            cfg.w = -1;
        } else {
            const long long wv = as_int(*v, "w");
            if (wv != 0 && wv != 1) throw param_error("config field 'w' must be 0, 1, or \"mix\"");
            cfg.w = static_cast<int>(wv);
        }
    }

    if (const json* v = find(j, "bias")) {
        if (!v->is_object()) throw param_error("config section 'bias' must be an object");
        if (protocol == "vbct1") {
            reject_unknown(*v, "bias.", {"theta"});
            const json* th = find(*v, "theta");
            if (!th) throw param_error("config field 'bias.theta' is required for vbct1");
            cfg.params.bias = qstate::BiasParams::angle(as_double(*th, "bias.theta"));
        } else {
            reject_unknown(*v, "bias.", {"alpha0_sq", "alpha1_sq"});
            const json* a0 = find(*v, "alpha0_sq");
            const json* a1 = find(*v, "alpha1_sq");
            if (!a0 || !a1)
                throw param_error(
                    "config fields 'bias.alpha0_sq' and 'bias.alpha1_sq' are both required");
            const double w0 = as_double(*a0, "bias.alpha0_sq");
            const double w1 = as_double(*a1, "bias.alpha1_sq");
            if (!(w1 < w0))
                throw param_error("config field 'bias.alpha1_sq' must lie below 'bias.alpha0_sq': "
                                  "the bias range needs p_min < p_max");
            cfg.params.bias = qstate::BiasParams::amplitudes(w0, w1);
        }
    } else if (protocol != "dieroll") {
        throw param_error("config section 'bias' is required for " + protocol);
    }

    if (const json* v = find(j, "rounds")) {
        if (!v->is_object()) throw param_error("config section 'rounds' must be an object");
        reject_unknown(*v, "rounds.", {"poisson_mean", "interval"});
        if (const json* m = find(*v, "poisson_mean"))
            cfg.params.poisson_mean = as_double(*m, "rounds.poisson_mean");
        if (const json* i = find(*v, "interval"))
            cfg.params.round_interval = as_double(*i, "rounds.interval");
    }

    if (const json* v = find(j, "batch")) {
        if (!v->is_object()) throw param_error("config section 'batch' must be an object");
        reject_unknown(*v, "batch.", {"states", "test_exponent"});
        if (const json* s = find(*v, "states"))
            cfg.params.n_states = static_cast<int>(as_int(*s, "batch.states"));
        if (const json* m = find(*v, "test_exponent"))
            cfg.params.test_exponent = static_cast<int>(as_int(*m, "batch.test_exponent"));
    }

    if (const json* v = find(j, "commitment")) {
        if (!v->is_object()) throw param_error("config section 'commitment' must be an object");
        reject_unknown(*v, "commitment.", {"mask_length"});
        if (const json* l = find(*v, "mask_length"))
            cfg.params.mask_length = static_cast<int>(as_int(*l, "commitment.mask_length"));
    }

    if (const json* v = find(j, "supplementary"))
        cfg.params.supplementary = as_bool(*v, "supplementary");

    if (const json* v = find(j, "sites")) {
        if (!v->is_object()) throw param_error("config section 'sites' must be an object");
        reject_unknown(*v, "sites.", {"distance", "lab_offset", "slack"});
        if (const json* d = find(*v, "distance"))
            cfg.params.site_distance = as_double(*d, "sites.distance");
        if (const json* o = find(*v, "lab_offset"))
            cfg.params.lab_offset = as_double(*o, "sites.lab_offset");
        if (const json* s = find(*v, "slack"))
            cfg.params.site_slack = as_double(*s, "sites.slack");
    }

    if (const json* v = find(j, "timing")) {
        if (!v->is_object()) throw param_error("config section 'timing' must be an object");
        reject_unknown(*v, "timing.", {"tolerance", "sustain_window"});
        if (const json* t = find(*v, "tolerance"))
            cfg.params.timing_tolerance = as_double(*t, "timing.tolerance");
        if (const json* s = find(*v, "sustain_window"))
            cfg.params.sustain_window = as_double(*s, "timing.sustain_window");
    }

    if (const json* v = find(j, "die")) {
        if (!v->is_object()) throw param_error("config section 'die' must be an object");
        reject_unknown(*v, "die.", {"faces", "dice", "choice"});
        if (const json* f = find(*v, "faces"))
            cfg.params.die_faces = static_cast<int>(as_int(*f, "die.faces"));
        if (const json* c = find(*v, "choice"))
            cfg.params.die_choice = static_cast<int>(as_int(*c, "die.choice"));
        const json* dice = find(*v, "dice");
        if (!dice) throw param_error("config field 'die.dice' is required for dieroll");
        if (!dice->is_array()) throw param_error("config field 'die.dice' must be an array");
        for (std::size_t k = 0; k < dice->size(); ++k) {
            const json& row = (*dice)[k];
            const std::string path = "die.dice[" + std::to_string(k) + "]";
            if (!row.is_array()) throw param_error("config field " + quote_name(path) + " must be an array");
            std::vector<double> probs;
            for (std::size_t f = 0; f < row.size(); ++f)
                probs.push_back(as_double(row[f], path + "[" + std::to_string(f) + "]"));
            cfg.params.dice.push_back(std::move(probs));
        }
    } else if (protocol == "dieroll") {
        throw param_error("config section 'die' is required for dieroll");
    }

    cfg.alice = protocols::Strategy::honest(Party::Alice, protocol);
    cfg.bob = protocols::Strategy::honest(Party::Bob, protocol);
    if (const json* v = find(j, "alice")) cfg.alice = parse_strategy(Party::Alice, protocol, *v, "alice");
    if (const json* v = find(j, "bob")) cfg.bob = parse_strategy(Party::Bob, protocol, *v, "bob");

    if (const json* v = find(j, "output")) {
        if (!v->is_object()) throw param_error("config section 'output' must be an object");
        reject_unknown(*v, "output.", {"full_runs"});
        if (const json* f = find(*v, "full_runs"))
            cfg.full_runs = static_cast<int>(as_int(*f, "output.full_runs"));
    }

    if (const json* v = find(j, "report")) {
        if (!v->is_object()) throw param_error("config section 'report' must be an object");
        reject_unknown(*v, "report.", {"bootstrap", "leakage_allowance"});
        if (const json* b = find(*v, "bootstrap"))
            cfg.report.bootstrap_resamples = static_cast<int>(as_int(*b, "report.bootstrap"));
        if (const json* a = find(*v, "leakage_allowance"))
            cfg.report.leakage_allowance = as_double(*a, "report.leakage_allowance");
    }

    cfg.validate();
    return cfg;
}

void ScenarioConfig::validate() const {
    if (trials < 1 || trials > 100000000)
        throw param_error("config field 'trials' must lie in 1..100000000");
    if (full_runs < 0 || full_runs > 1000)
        throw param_error("config field 'output.full_runs' must lie in 0..1000");
    if (w < -1 || w > 1) throw param_error("config field 'w' must be 0, 1, or \"mix\"");
    if (report.bootstrap_resamples < 0 || report.bootstrap_resamples > 10000)
        throw param_error("config field 'report.bootstrap' must lie in 0..10000");
    if (!(report.leakage_allowance > 0.0))
        throw param_error("config field 'report.leakage_allowance' must be positive");
    params.validate();
    protocols::detail::check_strategies(params, alice, bob);
}

std::string ScenarioConfig::canonical() const {
    validate();
    json j;
    j["protocol"] = params.protocol;
    j["trials"] = trials;
    j["seed"] = seed;
    if (params.protocol != "dieroll") j["w"] = w < 0 ? json("mix") : json(w);

    if (params.protocol == "vbct1") {
        j["bias"] = {{"theta", params.bias.theta}};
        j["rounds"] = {{"poisson_mean", params.poisson_mean}, {"interval", params.round_interval}};
    } else if (params.protocol == "dieroll") {
        j["die"] = {{"faces", params.die_faces}, {"dice", params.dice}, {"choice", params.die_choice}};
        j["batch"] = {{"states", params.n_states}, {"test_exponent", params.test_exponent}};
    } else {
        j["bias"] = {{"alpha0_sq", params.bias.alpha0_sq}, {"alpha1_sq", params.bias.alpha1_sq}};
        j["batch"] = {{"states", params.n_states}, {"test_exponent", params.test_exponent}};
        if (params.protocol != "vbct2") j["commitment"] = {{"mask_length", params.mask_length}};
        if (params.protocol != "vbct4") j["supplementary"] = params.supplementary;
    }

    j["sites"] = {{"distance", params.site_distance},
                  {"lab_offset", params.lab_offset},
                  {"slack", params.site_slack}};
    j["timing"] = {{"tolerance", params.timing_tolerance},
                   {"sustain_window", params.sustain_window}};
    j["alice"] = {{"strategy", alice.name}, {"params", json(alice.params)}};
    j["bob"] = {{"strategy", bob.name}, {"params", json(bob.params)}};
    j["output"] = {{"full_runs", full_runs}};
    j["report"] = {{"bootstrap", report.bootstrap_resamples},
                   {"leakage_allowance", report.leakage_allowance}};
    return j.dump(2) + "\n";
}

} // namespace vbct::config
