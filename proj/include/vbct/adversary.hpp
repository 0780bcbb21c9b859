#pragma once

#include "vbct/common.hpp"
#include "vbct/qstate.hpp"

#include <map>
#include <string>
#include <vector>

namespace vbct::adversary {

// A strategy is an immutable descriptor interpreted by the protocol engines.
// Known names, their party / protocol applicability, and their parameters:
//
//   honest                            any party, any protocol
//   alice_vbct1_substitution          Alice, vbct1     delta in [0,1], gamma in (0,1]
//   bob_vbct1_measure                 Bob,   vbct1     basis_angle in [0,pi), flip in {0,1}
//   alice_vbct2_z_mismatch            Alice, vbct2/3   z1, z2 in {0,1}, z1 != z2
//   bob_vbct2_substitution            Bob,   vbct2     delta in [0,1]
//   alice_vbct2_spoil_supplementary   Alice, vbct2
//   alice_vbct3_premature_commit      Alice, vbct3     factor in (0,1)
//   bob_vbct3_unveil_forge            Bob,   vbct3     flip_mask integer >= 1
//   bob_vbct3_premature_unveil        Bob,   vbct3     advance > 0
//   bob_vbct4_malformed_pair          Bob,   vbct4
//   refuse                            any,   any       at_step integer >= 1
//
// Engines check deviations against the scenario bias (for example
// p_max + delta <= 1) because the bias is not known here.
struct StrategyDescriptor {
    Party party;
    std::string protocol; // vbct1, vbct2, vbct3, vbct4, dieroll
    std::string name;
    std::map<std::string, double> params;

    static StrategyDescriptor honest(Party party, std::string protocol);

    // Validates the name, applicability, and parameter ranges; fills defaults.
    static StrategyDescriptor from_config(Party party, std::string protocol, std::string name,
                                          std::map<std::string, double> params);

    bool is_honest() const { return name == "honest"; }

    // Parameter lookup; required() throws param_error when absent.
    double param(const std::string& key, double fallback) const;
    double required(const std::string& key) const;
};

// Strategy names applicable to this party and protocol, in table order.
std::vector<std::string> strategy_names(Party party, const std::string& protocol);

// Substituted single-qubit state pushing the outcome-0 weight to p_max + delta:
// sqrt(p_max+delta)|+> + sqrt(1-p_max-delta)|->.
qstate::StateVector vbct1_cheat_state(double p_max, double delta);

// With delta > 0 the substituted state passes the label-0 honesty test with
// the larger probability, so the cheater always declares label 0.
int vbct1_cheat_label(double delta);

// Probability that measuring one honest state (uniform label) in the basis
// {(cos f, sin f), (-sin f, cos f)} and reading outcome 0 as label 0 guesses
// the label correctly; flip inverts the reading.
double vbct1_guess_success(double theta, double basis_angle, int flip);

// Substituted pair state sqrt(p_max+delta)|00> + sqrt(1-p_max-delta)|11>,
// declared by the cheater as the higher-bias pair.
qstate::StateVector vbct2_cheat_pair(double p_max, double delta);

} // namespace vbct::adversary
