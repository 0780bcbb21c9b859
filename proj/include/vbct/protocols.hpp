#pragma once

#include "vbct/adversary.hpp"
#include "vbct/qstate.hpp"
#include "vbct/rng.hpp"
#include "vbct/spacetime.hpp"
#include "vbct/transcript.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vbct::protocols {

// Shared run parameters. The bias is angular for the round-based protocol
// (vbct1) and amplitude-based for the batch protocols (vbct2/3/4). The die
// roll uses the dice table instead of the bias.
struct ProtocolParams {
    std::string protocol;        // vbct1, vbct2, vbct3, vbct4, dieroll
    qstate::BiasParams bias;
    int n_states = 20;           // batch size (vbct2/3, dieroll) or column count (vbct4)
    int test_exponent = 4;       // z-test exponent 2^-M (vbct2/3) or pair count (vbct4)
    double poisson_mean = 20.0;  // mean of the round count n (vbct1)
    int mask_length = 8;         // commitment blocks bits (vbct3/4)
    bool supplementary = false;  // optional post-outcome test (vbct2/3)
    double site_distance = 1.0;  // D, separation between near and far labs
    double lab_offset = 0.01;    // within-lab site separation
    double site_slack = 0.0;     // per-site timing slack
    double timing_tolerance = 0.0; // 0 selects the default 1e-6 * site_distance
    double sustain_window = 0.0;   // 0 selects the default 4 * site_distance
    double round_interval = 0.5;   // cadence of vbct1 rounds
    int die_faces = 2;
    std::vector<std::vector<double>> dice; // one probability vector per die
    int die_choice = 0;
    bool record_messages = true;

    double tolerance() const;
    double window() const;

    // Cross-field checks; throws param_error. Includes the whole-zero-count
    // requirement for vbct4 (alpha^2 * N must be integral, never rounded).
    void validate() const;
};

// Site positions on a line: A1 at 0, B1 at lab_offset, A2 at D,
// B2 at D + lab_offset, A3 at 2D, B3 at 2D + lab_offset.
struct SiteLayout {
    spacetime::Site a1, b1, a2, b2, a3, b3;
};
SiteLayout make_sites(const ProtocolParams& p);

using Strategy = adversary::StrategyDescriptor;

// Each run consumes one RNG stream derived from the seed; identical
// (params, strategies, w, seed) reproduce the transcript bit-exactly.
// Honest-honest runs never abort. Step numbering for the refuse strategy
// follows the engine's numbered phases:
//   vbct1:  1 agree n, 2 send states, 4 identities, 5 honesty checks,
//           6 announce n, 7 measure and reveal b, 8 final exchange
//   vbct2:  1 create batch, 2 announce z, 3 audit or choose, 4 measure,
//           5 supplementary test
//   vbct3:  1 create batch, 2 announce z, 4 audit, 5 start commitment,
//           6 commit, 8 unveil, 9 measure, 10 supplementary test
//   vbct4:  1 build matrix, 2 commit, 3 pick audit pairs, 4 verify audit,
//           5 select row and column, 6 final unveil
transcript::Transcript run_vbct1(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed);
transcript::Transcript run_vbct2(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed);
transcript::Transcript run_vbct3(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed);
transcript::Transcript run_vbct4(const ProtocolParams& p, const Strategy& alice,
                                 const Strategy& bob, int w, std::uint64_t seed);

// Honest-parties generalization to die_faces outcomes; Bob's chosen die is
// params.die_choice. The transcript's die_face field carries the result and
// the binary outcome value projects face == 0.
transcript::Transcript run_die_roll(const ProtocolParams& p, std::uint64_t seed);

// Dispatch by params.protocol; die rolls ignore the strategies (honest only).
transcript::Transcript run_protocol(const ProtocolParams& p, const Strategy& alice,
                                    const Strategy& bob, int w, std::uint64_t seed);

namespace detail {

// Shared engine plumbing.
void check_strategies(const ProtocolParams& p, const Strategy& alice, const Strategy& bob);
bool refuses(const Strategy& s, int step);

} // namespace detail

} // namespace vbct::protocols
