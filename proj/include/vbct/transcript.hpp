#pragma once

#include "vbct/common.hpp"
#include "vbct/spacetime.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vbct::transcript {

// FNV-1a 64-bit over raw bytes; stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes);

enum class OutcomeValue { Zero, One, Abort };

enum class AbortReason {
    None,
    Timing,
    FailedHonestyTest,
    InvalidUnveiling,
    Refusal,
    ZMismatch,
    PostOutcomeTest
};

const char* outcome_name(OutcomeValue v);
const char* abort_reason_name(AbortReason r);

struct Outcome {
    OutcomeValue value = OutcomeValue::Abort;
    AbortReason reason = AbortReason::None;

    static Outcome bit(int c);
    static Outcome abort(AbortReason r);
    bool aborted() const { return value == OutcomeValue::Abort; }
    // Abort carries a reason, plain outcomes never do.
    bool well_formed() const { return aborted() == (reason != AbortReason::None); }
};

// One protocol run. Summary fields are always filled; the message list and
// schedule constraints are recorded only when the run was asked to keep them.
struct Transcript {
    std::string protocol;
    std::uint64_t seed = 0;
    int w = 0; // Bob's input
    std::string alice_strategy = "honest";
    std::string bob_strategy = "honest";

    Outcome outcome;
    bool detection = false; // an honest party flagged misbehavior
    int batches = 0;        // batch count, or the drawn n for the round-based protocol
    int tested = 0;         // honesty-test measurements performed
    int passed = 0;         // of those, how many passed
    int cheat_tested = 0;   // tests that hit a deviating state; 0 on honest runs
    int cheat_passed = 0;   // deviating states that escaped detection
    long long alice_view = 0; // minimal view token for information estimates
    int a_bit = -1;           // recorded label of the toss state, when meaningful
    int b_bit = -1;           // recorded guess bit, when meaningful
    int die_face = -1;        // die-roll result; -1 for two-outcome protocols

    bool has_messages = false;
    std::vector<spacetime::TimedMessage> messages;
    std::vector<spacetime::ScheduleConstraint> constraints;

    // Line-delimited text; doubles printed with %.17g so equal runs are
    // byte-identical. The last line carries the digest of everything above.
    std::string serialize() const;
    std::uint64_t digest() const;
};

// Parses only the trailing digest line of a serialized transcript.
std::uint64_t parse_digest_line(const std::string& serialized);

} // namespace vbct::transcript
