#pragma once

#include "vbct/common.hpp"
#include "vbct/spacetime.hpp"

#include <cstdint>
#include <vector>

namespace vbct::relcommit {

// Challenge-mask commitment: per value bit v with key block k and challenge
// block r, the committed record is s = k XOR (v AND r). Blocks hold L bits
// (1 <= L <= 64) in the low bits of a uint64. Hiding is perfect for uniform
// keys; unveiling a flipped bit without knowing r succeeds with probability
// exactly 2^-L, enforced relativistically by keeping r away from the agent
// who unveils.

struct MaskedRecord {
    std::vector<std::uint64_t> blocks; // one block per value bit
    bool degenerate = false;           // some challenge block was zero: that bit not binding
};

// Pure commit. Requires challenge.size() == value_bits.size(),
// shared_key.size() >= value_bits.size(), every block < 2^L, bits in {0,1}.
MaskedRecord commit_record(const std::vector<int>& value_bits,
                           const std::vector<std::uint64_t>& challenge,
                           const std::vector<std::uint64_t>& shared_key, int mask_length);

// Pure verification of an unveiling against a record, ignoring timing.
bool record_matches(const MaskedRecord& record, const std::vector<int>& claimed_value,
                    const std::vector<std::uint64_t>& claimed_key,
                    const std::vector<std::uint64_t>& challenge, int mask_length);

// Probability that a committer who decides the value only at unveil time
// passes verification of one bit: 2^-L.
double forge_success_probability(int mask_length);

enum class SessionState { Open, Committed, Unveiled, Failed };
enum class RejectReason { None, Timing, Mismatch };

struct UnveilResult {
    bool accepted;
    RejectReason reason;
};

// How the binding precondition is checked at unveil time.
//   StrictSpacelike: the unveil event must be spacelike separated from the
//     challenge reaching the committer's far agent.
//   SustainWindow: the unveil must land within a validity window after the
//     commit; the far agent never sees the challenge at all, which the
//     protocol engine enforces by construction.
enum class BindingMode { StrictSpacelike, SustainWindow };

class CommitmentSession {
public:
    CommitmentSession(Party committer, Party receiver, int mask_length, BindingMode mode,
                      double sustain_window = 0.0);

    // Open -> Committed. Stores the inputs needed for later verification.
    const MaskedRecord& commit(const std::vector<int>& value_bits,
                               const std::vector<std::uint64_t>& challenge,
                               const std::vector<std::uint64_t>& shared_key,
                               const spacetime::Event& commit_event);

    // Committed -> Unveiled | Failed. Timing is checked before content:
    // a badly timed unveil rejects with Timing even if the values match.
    // challenge_reception is the challenge's arrival event at the committer's
    // far agent; it is ignored under SustainWindow.
    UnveilResult unveil(const std::vector<int>& claimed_value,
                        const std::vector<std::uint64_t>& claimed_key,
                        const spacetime::Event& unveil_event,
                        const spacetime::Event& challenge_reception);

    SessionState state() const { return state_; }
    const MaskedRecord& record() const;
    int mask_length() const { return mask_length_; }
    BindingMode mode() const { return mode_; }
    Party committer() const { return committer_; }
    Party receiver() const { return receiver_; }
    const spacetime::Event& commit_event() const;

private:
    Party committer_;
    Party receiver_;
    int mask_length_;
    BindingMode mode_;
    double sustain_window_;
    SessionState state_ = SessionState::Open;
    std::vector<std::uint64_t> challenge_;
    MaskedRecord record_;
    spacetime::Event commit_event_{};
};

} // namespace vbct::relcommit
