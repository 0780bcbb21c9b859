#include "vbct/relcommit.hpp"

#include <cmath>

namespace vbct::relcommit {

namespace {

void check_mask_length(int mask_length) {
    if (mask_length < 1 || mask_length > 64)
        throw param_error("mask length must lie in 1..64");
}

std::uint64_t block_mask(int mask_length) {
    return mask_length == 64 ? ~0ull : ((1ull << mask_length) - 1);
}

void check_blocks(const std::vector<std::uint64_t>& blocks, int mask_length, const char* what) {
    std::uint64_t mask = block_mask(mask_length);
    for (std::uint64_t b : blocks)
        if ((b & ~mask) != 0) throw param_error(std::string(what) + " block exceeds mask length");
}

void check_bits(const std::vector<int>& bits) {
    for (int v : bits)
        if (v != 0 && v != 1) throw param_error("value bits must be 0 or 1");
}

} // namespace

MaskedRecord commit_record(const std::vector<int>& value_bits,
                           const std::vector<std::uint64_t>& challenge,
                           const std::vector<std::uint64_t>& shared_key, int mask_length) {
    check_mask_length(mask_length);
    check_bits(value_bits);
    if (challenge.size() != value_bits.size())
        throw param_error("challenge must supply one block per value bit");
    if (shared_key.size() < value_bits.size())
        throw param_error("shared key must supply at least one block per value bit");
    check_blocks(challenge, mask_length, "challenge");
    check_blocks(shared_key, mask_length, "key");

    MaskedRecord rec;
    rec.blocks.resize(value_bits.size());
    for (std::size_t i = 0; i < value_bits.size(); ++i) {
        rec.blocks[i] = shared_key[i] ^ (value_bits[i] ? challenge[i] : 0ull);
        if (challenge[i] == 0) rec.degenerate = true;
    }
    return rec;
}

bool record_matches(const MaskedRecord& record, const std::vector<int>& claimed_value,
                    const std::vector<std::uint64_t>& claimed_key,
                    const std::vector<std::uint64_t>& challenge, int mask_length) {
    check_mask_length(mask_length);
    check_bits(claimed_value);
    if (claimed_value.size() != record.blocks.size() ||
        claimed_key.size() < claimed_value.size() || challenge.size() != claimed_value.size())
        throw param_error("unveiling lengths must match the committed record");
    check_blocks(claimed_key, mask_length, "key");
    for (std::size_t i = 0; i < claimed_value.size(); ++i) {
        std::uint64_t expect = claimed_key[i] ^ (claimed_value[i] ? challenge[i] : 0ull);
        if (expect != record.blocks[i]) return false;
    }
    return true;
}

double forge_success_probability(int mask_length) {
    check_mask_length(mask_length);
    return std::ldexp(1.0, -mask_length);
}

CommitmentSession::CommitmentSession(Party committer, Party receiver, int mask_length,
                                     BindingMode mode, double sustain_window)
    : committer_(committer),
      receiver_(receiver),
      mask_length_(mask_length),
      mode_(mode),
      sustain_window_(sustain_window) {
    check_mask_length(mask_length);
    if (mode == BindingMode::SustainWindow && sustain_window <= 0.0)
        throw param_error("sustain window must be positive in SustainWindow mode");
}

const MaskedRecord& CommitmentSession::commit(const std::vector<int>& value_bits,
                                              const std::vector<std::uint64_t>& challenge,
                                              const std::vector<std::uint64_t>& shared_key,
                                              const spacetime::Event& commit_event) {
    if (state_ != SessionState::Open) throw contract_error("commit requires an open session");
    record_ = commit_record(value_bits, challenge, shared_key, mask_length_);
    challenge_ = challenge;
    commit_event_ = commit_event;
    state_ = SessionState::Committed;
    return record_;
}

UnveilResult CommitmentSession::unveil(const std::vector<int>& claimed_value,
                                       const std::vector<std::uint64_t>& claimed_key,
                                       const spacetime::Event& unveil_event,
                                       const spacetime::Event& challenge_reception) {
    if (state_ != SessionState::Committed)
        throw contract_error("unveil requires a committed session");

    bool timing_ok;
    if (mode_ == BindingMode::StrictSpacelike) {
        timing_ok = spacetime::interval_class(unveil_event, challenge_reception) ==
                    spacetime::Interval::Spacelike;
    } else {
        timing_ok = unveil_event.time - commit_event_.time <=
                    sustain_window_ + spacetime::kTimingTolerance;
    }
    if (!timing_ok) {
        state_ = SessionState::Failed;
        return {false, RejectReason::Timing};
    }

    if (!record_matches(record_, claimed_value, claimed_key, challenge_, mask_length_)) {
        state_ = SessionState::Failed;
        return {false, RejectReason::Mismatch};
    }
    state_ = SessionState::Unveiled;
    return {true, RejectReason::None};
}

const MaskedRecord& CommitmentSession::record() const {
    if (state_ == SessionState::Open) throw contract_error("no record before commit");
    return record_;
}

const spacetime::Event& CommitmentSession::commit_event() const {
    if (state_ == SessionState::Open) throw contract_error("no commit event before commit");
    return commit_event_;
}

} // namespace vbct::relcommit
