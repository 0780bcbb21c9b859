#include "vbct/transcript.hpp"

#include <cstdio>
#include <cstring>

namespace vbct::transcript {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const char* outcome_name(OutcomeValue v) {
    switch (v) {
        case OutcomeValue::Zero: return "0";
        case OutcomeValue::One: return "1";
        case OutcomeValue::Abort: return "abort";
    }
    return "?";
}

const char* abort_reason_name(AbortReason r) {
    switch (r) {
        case AbortReason::None: return "none";
        case AbortReason::Timing: return "timing";
        case AbortReason::FailedHonestyTest: return "failed_honesty_test";
        case AbortReason::InvalidUnveiling: return "invalid_unveiling";
        case AbortReason::Refusal: return "refusal";
        case AbortReason::ZMismatch: return "z_mismatch";
        case AbortReason::PostOutcomeTest: return "post_outcome_test";
    }
    return "?";
}

Outcome Outcome::bit(int c) {
    if (c != 0 && c != 1) throw contract_error("coin outcome must be 0 or 1");
    return {c == 0 ? OutcomeValue::Zero : OutcomeValue::One, AbortReason::None};
}

Outcome Outcome::abort(AbortReason r) {
    if (r == AbortReason::None) throw contract_error("abort needs a reason");
    return {OutcomeValue::Abort, r};
}

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_u64(std::string& out, std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    out += buf;
}

const char* anchor_name(spacetime::ScheduleConstraint::Anchor a) {
    return a == spacetime::ScheduleConstraint::Anchor::Emission ? "emit" : "recv";
}

} // namespace

std::string Transcript::serialize() const {
    if (!outcome.well_formed()) throw contract_error("outcome and abort reason disagree");
    std::string out;
    out.reserve(256 + messages.size() * 128);
    out += "transcript v1\n";
    out += "protocol " + protocol + "\n";
    out += "seed ";
    append_u64(out, seed);
    out += "\nw " + std::to_string(w) + "\n";
    out += "alice_strategy " + alice_strategy + "\n";
    out += "bob_strategy " + bob_strategy + "\n";
    out += "outcome ";
    out += outcome_name(outcome.value);
    out += " ";
    out += abort_reason_name(outcome.reason);
    out += "\ndetection " + std::to_string(detection ? 1 : 0) + "\n";
    out += "batches " + std::to_string(batches) + "\n";
    out += "tested " + std::to_string(tested) + "\n";
    out += "passed " + std::to_string(passed) + "\n";
    out += "cheat_tested " + std::to_string(cheat_tested) + "\n";
    out += "cheat_passed " + std::to_string(cheat_passed) + "\n";
    out += "view " + std::to_string(alice_view) + "\n";
    out += "a " + std::to_string(a_bit) + "\n";
    out += "b " + std::to_string(b_bit) + "\n";
    out += "face " + std::to_string(die_face) + "\n";
    if (has_messages) {
        for (const auto& m : messages) {
            out += "msg " + m.label + " " + m.sender.name() + " " + m.receiver.name() + " ";
            append_double(out, m.emission.time);
            out += " ";
            append_double(out, m.emission.position[0]);
            out += " ";
            append_double(out, m.reception.time);
            out += " ";
            append_double(out, m.reception.position[0]);
            out += m.faulted ? " faulted " : " ok ";
            append_u64(out, fnv1a64(m.payload));
            out += "\n";
        }
        for (const auto& c : constraints) {
            using K = spacetime::ScheduleConstraint::Kind;
            out += "constraint ";
            if (c.kind == K::Independent) {
                out += "independent " + c.first + " " + c.second;
            } else {
                out += c.kind == K::MinDelay ? "min_delay " : "exact_delay ";
                out += c.first + ":" + anchor_name(c.first_anchor) + " " + c.second + ":" +
                       anchor_name(c.second_anchor) + " ";
                append_double(out, c.delay);
            }
            if (!c.note.empty()) out += " # " + c.note;
            out += "\n";
        }
    }
    out += "end ";
    append_u64(out, fnv1a64(out));
    out += "\n";
    return out;
}

std::uint64_t Transcript::digest() const {
    std::string s = serialize();
    return parse_digest_line(s);
}

std::uint64_t parse_digest_line(const std::string& serialized) {
    auto pos = serialized.rfind("end ");
    if (pos == std::string::npos || (pos != 0 && serialized[pos - 1] != '\n'))
        throw param_error("serialized transcript has no digest line");
    unsigned long long v = 0;
    if (std::sscanf(serialized.c_str() + pos, "end %llu", &v) != 1)
        throw param_error("malformed digest line");
    return v;
}

} // namespace vbct::transcript
