#include "vbct/spacetime.hpp"

#include <cmath>
#include <unordered_map>
#include <utility>

namespace vbct::spacetime {

std::string Site::name() const {
    return std::string(owner == Party::Alice ? "A" : "B") + std::to_string(index);
}

double distance(const Position& a, const Position& b) {
    if (a.empty() || a.size() > 3 || a.size() != b.size())
        throw contract_error("position dimension must match and lie in 1..3");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Interval interval_class(const Event& a, const Event& b) {
    double dx = distance(a.position, b.position);
    double dt = a.time - b.time;
    double s2 = dt * dt - dx * dx;
    if (std::fabs(s2) <= kTimingTolerance) return Interval::Lightlike;
    return s2 > 0.0 ? Interval::Timelike : Interval::Spacelike;
}

namespace {

void check_finite(double t, const char* what) {
    if (!std::isfinite(t)) throw contract_error(std::string(what) + " must be finite");
}

} // namespace

TimedMessage::TimedMessage(unchecked_t, std::string label_, const Site& sender_,
                           const Site& receiver_, double emit_time, double receive_time,
                           std::string payload_)
    : label(std::move(label_)),
      sender(sender_),
      receiver(receiver_),
      emission{emit_time, sender_.position},
      reception{receive_time, receiver_.position},
      payload(std::move(payload_)) {
    check_finite(emit_time, "emission time");
    check_finite(receive_time, "reception time");
}

TimedMessage::TimedMessage(std::string label_, const Site& sender_, const Site& receiver_,
                           double emit_time, double receive_time, std::string payload_)
    : TimedMessage(unchecked_t{}, std::move(label_), sender_, receiver_, emit_time,
                   receive_time, std::move(payload_)) {
    double tol = kTimingTolerance + sender.slack + receiver.slack;
    double lower = emit_time + distance(sender.position, receiver.position);
    if (receive_time < lower - tol)
        throw contract_error("message '" + label + "' would arrive before light can");
}

TimedMessage make_faulted_message(std::string label, const Site& sender, const Site& receiver,
                                  double emit_time, double receive_time, std::string payload) {
    TimedMessage m(TimedMessage::unchecked_t{}, std::move(label), sender, receiver, emit_time,
                   receive_time, std::move(payload));
    m.faulted = true;
    return m;
}

double earliest_arrival(const Site& from, const Site& to, double emit_time) {
    return emit_time + distance(from.position, to.position);
}

bool verify_independence(const TimedMessage& m1, const TimedMessage& m2) {
    return interval_class(m1.emission, m2.emission) == Interval::Spacelike;
}

const char* violation_name(ViolationType t) {
    switch (t) {
        case ViolationType::Superluminal: return "superluminal";
        case ViolationType::IndependenceViolated: return "independence_violated";
        case ViolationType::DelayViolated: return "delay_violated";
    }
    return "unknown";
}

ScheduleConstraint ScheduleConstraint::independent(std::string first, std::string second,
                                                   std::string note) {
    ScheduleConstraint c;
    c.kind = Kind::Independent;
    c.first = std::move(first);
    c.second = std::move(second);
    c.note = std::move(note);
    return c;
}

ScheduleConstraint ScheduleConstraint::min_delay(std::string first, Anchor first_anchor,
                                                 std::string second, Anchor second_anchor,
                                                 double delay, std::string note) {
    ScheduleConstraint c;
    c.kind = Kind::MinDelay;
    c.first = std::move(first);
    c.second = std::move(second);
    c.first_anchor = first_anchor;
    c.second_anchor = second_anchor;
    c.delay = delay;
    c.note = std::move(note);
    return c;
}

ScheduleConstraint ScheduleConstraint::exact_delay(std::string first, Anchor first_anchor,
                                                   std::string second, Anchor second_anchor,
                                                   double delay, std::string note) {
    ScheduleConstraint c = min_delay(std::move(first), first_anchor, std::move(second),
                                     second_anchor, delay, std::move(note));
    c.kind = Kind::ExactDelay;
    return c;
}

namespace {

const Event& anchored(const TimedMessage& m, ScheduleConstraint::Anchor a) {
    return a == ScheduleConstraint::Anchor::Emission ? m.emission : m.reception;
}

} // namespace

std::vector<Violation> verify_schedule(const std::vector<TimedMessage>& transcript,
                                       const std::vector<ScheduleConstraint>& constraints) {
    std::unordered_map<std::string, const TimedMessage*> by_label;
    by_label.reserve(transcript.size());
    for (const TimedMessage& m : transcript) {
        if (!by_label.emplace(m.label, &m).second)
            throw contract_error("duplicate message label '" + m.label + "'");
    }

    std::vector<Violation> out;
    for (const TimedMessage& m : transcript) {
        double tol = kTimingTolerance + m.sender.slack + m.receiver.slack;
        double lower = m.emission.time + distance(m.sender.position, m.receiver.position);
        if (m.reception.time < lower - tol) {
            out.push_back({ViolationType::Superluminal, m.label, "", m.emission, m.reception,
                           "reception precedes light arrival"});
        }
    }

    auto lookup = [&](const std::string& label) -> const TimedMessage& {
        auto it = by_label.find(label);
        if (it == by_label.end())
            throw contract_error("constraint references unknown message '" + label + "'");
        return *it->second;
    };

    for (const ScheduleConstraint& c : constraints) {
        const TimedMessage& m1 = lookup(c.first);
        const TimedMessage& m2 = lookup(c.second);
        const Event& e1 = anchored(m1, c.first_anchor);
        const Event& e2 = anchored(m2, c.second_anchor);
        switch (c.kind) {
            case ScheduleConstraint::Kind::Independent:
                if (interval_class(e1, e2) != Interval::Spacelike)
                    out.push_back({ViolationType::IndependenceViolated, c.first, c.second, e1,
                                   e2, c.note});
                break;
            case ScheduleConstraint::Kind::MinDelay:
                if (e2.time - e1.time < c.delay - c.tolerance)
                    out.push_back(
                        {ViolationType::DelayViolated, c.first, c.second, e1, e2, c.note});
                break;
            case ScheduleConstraint::Kind::ExactDelay:
                if (std::fabs((e2.time - e1.time) - c.delay) > c.tolerance)
                    out.push_back(
                        {ViolationType::DelayViolated, c.first, c.second, e1, e2, c.note});
                break;
        }
    }
    return out;
}

} // namespace vbct::spacetime
