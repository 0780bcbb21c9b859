#pragma once

#include "vbct/common.hpp"

#include <string>
#include <vector>

namespace vbct::spacetime {

// Spatial coordinates in light-seconds, 1 to 3 dimensions. Times in seconds, c = 1.
using Position = std::vector<double>;

// Base tolerance for every timing comparison, in seconds.
inline constexpr double kTimingTolerance = 1e-9;

struct Site {
    Party owner;
    int index;          // agent number within the party: 1, 2, 3
    Position position;
    double slack = 0.0; // laboratory extent; widens timing tolerances for this site

    std::string name() const; // "A1", "B3", ...
};

struct Event {
    double time;
    Position position;
};

// Euclidean separation. Dimension mismatch or dimension outside 1..3 is a
// contract error: coordinates are fixed per scenario, never mixed.
double distance(const Position& a, const Position& b);

enum class Interval { Spacelike, Lightlike, Timelike };

// Sign of (dt)^2 - |dx|^2, with |value| <= 1e-9 classified Lightlike.
// Lightlike counts as causal everywhere below: conservative for security.
Interval interval_class(const Event& a, const Event& b);

// A classical message pinned to the sites of its endpoints. The constructor
// enforces reception no earlier than emission plus light travel time (within
// kTimingTolerance plus the endpoint slacks); breaking that invariant is only
// possible through make_faulted_message, and verify_schedule reports it.
struct TimedMessage {
    std::string label; // unique id; schedule constraints reference it
    Site sender;
    Site receiver;
    Event emission;
    Event reception;
    std::string payload;
    bool faulted = false;

    TimedMessage(std::string label, const Site& sender, const Site& receiver,
                 double emit_time, double receive_time, std::string payload);

private:
    struct unchecked_t {};
    TimedMessage(unchecked_t, std::string label, const Site& sender, const Site& receiver,
                 double emit_time, double receive_time, std::string payload);
    friend TimedMessage make_faulted_message(std::string label, const Site& sender,
                                             const Site& receiver, double emit_time,
                                             double receive_time, std::string payload);
};

// Adversarial fault injection: skips the light-speed check and marks the message.
TimedMessage make_faulted_message(std::string label, const Site& sender, const Site& receiver,
                                  double emit_time, double receive_time, std::string payload);

// emit_time plus the light travel time between the two sites.
double earliest_arrival(const Site& from, const Site& to, double emit_time);

// True iff the two emission events are strictly spacelike separated.
// Symmetric in its arguments.
bool verify_independence(const TimedMessage& m1, const TimedMessage& m2);

enum class ViolationType { Superluminal, IndependenceViolated, DelayViolated };

const char* violation_name(ViolationType t);

struct ScheduleConstraint {
    enum class Kind { Independent, MinDelay, ExactDelay };
    enum class Anchor { Emission, Reception };

    Kind kind;
    std::string first;  // message label
    std::string second; // message label; delays measure second minus first
    Anchor first_anchor = Anchor::Emission;
    Anchor second_anchor = Anchor::Emission;
    double delay = 0.0;
    double tolerance = kTimingTolerance;
    std::string note;

    static ScheduleConstraint independent(std::string first, std::string second,
                                          std::string note = "");
    static ScheduleConstraint min_delay(std::string first, Anchor first_anchor,
                                        std::string second, Anchor second_anchor,
                                        double delay, std::string note = "");
    static ScheduleConstraint exact_delay(std::string first, Anchor first_anchor,
                                          std::string second, Anchor second_anchor,
                                          double delay, std::string note = "");
};

struct Violation {
    ViolationType type;
    std::string first_label;
    std::string second_label; // empty for Superluminal (single offending message)
    Event first_event;
    Event second_event;
    std::string note;
};

// Scans every message for light-speed violations, then checks each constraint.
// Empty result means the schedule is clean. Constraints referencing labels not
// present in the transcript, or transcripts with duplicate labels, are contract
// errors.
std::vector<Violation> verify_schedule(const std::vector<TimedMessage>& transcript,
                                       const std::vector<ScheduleConstraint>& constraints);

} // namespace vbct::spacetime
