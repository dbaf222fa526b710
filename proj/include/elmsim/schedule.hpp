// include/elmsim/schedule.hpp
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace elmsim {

/// Half-open interval [start, end) of simulated time during which the
/// learner works with the material.
struct LessonWindow {
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
    friend bool operator==(const LessonWindow&, const LessonWindow&) = default;
};

struct LessonSchedule {
    std::vector<LessonWindow> windows;

    /// Windows must be non-empty intervals, strictly ascending, non-overlapping.
    void validate() const;
    double total_length() const;

    friend bool operator==(const LessonSchedule&, const LessonSchedule&) = default;
};

bool in_lesson(double t, const LessonSchedule& schedule);

/// Element `element` (1-based) is used at the first step whose clock
/// reaches `time` while the learner is free.
struct ScheduledAccess {
    double time = 0.0;
    std::uint32_t element = 1;
    friend bool operator==(const ScheduledAccess&, const ScheduledAccess&) = default;
};

struct FixedTimes {
    std::vector<ScheduledAccess> accesses;
    friend bool operator==(const FixedTimes&, const FixedTimes&) = default;
};

/// Exactly uniform choice over 1..N. Seeded from SimulationConfig::seed.
struct UniformRandom {
    friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};

/// Cycles start, start+1, ..., N, 1, 2, ...
struct RoundRobin {
    std::uint32_t start = 1;
    friend bool operator==(const RoundRobin&, const RoundRobin&) = default;
};

using SelectionPolicy = std::variant<FixedTimes, UniformRandom, RoundRobin>;

std::string policy_name(const SelectionPolicy& policy);

/// Checks FixedTimes ordering and that every index lies in [1, n].
void validate_policy(const SelectionPolicy& policy, std::uint32_t n);

/// What decays while the learner is occupied with one element.
enum class BusyPolicy {
    SkipTime,      // the clock jumps over the effort interval, nothing decays
    FreezeActive,  // everything except the active element decays
    DecayAll,      // every element decays, the active one included
};

std::string to_string(BusyPolicy policy);
BusyPolicy busy_policy_from_string(const std::string& text);

struct BusyRule {
    bool jump_clock = false;
    bool decay_active = false;
    bool decay_others = false;
};

BusyRule busy_elapse(BusyPolicy policy);

/// Uniform integer in [0, bound) by rejection on the raw 64-bit output.
/// Does not depend on the standard library's distribution implementation,
/// so a seed reproduces the same sequence on every toolchain.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Outcome of asking a policy for the next element.
struct Selection {
    enum class Kind { Element, NotYet, Complete };
    Kind kind = Kind::NotYet;
    std::uint32_t element = 0;

    static Selection of(std::uint32_t e) { return {Kind::Element, e}; }
};

/**
 * Stateful cursor over a SelectionPolicy. One selector belongs to one run.
 *
 * The random generator is advanced only when a UniformRandom policy hands
 * out an element; fixed and round-robin policies never touch it.
 */
class Selector {
public:
    Selector(SelectionPolicy policy, std::uint32_t n, std::uint64_t seed);

    /// Next element for a learner that is free at clock `t`.
    Selection next_element(double t);

    const SelectionPolicy& policy() const { return policy_; }

private:
    SelectionPolicy policy_;
    std::uint32_t n_;
    std::mt19937_64 rng_;
    std::size_t fixed_cursor_ = 0;
    std::uint32_t rr_next_ = 1;
};

}  // namespace elmsim
