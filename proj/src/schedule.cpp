// src/schedule.cpp
#include "elmsim/schedule.hpp"

#include <cmath>
#include <limits>

#include "elmsim/laws.hpp"

namespace elmsim {

void LessonSchedule::validate() const {
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        if (!std::isfinite(w.start) || !std::isfinite(w.end) || !(w.start < w.end)) {
            throw ConfigError("lesson window " + std::to_string(i) + " must satisfy start < end");
        }
        if (i > 0 && !(windows[i - 1].end <= w.start)) {
            throw ConfigError("lesson windows must be ascending and non-overlapping");
        }
    }
}

double LessonSchedule::total_length() const {
    double total = 0.0;
    for (const auto& w : windows) total += w.length();
    return total;
}

bool in_lesson(double t, const LessonSchedule& schedule) {
    for (const auto& w : schedule.windows) {
        if (t < w.start) return false;
        if (t < w.end) return true;
    }
    return false;
}

std::string policy_name(const SelectionPolicy& policy) {
    struct Visitor {
        std::string operator()(const FixedTimes&) const { return "fixed_times"; }
        std::string operator()(const UniformRandom&) const { return "uniform_random"; }
        std::string operator()(const RoundRobin&) const { return "round_robin"; }
    };
    return std::visit(Visitor{}, policy);
}

void validate_policy(const SelectionPolicy& policy, std::uint32_t n) {
    if (const auto* fixed = std::get_if<FixedTimes>(&policy)) {
        for (std::size_t i = 0; i < fixed->accesses.size(); ++i) {
            const auto& a = fixed->accesses[i];
            if (a.element < 1 || a.element > n) {
                throw ConfigError("fixed_times entry " + std::to_string(i) + " references element " +
                                  std::to_string(a.element) + " outside [1, " + std::to_string(n) + "]");
            }
            if (i > 0 && !(fixed->accesses[i - 1].time < a.time)) {
                throw ConfigError("fixed_times must be strictly ascending in time");
            }
        }
    } else if (const auto* rr = std::get_if<RoundRobin>(&policy)) {
        if (rr->start < 1 || rr->start > n) throw ConfigError("round_robin.start must lie in [1, N]");
    }
}

std::string to_string(BusyPolicy policy) {
    switch (policy) {
        case BusyPolicy::SkipTime: return "skip_time";
        case BusyPolicy::FreezeActive: return "freeze_active";
        case BusyPolicy::DecayAll: return "decay_all";
    }
    return "?";
}

BusyPolicy busy_policy_from_string(const std::string& text) {
    if (text == "skip_time") return BusyPolicy::SkipTime;
    if (text == "freeze_active") return BusyPolicy::FreezeActive;
    if (text == "decay_all") return BusyPolicy::DecayAll;
    throw ConfigError("unknown busy policy '" + text + "'");
}

BusyRule busy_elapse(BusyPolicy policy) {
    switch (policy) {
        case BusyPolicy::SkipTime: return {true, false, false};
        case BusyPolicy::FreezeActive: return {false, false, true};
        case BusyPolicy::DecayAll: return {false, true, true};
    }
    return {};
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw ConfigError("uniform_below: bound must be positive");
    // Largest multiple of bound representable; values at or above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

Selector::Selector(SelectionPolicy policy, std::uint32_t n, std::uint64_t seed)
    : policy_(std::move(policy)), n_(n), rng_(seed) {
    if (n_ < 1) throw ConfigError("element count N must be >= 1");
    validate_policy(policy_, n_);
    if (const auto* rr = std::get_if<RoundRobin>(&policy_)) rr_next_ = rr->start;
}

Selection Selector::next_element(double t) {
    if (const auto* fixed = std::get_if<FixedTimes>(&policy_)) {
        if (fixed_cursor_ >= fixed->accesses.size()) return {Selection::Kind::Complete, 0};
        const auto& next = fixed->accesses[fixed_cursor_];
        if (t < next.time) return {};
        ++fixed_cursor_;
        return Selection::of(next.element);
    }
    if (std::holds_alternative<UniformRandom>(policy_)) {
        return Selection::of(static_cast<std::uint32_t>(uniform_below(rng_, n_)) + 1);
    }
    const std::uint32_t e = rr_next_;
    rr_next_ = rr_next_ == n_ ? 1 : rr_next_ + 1;
    return Selection::of(e);
}

}  // namespace elmsim
