// include/elmsim/laws.hpp
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace elmsim {

/// Raised for any configuration or argument that violates a model invariant.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// How the forgetting coefficient is applied on each integration step.
///
///   PerStep        Z <- Z * (1 - gamma(s)), once per step, independent of dt.
///                  This is how the reference Pascal programs integrate.
///   ContinuousRate Z <- Z * (1 - lambda(s) * dt), lambda(s) = gamma(s) / dt_ref,
///                  so trajectories converge as dt shrinks.
enum class DecayMode { PerStep, ContinuousRate };

std::string to_string(DecayMode mode);
DecayMode decay_mode_from_string(const std::string& text);

/**
 * @brief Access-count dependent forgetting coefficient.
 *
 *   gamma(s) = gamma0 * exp(-s / beta)
 *
 * gamma0 is the per-step coefficient of an element that was never used.
 * dt_ref is the step that gamma0 was calibrated against; it only matters
 * in ContinuousRate mode.
 */
struct ForgettingLaw {
    double gamma0 = 0.002;
    double beta = 1.0;
    DecayMode mode = DecayMode::PerStep;
    double dt_ref = 0.001;

    /// Throws ConfigError unless 0 < gamma0 < 1, beta > 0, dt_ref > 0.
    void validate() const;

    friend bool operator==(const ForgettingLaw&, const ForgettingLaw&) = default;
};

/// Effort (time spent on one use) as a function of prior uses:
///   tau(s) = tau_inf + a * exp(-s / b)
struct EffortLaw {
    double tau_inf = 1.0;
    double a = 1.5;
    double b = 5.0;

    void validate() const;

    friend bool operator==(const EffortLaw&, const EffortLaw&) = default;
};

/// Knowledge state of one element of learning material.
struct ElementState {
    std::uint32_t s = 0;  // access count
    double z = 0.0;       // knowledge level in [0, 1]

    friend bool operator==(const ElementState&, const ElementState&) = default;
};

double gamma_of(std::uint32_t s, const ForgettingLaw& law);
double tau_of(std::uint32_t s, const EffortLaw& law);

/// Continuous decay rate (per UEV) implied by the law: gamma(s) / dt_ref.
double rate_of(std::uint32_t s, const ForgettingLaw& law);

/**
 * @brief One integration step of forgetting for a single element.
 *
 * PerStep ignores the numeric value of dt apart from requiring it positive.
 * ContinuousRate throws ConfigError when lambda(s) * dt >= 1, where the
 * explicit update would overshoot zero.
 */
ElementState decay_step(ElementState state, const ForgettingLaw& law, double dt);

/// Multiplicative factor one decay_step applies to Z; shared with the engine.
double decay_factor(std::uint32_t s, const ForgettingLaw& law, double dt);

/// Z0 * (1 - gamma_step)^n in closed form.
double closed_form_decay(double z0, double gamma_step, std::uint64_t n);

/// Use the element once: s <- s + 1, Z <- 1. The returned effort is
/// tau evaluated at the incremented count.
std::pair<ElementState, double> access(ElementState state, const EffortLaw& law);

}  // namespace elmsim
