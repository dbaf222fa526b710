// src/laws.cpp
#include "elmsim/laws.hpp"

#include <algorithm>
#include <cmath>

namespace elmsim {

std::string to_string(DecayMode mode) {
    return mode == DecayMode::PerStep ? "perstep" : "continuous";
}

DecayMode decay_mode_from_string(const std::string& text) {
    if (text == "perstep") return DecayMode::PerStep;
    if (text == "continuous") return DecayMode::ContinuousRate;
    throw ConfigError("unknown decay mode '" + text + "' (expected perstep|continuous)");
}

void ForgettingLaw::validate() const {
    if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw ConfigError("forgetting.gamma0 must lie in (0, 1)");
    if (!(beta > 0.0)) throw ConfigError("forgetting.beta must be > 0");
    if (!(dt_ref > 0.0)) throw ConfigError("forgetting.dt_ref must be > 0");
}

void EffortLaw::validate() const {
    if (!(tau_inf > 0.0)) throw ConfigError("effort.tau_inf must be > 0");
    if (!(a >= 0.0)) throw ConfigError("effort.a must be >= 0");
    if (!(b > 0.0)) throw ConfigError("effort.b must be > 0");
}

double gamma_of(std::uint32_t s, const ForgettingLaw& law) {
    return law.gamma0 * std::exp(-static_cast<double>(s) / law.beta);
}

double tau_of(std::uint32_t s, const EffortLaw& law) {
    return law.tau_inf + law.a * std::exp(-static_cast<double>(s) / law.b);
}

double rate_of(std::uint32_t s, const ForgettingLaw& law) {
    return gamma_of(s, law) / law.dt_ref;
}

double decay_factor(std::uint32_t s, const ForgettingLaw& law, double dt) {
    if (!(dt > 0.0)) throw ConfigError("decay step dt must be > 0");
    if (law.mode == DecayMode::PerStep) return 1.0 - gamma_of(s, law);
    const double lambda_dt = rate_of(s, law) * dt;
    if (lambda_dt >= 1.0) {
        throw ConfigError("continuous decay unstable: lambda*dt >= 1, reduce dt");
    }
    return 1.0 - lambda_dt;
}

ElementState decay_step(ElementState state, const ForgettingLaw& law, double dt) {
    state.z = std::clamp(state.z * decay_factor(state.s, law, dt), 0.0, 1.0);
    return state;
}

double closed_form_decay(double z0, double gamma_step, std::uint64_t n) {
    // Same rounded factor the stepper multiplies by, so the two agree to
    // accumulated rounding only.
    return z0 * std::pow(1.0 - gamma_step, static_cast<double>(n));
}

std::pair<ElementState, double> access(ElementState state, const EffortLaw& law) {
    state.s += 1;
    state.z = 1.0;
    return {state, tau_of(state.s, law)};
}

}  // namespace elmsim
