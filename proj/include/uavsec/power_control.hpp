#pragma once
#include <vector>

#include "uavsec/scenario.hpp"

namespace uavsec {

/// One per-slot power allocation problem:
///   maximize sum_n log2(1 + a_n p_n) - log2(1 + b_n p_n)
///   s.t. mean(p) <= avg_power, 0 <= p_n <= peak_power.
/// a_n are the legitimate-link gain coefficients, b_n the eavesdropper ones
/// (a constant sequence when the eavesdropper channel does not depend on n).
struct PowerInstance {
    std::vector<double> legit_gain;   // a_n > 0
    std::vector<double> eaves_gain;   // b_n > 0
    double avg_power_w = 0.0;
    double peak_power_w = 0.0;
};

/// Unconstrained stationary point of log2(1+a p) - log2(1+b p) - lambda p:
///   sqrt((1/(2b) - 1/(2a))^2 + (1/b - 1/a)/(lambda ln 2)) - 1/(2b) - 1/(2a).
/// Requires a > b and lambda > 0; throws std::domain_error otherwise.
double phat(double a, double b, double lambda);

/// Closed-form optimum of the PowerInstance. Slots with a_n <= b_n get zero
/// power; the rest get min([phat]+, peak) with the multiplier lambda* found
/// by bisection on the average-power constraint (lambda* = 0 when all active
/// slots at peak power already fit the budget).
PowerProfile optimal_power(const PowerInstance& inst);

/// Objective value of a profile under an instance (sum form, bps/Hz).
double power_objective(const PowerInstance& inst, const PowerProfile& profile);

} // namespace uavsec
