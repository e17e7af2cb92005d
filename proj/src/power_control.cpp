#include "uavsec/power_control.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavsec {

namespace {

void check_instance(const PowerInstance& inst) {
    if (inst.legit_gain.size() != inst.eaves_gain.size() || inst.legit_gain.empty())
        throw std::invalid_argument("power instance: gain sequences must be non-empty and equal-length");
    for (std::size_t n = 0; n < inst.legit_gain.size(); ++n)
        if (!(inst.legit_gain[n] > 0.0) || !(inst.eaves_gain[n] > 0.0))
            throw std::invalid_argument("power instance: gains must be positive");
    if (!(inst.avg_power_w > 0.0) || !(inst.peak_power_w > inst.avg_power_w))
        throw std::invalid_argument("power instance: requires 0 < avg_power < peak_power");
}

// Per-slot power at multiplier lambda: min([phat]+, peak) on active slots.
double slot_power(double a, double b, double lambda, double peak) {
    return std::min(std::max(phat(a, b, lambda), 0.0), peak);
}

} // namespace

double phat(double a, double b, double lambda) {
    if (!(a > b)) throw std::domain_error("phat: requires a > b");
    if (!(lambda > 0.0)) throw std::domain_error("phat: requires lambda > 0");
    // Conjugate form of sqrt((1/(2b) - 1/(2a))^2 + (1/b - 1/a)/(lambda ln2))
    // - 1/(2b) - 1/(2a): the direct expression cancels catastrophically when
    // b << a, losing ~8 digits of the small root.
    const double half_sum = 0.5 / b + 0.5 / a;
    const double half_diff = 0.5 / b - 0.5 / a;
    const double radicand = half_diff * half_diff + (1.0 / b - 1.0 / a) / (lambda * std::numbers::ln2);
    const double numerator = ((a - b) / (lambda * std::numbers::ln2) - 1.0) / (a * b);
    return numerator / (std::sqrt(radicand) + half_sum);
}

PowerProfile optimal_power(const PowerInstance& inst) {
    check_instance(inst);
    const int n_slots = static_cast<int>(inst.legit_gain.size());
    const double peak = inst.peak_power_w;
    const double avg = inst.avg_power_w;

    std::vector<int> active;
    for (int n = 0; n < n_slots; ++n)
        if (inst.legit_gain[n] > inst.eaves_gain[n]) active.push_back(n);

    PowerProfile profile;
    profile.powers_w.assign(n_slots, 0.0);
    if (active.empty()) return profile;

    auto mean_at = [&](double lambda) {
        double sum = 0.0;
        for (int n : active)
            sum += slot_power(inst.legit_gain[n], inst.eaves_gain[n], lambda, peak);
        return sum / n_slots;
    };
    auto fill_at = [&](double lambda) {
        for (int n : active)
            profile.powers_w[n] = slot_power(inst.legit_gain[n], inst.eaves_gain[n], lambda, peak);
    };

    // lambda -> 0+ drives every active slot to peak. If that already fits the
    // average budget the constraint is slack and lambda* = 0.
    const double peak_mean = static_cast<double>(active.size()) * peak / n_slots;
    if (peak_mean <= avg) {
        for (int n : active) profile.powers_w[n] = peak;
        return profile;
    }

    // Mean power is nonincreasing in lambda, so bisect for mean == avg. The
    // bisection runs to float resolution and keeps the feasible (mean <= avg)
    // side, so the budget undershoot is a few ulps rather than the 1e-9
    // feasibility tolerance, and re-optimizing an on-budget profile can never
    // lose measurable objective.
    double lo = 1e-12;                       // keeps phat defined
    double hi = 1.0;
    while (mean_at(hi) > avg) {
        hi *= 2.0;
        if (hi > 1e30) break;                // objective gradient bound reached
    }
    assert(mean_at(lo) >= mean_at(hi));
    double best_feasible = hi;               // mean_at(best_feasible) <= avg
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;   // bracket exhausted
        if (mean_at(mid) <= avg) {
            hi = mid;
            best_feasible = mid;
        } else {
            lo = mid;
        }
    }
    fill_at(best_feasible);
    return profile;
}

double power_objective(const PowerInstance& inst, const PowerProfile& profile) {
    if (profile.size() != static_cast<int>(inst.legit_gain.size()))
        throw std::invalid_argument("power_objective: profile length mismatch");
    double sum = 0.0;
    for (std::size_t n = 0; n < inst.legit_gain.size(); ++n) {
        const double p = profile.powers_w[n];
        sum += (std::log1p(inst.legit_gain[n] * p) - std::log1p(inst.eaves_gain[n] * p))
               / std::numbers::ln2;
    }
    return sum;
}

} // namespace uavsec
