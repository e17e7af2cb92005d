#pragma once
#include <cstdint>

#include "uavsec/scenario.hpp"

namespace uavsec {

/// Squared 3D distance between the UAV at (uav, altitude) and a ground point.
double sq_dist(Vec2 uav_xy, Vec2 node_xy, double altitude_m);

/// Line-of-sight rate log2(1 + ref_snr * power / d^2) in bps/Hz.
double rate_los(double power_w, double sq_dist_m2, double ref_snr);

/// Worst-case ground-to-eavesdropper rate log2(1 + ref_snr * power / d_ge^kappa),
/// the fading-averaged rate bounded from above at unit mean gain.
double ge_rate_bound(double power_w, double d_ge_m, double kappa, double ref_snr);

/// Average U2G secrecy rate: per-slot legitimate-minus-eavesdropper rate
/// clamped at zero, averaged over the flight.
double secrecy_rate_u2g(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

/// Same sum without the per-slot clamp (slot terms may be negative).
double secrecy_rate_u2g_smooth(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

/// Average G2U secrecy rate against the worst-case eavesdropper bound.
double secrecy_rate_g2u(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

/// Unclamped variant of the above.
double secrecy_rate_g2u_smooth(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

struct McEstimate {
    double mean = 0.0;       // bps/Hz
    double std_error = 0.0;
};

/// Sample mean of log2(1 + ref_snr * power * zeta / d_ge^kappa) over unit-mean
/// exponential fading draws. Deterministic for a fixed seed.
McEstimate mc_ge_rate(double power_w, double d_ge_m, double kappa, double ref_snr,
                      int n_samples, std::uint64_t seed);

} // namespace uavsec
