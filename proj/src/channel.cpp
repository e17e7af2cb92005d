#include "uavsec/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavsec/rng.hpp"

namespace uavsec {

namespace {

// log2(1 + x) through log1p, accurate for x << 1.
double log2p1(double x) { return std::log1p(x) / std::numbers::ln2; }

void check_lengths(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    if (traj.size() != s.num_slots || power.size() != s.num_slots)
        throw std::invalid_argument("trajectory/power length does not match scenario num_slots");
}

} // namespace

double sq_dist(Vec2 uav_xy, Vec2 node_xy, double altitude_m) {
    return sq_norm(uav_xy - node_xy) + altitude_m * altitude_m;
}

double rate_los(double power_w, double sq_dist_m2, double ref_snr) {
    return log2p1(ref_snr * power_w / sq_dist_m2);
}

double ge_rate_bound(double power_w, double d_ge_m, double kappa, double ref_snr) {
    return log2p1(ref_snr * power_w / std::pow(d_ge_m, kappa));
}

double secrecy_rate_u2g(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    check_lengths(s, traj, power);
    double sum = 0.0;
    for (int n = 0; n < s.num_slots; ++n) {
        const double p = power.powers_w[n];
        const double legit = rate_los(p, sq_dist(traj.at(n), s.ground_pos, s.altitude_m), s.ref_snr);
        const double leak = rate_los(p, sq_dist(traj.at(n), s.eaves_pos, s.altitude_m), s.ref_snr);
        sum += std::max(legit - leak, 0.0);
    }
    return sum / s.num_slots;
}

double secrecy_rate_u2g_smooth(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    check_lengths(s, traj, power);
    double sum = 0.0;
    for (int n = 0; n < s.num_slots; ++n) {
        const double p = power.powers_w[n];
        sum += rate_los(p, sq_dist(traj.at(n), s.ground_pos, s.altitude_m), s.ref_snr)
             - rate_los(p, sq_dist(traj.at(n), s.eaves_pos, s.altitude_m), s.ref_snr);
    }
    return sum / s.num_slots;
}

double secrecy_rate_g2u(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    check_lengths(s, traj, power);
    const double d_ge = s.eaves_gap_m();
    double sum = 0.0;
    for (int n = 0; n < s.num_slots; ++n) {
        const double q = power.powers_w[n];
        const double legit = rate_los(q, sq_dist(traj.at(n), s.ground_pos, s.altitude_m), s.ref_snr);
        const double leak = ge_rate_bound(q, d_ge, s.pathloss_exp, s.ref_snr);
        sum += std::max(legit - leak, 0.0);
    }
    return sum / s.num_slots;
}

double secrecy_rate_g2u_smooth(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    check_lengths(s, traj, power);
    const double d_ge = s.eaves_gap_m();
    double sum = 0.0;
    for (int n = 0; n < s.num_slots; ++n) {
        const double q = power.powers_w[n];
        sum += rate_los(q, sq_dist(traj.at(n), s.ground_pos, s.altitude_m), s.ref_snr)
             - ge_rate_bound(q, d_ge, s.pathloss_exp, s.ref_snr);
    }
    return sum / s.num_slots;
}

McEstimate mc_ge_rate(double power_w, double d_ge_m, double kappa, double ref_snr,
                      int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("mc_ge_rate: n_samples must be >= 1");
    const double c = ref_snr * power_w / std::pow(d_ge_m, kappa);
    if (c == 0.0) return {0.0, 0.0};
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double r = std::log1p(c * exponential_at(seed, static_cast<std::uint64_t>(i)))
                         / std::numbers::ln2;
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0);
    const double std_err = n_samples > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return {mean, std_err};
}

} // namespace uavsec
