#pragma once
#include <string>
#include <vector>

#include "uavsec/geometry.hpp"

namespace uavsec {

enum class LinkDirection { U2G, G2U };

/// Step-constraint slack in meters. Solver output is floating point; exact
/// comparisons against the per-slot travel bound would spuriously fail.
inline constexpr double kFeasTolM = 1e-6;

/// Immutable problem instance shared by all solvers. Positions are continuous
/// (no spatial grid), powers are stored in watts, ref_snr is linear.
struct Scenario {
    Vec2 ground_pos;             // legitimate ground node (m)
    Vec2 eaves_pos;              // eavesdropper (m)
    double altitude_m = 0.0;     // fixed flight altitude H
    double ref_snr = 0.0;        // SNR at 1 m per watt, linear
    double v_max = 0.0;          // max horizontal speed (m/s)
    double slot_len_s = 0.0;     // slot duration
    int num_slots = 0;           // N
    Vec2 start_pos;
    Vec2 final_pos;
    double avg_power_w = 0.0;    // average transmit power budget
    double peak_power_w = 0.0;   // per-slot transmit power cap
    double pathloss_exp = 3.0;   // ground-to-ground path-loss exponent (G2U eavesdropper)
    LinkDirection direction = LinkDirection::U2G;

    double flight_period_s() const { return slot_len_s * num_slots; }
    double max_step_m() const { return v_max * slot_len_s; }
    double eaves_gap_m() const { return dist(ground_pos, eaves_pos); }
};

/// Per-slot horizontal UAV positions, n = 1..N.
struct Trajectory {
    std::vector<double> xs;
    std::vector<double> ys;

    int size() const { return static_cast<int>(xs.size()); }
    Vec2 at(int n) const { return {xs[n], ys[n]}; }
};

/// Per-slot transmit powers in watts.
struct PowerProfile {
    std::vector<double> powers_w;

    int size() const { return static_cast<int>(powers_w.size()); }
    double mean() const;
};

struct ValidationError {
    std::string code;     // stable identifier, e.g. "InfeasibleEndpoints"
    std::string message;
};

/// Checks every scenario invariant. Returns an empty list when the scenario
/// is well formed. Codes include InfeasibleEndpoints (endpoints farther apart
/// than v_max * T) and BadPowerBudget (avg >= peak).
std::vector<ValidationError> validate(const Scenario& s);

/// Throws std::invalid_argument listing all violations.
void validate_or_throw(const Scenario& s);

/// True iff all N+1 step constraints (start->1, n->n+1, N->final) hold within
/// tol meters. Throws std::invalid_argument on a length mismatch.
bool is_feasible_trajectory(const Scenario& s, const Trajectory& traj, double tol = kFeasTolM);

} // namespace uavsec
