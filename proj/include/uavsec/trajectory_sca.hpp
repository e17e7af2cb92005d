#pragma once
#include <vector>

#include "uavsec/convex_core.hpp"
#include "uavsec/scenario.hpp"

namespace uavsec {

/// Linearization point for one convexified trajectory step. u_slack holds the
/// squared ground distances at their binding equalities; t_slack holds the
/// squared eavesdropper distances shrunk 1e-6 (relative) toward H^2 so the
/// point is strictly interior for the t inequality.
struct FeasiblePoint {
    Trajectory trajectory;
    std::vector<double> u_slack;
    std::vector<double> t_slack;
};

/// Builds the slack variables for a feasible trajectory.
FeasiblePoint init_slacks(const Scenario& s, const Trajectory& traj);

/// Concave minorant of log2(1 + power_gain / u), expanded at u_fea:
///   log2(1 + P/u_fea) - P (u - u_fea) / (ln2 (u_fea^2 + P u_fea)).
/// Tight at u = u_fea; a global under-estimator elsewhere.
double surrogate_log(double u, double u_fea, double power_gain);

struct ScaStepResult {
    FeasiblePoint point;           // improved iterate, slacks re-bound
    double surrogate_objective;    // surrogate value at the new iterate, bps/Hz (slot mean)
    SolveDiagnostics diag;
};

/// One trajectory improvement for the downlink: maximizes the surrogate of
/// the smooth secrecy objective at fixed power. The returned trajectory is
/// feasible and the smooth objective never decreases beyond solver tolerance.
ScaStepResult sca_step_u2g(const Scenario& s, const FeasiblePoint& point,
                           const PowerProfile& power, double tol = 1e-8);

/// Uplink variant: the eavesdropper term does not depend on the trajectory,
/// so only the legitimate-rate surrogate is maximized.
ScaStepResult sca_step_g2u(const Scenario& s, const FeasiblePoint& point,
                           const PowerProfile& power, double tol = 1e-8);

/// Best-effort trajectory: fly straight to the point above the ground node at
/// maximum speed, hover while time permits, then fly to the final location,
/// arriving in the last slot. When time is too short to reach the node, the
/// turn point on the start->node segment is chosen by bisection so the total
/// path length equals v_max * T.
Trajectory bet_trajectory(const Scenario& s);

/// True when the endpoint gap leaves no slack in the mobility chain
/// (|final - start| >= N * D up to rounding); every scheme then flies the
/// same constant-speed straight line.
bool taut_chain(const Scenario& s);

/// The constant-speed straight line used in the taut case.
Trajectory chord_trajectory(const Scenario& s);

} // namespace uavsec
