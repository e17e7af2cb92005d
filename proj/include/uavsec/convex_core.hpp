#pragma once
#include <stdexcept>
#include <vector>

#include "uavsec/geometry.hpp"

namespace uavsec {

/// Mobility chain: N+1 step constraints anchored at both endpoints,
///   |z_1 - start| <= D, |z_{n+1} - z_n| <= D, |final - z_N| <= D.
struct MobilitySpec {
    Vec2 start;
    Vec2 finish;
    double step_bound_m = 0.0;   // D
};

/// Per-slot terms of one convexified trajectory iterate.
///
/// A slot with u_cost > 0 owns a slack variable u[n] bounded below by the
/// squared ground distance, contributing u_cost * u[n] to the minimized
/// objective. A slot with log_power > 0 owns a slack variable t[n] with
///   altitude_sq <= t[n] <= bound_x * x[n] + bound_y * y[n] + bound_0
/// (the linearized squared eavesdropper distance) and contributes
/// log2(1 + log_power / t[n]). Zero-power slots own neither variable and are
/// coupled to the rest only through the mobility chain.
struct SlotTerm {
    double u_cost = 0.0;
    double log_power = 0.0;
    double bound_x = 0.0;
    double bound_y = 0.0;
    double bound_0 = 0.0;
};

struct SubproblemSpec {
    int n_slots = 0;
    std::vector<SlotTerm> slots;
    Vec2 ground;               // center of the ground-distance constraints
    double altitude_sq = 0.0;  // H^2
    MobilitySpec mobility;
};

struct SolveDiagnostics {
    int newton_steps = 0;
    int outer_stages = 0;
    double kkt_stationarity = 0.0;   // inf-norm of the dual residual
    double duality_gap = 0.0;        // barrier gap bound m / eta
    double objective = 0.0;          // minimized objective at the iterate
    std::vector<double> stage_objectives;   // objective at each stage center
};

struct SubproblemSolution {
    std::vector<double> x, y;
    std::vector<double> t;    // floor value for slots without a t variable
    std::vector<double> u;    // binding value for slots without a u variable
    SolveDiagnostics diag;
};

/// Starting iterate; must be strictly feasible for every inequality.
/// Entries of t/u for slots without the corresponding variable are ignored.
struct WarmStart {
    std::vector<double> x, y, t, u;
};

struct InfeasibleStartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalBreakdownError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaxIterationsError : std::runtime_error {
    MaxIterationsError(const std::string& what, SubproblemSolution best_iterate)
        : std::runtime_error(what), best(std::move(best_iterate)) {}
    SubproblemSolution best;
};

/// Minimizes sum_n [u_cost_n u_n + log2(1 + P_n / t_n)] over the convex
/// feasible set above with a primal log-barrier interior-point method
/// (Newton inner steps, backtracking line search, barrier weight x10 per
/// stage). On return the duality gap, per-constraint complementarity, and
/// stationarity residual are all <= tol; the iterate is strictly feasible.
SubproblemSolution solve(const SubproblemSpec& spec, const WarmStart& warm, double tol = 1e-8);

} // namespace uavsec
