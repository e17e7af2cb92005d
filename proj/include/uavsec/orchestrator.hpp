#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsec/power_control.hpp"
#include "uavsec/scenario.hpp"

namespace uavsec {

enum class Scheme {
    TOptWithPc,      // joint trajectory + power block coordinate descent
    TOptWithoutPc,   // trajectory iterations with equal power
    BetWithPc,       // best-effort trajectory, closed-form power
    BetWithoutPc,    // best-effort trajectory, equal power
};

const char* scheme_name(Scheme scheme);          // e.g. "T-OPT-With-PC"
const char* scheme_slug(Scheme scheme);          // e.g. "t-opt-with-pc"
bool scheme_from_slug(const std::string& slug, Scheme& out);
std::vector<Scheme> all_schemes();

struct SolveReport {
    Trajectory trajectory;
    PowerProfile power;
    std::vector<double> objective_history;   // smooth objective per iteration, bps/Hz
    double clamped_objective = 0.0;          // per-slot clamped average secrecy rate
    int iterations = 0;
    Scheme scheme = Scheme::TOptWithPc;
    bool converged = false;
};

struct SolveOptions {
    double epsilon = 1e-4;       // relative-improvement stopping threshold
    int max_iter = 200;
    bool power_first = false;    // update power before the trajectory in each iteration
    double solver_tol = 1e-8;    // interior-point duality gap
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Alternating optimization: starting from the best-effort trajectory with
/// equal power, each iteration runs one trajectory improvement step and then
/// the closed-form power update, until the relative improvement of the smooth
/// objective drops below epsilon (absolute improvement when the objective is
/// not positive).
SolveReport solve_joint(const Scenario& s, const SolveOptions& opt = {});

/// Runs the named scheme. TOptWithPc delegates to solve_joint.
SolveReport solve_benchmark(const Scenario& s, Scheme scheme, const SolveOptions& opt = {});

/// Per-slot gain coefficients for the power subproblem at a fixed trajectory.
PowerInstance power_instance(const Scenario& s, const Trajectory& traj);

/// Smooth (unclamped) secrecy objective for the scenario direction, bps/Hz.
double smooth_objective(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

/// Clamped secrecy objective for the scenario direction, bps/Hz.
double clamped_objective(const Scenario& s, const Trajectory& traj, const PowerProfile& power);

} // namespace uavsec
