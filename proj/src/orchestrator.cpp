#include "uavsec/orchestrator.hpp"

#include <cmath>
#include <sstream>

#include "uavsec/channel.hpp"
#include "uavsec/trajectory_sca.hpp"

namespace uavsec {

namespace {

PowerProfile equal_power(const Scenario& s) {
    PowerProfile p;
    p.powers_w.assign(s.num_slots, s.avg_power_w);
    return p;
}

ScaStepResult trajectory_step(const Scenario& s, const FeasiblePoint& point,
                              const PowerProfile& power, double tol) {
    return s.direction == LinkDirection::U2G ? sca_step_u2g(s, point, power, tol)
                                             : sca_step_g2u(s, point, power, tol);
}

bool improvement_below(double prev, double curr, double epsilon) {
    // Relative rule, falling back to absolute improvement when the objective
    // is not positive.
    if (curr > 0.0) return (curr - prev) / curr < epsilon;
    return std::abs(curr - prev) < epsilon;
}

void check_finite(double value, Scheme scheme, int iteration) {
    if (std::isfinite(value)) return;
    std::ostringstream oss;
    oss << "non-finite objective in scheme " << scheme_name(scheme)
        << " at iteration " << iteration;
    throw SolverError(oss.str());
}

SolveReport finish(const Scenario& s, SolveReport report) {
    report.clamped_objective = clamped_objective(s, report.trajectory, report.power);
    return report;
}

} // namespace

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::TOptWithPc: return "T-OPT-With-PC";
        case Scheme::TOptWithoutPc: return "T-OPT-Without-PC";
        case Scheme::BetWithPc: return "BET-With-PC";
        case Scheme::BetWithoutPc: return "BET-Without-PC";
    }
    return "?";
}

const char* scheme_slug(Scheme scheme) {
    switch (scheme) {
        case Scheme::TOptWithPc: return "t-opt-with-pc";
        case Scheme::TOptWithoutPc: return "t-opt-without-pc";
        case Scheme::BetWithPc: return "bet-with-pc";
        case Scheme::BetWithoutPc: return "bet-without-pc";
    }
    return "?";
}

bool scheme_from_slug(const std::string& slug, Scheme& out) {
    for (Scheme s : all_schemes()) {
        if (slug == scheme_slug(s) || slug == scheme_name(s)) {
            out = s;
            return true;
        }
    }
    return false;
}

std::vector<Scheme> all_schemes() {
    return {Scheme::TOptWithPc, Scheme::TOptWithoutPc, Scheme::BetWithPc, Scheme::BetWithoutPc};
}

PowerInstance power_instance(const Scenario& s, const Trajectory& traj) {
    PowerInstance inst;
    inst.avg_power_w = s.avg_power_w;
    inst.peak_power_w = s.peak_power_w;
    inst.legit_gain.resize(s.num_slots);
    inst.eaves_gain.resize(s.num_slots);
    const double eaves_const = s.ref_snr / std::pow(s.eaves_gap_m(), s.pathloss_exp);
    for (int n = 0; n < s.num_slots; ++n) {
        inst.legit_gain[n] = s.ref_snr / sq_dist(traj.at(n), s.ground_pos, s.altitude_m);
        inst.eaves_gain[n] = s.direction == LinkDirection::U2G
                                 ? s.ref_snr / sq_dist(traj.at(n), s.eaves_pos, s.altitude_m)
                                 : eaves_const;
    }
    return inst;
}

double smooth_objective(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    return s.direction == LinkDirection::U2G ? secrecy_rate_u2g_smooth(s, traj, power)
                                             : secrecy_rate_g2u_smooth(s, traj, power);
}

double clamped_objective(const Scenario& s, const Trajectory& traj, const PowerProfile& power) {
    return s.direction == LinkDirection::U2G ? secrecy_rate_u2g(s, traj, power)
                                             : secrecy_rate_g2u(s, traj, power);
}

SolveReport solve_joint(const Scenario& s, const SolveOptions& opt) {
    validate_or_throw(s);
    SolveReport report;
    report.scheme = Scheme::TOptWithPc;

    FeasiblePoint point = init_slacks(s, bet_trajectory(s));
    PowerProfile power = equal_power(s);
    double objective = smooth_objective(s, point.trajectory, power);
    check_finite(objective, report.scheme, 0);
    report.objective_history.push_back(objective);

    for (int k = 1; k <= opt.max_iter; ++k) {
        if (opt.power_first)
            power = optimal_power(power_instance(s, point.trajectory));
        point = trajectory_step(s, point, power, opt.solver_tol).point;
        if (!opt.power_first)
            power = optimal_power(power_instance(s, point.trajectory));
        const double next = smooth_objective(s, point.trajectory, power);
        check_finite(next, report.scheme, k);
        report.objective_history.push_back(next);
        report.iterations = k;
        if (improvement_below(objective, next, opt.epsilon)) {
            report.converged = true;
            objective = next;
            break;
        }
        objective = next;
    }

    report.trajectory = point.trajectory;
    report.power = power;
    return finish(s, report);
}

SolveReport solve_benchmark(const Scenario& s, Scheme scheme, const SolveOptions& opt) {
    if (scheme == Scheme::TOptWithPc) return solve_joint(s, opt);
    validate_or_throw(s);
    SolveReport report;
    report.scheme = scheme;

    if (scheme == Scheme::TOptWithoutPc) {
        FeasiblePoint point = init_slacks(s, bet_trajectory(s));
        const PowerProfile power = equal_power(s);
        double objective = smooth_objective(s, point.trajectory, power);
        check_finite(objective, scheme, 0);
        report.objective_history.push_back(objective);
        for (int k = 1; k <= opt.max_iter; ++k) {
            point = trajectory_step(s, point, power, opt.solver_tol).point;
            const double next = smooth_objective(s, point.trajectory, power);
            check_finite(next, scheme, k);
            report.objective_history.push_back(next);
            report.iterations = k;
            if (improvement_below(objective, next, opt.epsilon)) {
                report.converged = true;
                objective = next;
                break;
            }
            objective = next;
        }
        report.trajectory = point.trajectory;
        report.power = power;
        return finish(s, report);
    }

    report.trajectory = bet_trajectory(s);
    report.power = scheme == Scheme::BetWithPc
                       ? optimal_power(power_instance(s, report.trajectory))
                       : equal_power(s);
    report.iterations = scheme == Scheme::BetWithPc ? 1 : 0;
    report.converged = true;
    const double objective = smooth_objective(s, report.trajectory, report.power);
    check_finite(objective, scheme, 0);
    report.objective_history.push_back(objective);
    return finish(s, report);
}

} // namespace uavsec
