#include "uavsec/trajectory_sca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavsec/channel.hpp"

namespace uavsec {

namespace {

double log2p1(double x) { return std::log1p(x) / std::numbers::ln2; }

// Relative slack below which a slot counts as sitting on the eavesdropper
// vertical; its t variable would have an empty interior, so the step pins
// t = H^2 there (still a global minorant of the slot term). The pinned
// constant undershoots the slot term at the expansion point by at most
// kOverEavesRel / ln 2, which bounds the ascent slack it can introduce.
constexpr double kOverEavesRel = 1e-12;

// Piecewise path start -> mid (dwell) -> final traversed at v_max, sampled at
// t = n * slot_len, n = 1..N. The last slot is pinned to the final position.
Trajectory sample_path(const Scenario& s, Vec2 mid, double hover_s) {
    const int n_slots = s.num_slots;
    const double v = s.v_max;
    const double t1 = dist(s.start_pos, mid) / v;
    const double t2 = dist(mid, s.final_pos) / v;
    Trajectory traj;
    traj.xs.resize(n_slots);
    traj.ys.resize(n_slots);
    for (int n = 1; n <= n_slots; ++n) {
        Vec2 p;
        if (n == n_slots) {
            p = s.final_pos;
        } else {
            const double tau = n * s.slot_len_s;
            if (tau <= t1) {
                const double f = t1 > 0.0 ? tau / t1 : 1.0;
                p = s.start_pos + f * (mid - s.start_pos);
            } else if (tau <= t1 + hover_s) {
                p = mid;
            } else {
                const double f = t2 > 0.0 ? std::min((tau - t1 - hover_s) / t2, 1.0) : 1.0;
                p = mid + f * (s.final_pos - mid);
            }
        }
        traj.xs[n - 1] = p.x;
        traj.ys[n - 1] = p.y;
    }
    return traj;
}

void check_point(const Scenario& s, const FeasiblePoint& point, const PowerProfile& power) {
    if (point.trajectory.size() != s.num_slots || power.size() != s.num_slots
        || static_cast<int>(point.u_slack.size()) != s.num_slots)
        throw std::invalid_argument("sca step: point/power length does not match scenario");
    for (double u : point.u_slack)
        if (!(u > 0.0)) throw std::invalid_argument("sca step: u slacks must be positive");
}

// Strictly interior trajectory: the chord sampled with N+1 equal hops.
Trajectory interior_chord(const Scenario& s) {
    Trajectory traj;
    traj.xs.resize(s.num_slots);
    traj.ys.resize(s.num_slots);
    const Vec2 span = s.final_pos - s.start_pos;
    for (int n = 1; n <= s.num_slots; ++n) {
        const Vec2 p = s.start_pos + (static_cast<double>(n) / (s.num_slots + 1)) * span;
        traj.xs[n - 1] = p.x;
        traj.ys[n - 1] = p.y;
    }
    return traj;
}

// Builds the warm start by blending the current iterate toward the interior
// chord until every constraint of the subproblem holds strictly.
WarmStart make_warm_start(const Scenario& s, const SubproblemSpec& spec,
                          const Trajectory& current) {
    const Trajectory interior = interior_chord(s);
    const double h2 = spec.altitude_sq;
    WarmStart w;
    const int n = s.num_slots;
    w.x.resize(n);
    w.y.resize(n);
    w.t.assign(n, h2);
    w.u.assign(n, 0.0);

    double alpha = 1e-2;
    for (int attempt = 0; attempt < 80; ++attempt, alpha *= 0.5) {
        bool ok = true;
        for (int k = 0; k < n; ++k) {
            w.x[k] = (1.0 - alpha) * current.xs[k] + alpha * interior.xs[k];
            w.y[k] = (1.0 - alpha) * current.ys[k] + alpha * interior.ys[k];
        }
        for (int k = 0; k < n && ok; ++k) {
            const SlotTerm& slot = spec.slots[k];
            if (slot.u_cost > 0.0) {
                const double bind = sq_norm(Vec2{w.x[k], w.y[k]} - spec.ground) + h2;
                w.u[k] = bind * (1.0 + 1e-6);
            }
            if (slot.log_power > 0.0) {
                const double cap = slot.bound_x * w.x[k] + slot.bound_y * w.y[k] + slot.bound_0;
                if (!(cap - h2 > 1e-12 * h2)) {
                    ok = false;
                    break;
                }
                w.t[k] = h2 + (cap - h2) * (1.0 - 1e-6);
            }
        }
        if (ok) return w;
    }
    throw InfeasibleStartError("could not construct a strictly interior warm start");
}

ScaStepResult taut_step(const Scenario& s, const PowerProfile& power, bool u2g) {
    ScaStepResult res;
    res.point = init_slacks(s, chord_trajectory(s));
    double sum = 0.0;
    for (int k = 0; k < s.num_slots; ++k) {
        const double gain = s.ref_snr * power.powers_w[k];
        if (gain <= 0.0) continue;
        sum += log2p1(gain / res.point.u_slack[k]);
        if (u2g)
            sum -= log2p1(gain / sq_dist(res.point.trajectory.at(k), s.eaves_pos, s.altitude_m));
    }
    res.surrogate_objective = sum / s.num_slots;
    return res;
}

ScaStepResult run_step(const Scenario& s, const FeasiblePoint& point,
                       const PowerProfile& power, double tol, bool u2g) {
    check_point(s, point, power);
    if (taut_chain(s)) return taut_step(s, power, u2g);

    const int n = s.num_slots;
    const double h2 = s.altitude_m * s.altitude_m;

    SubproblemSpec spec;
    spec.n_slots = n;
    spec.slots.resize(n);
    spec.ground = s.ground_pos;
    spec.altitude_sq = h2;
    spec.mobility = {s.start_pos, s.final_pos, s.max_step_m()};

    double tight_const = 0.0;   // surrogate value minus the minimized objective, sum form
    for (int k = 0; k < n; ++k) {
        const double gain = s.ref_snr * power.powers_w[k];
        if (gain <= 0.0) continue;
        const double u_fea = point.u_slack[k];
        SlotTerm& slot = spec.slots[k];
        slot.u_cost = gain / (std::numbers::ln2 * (u_fea * u_fea + gain * u_fea));
        tight_const += log2p1(gain / u_fea) + slot.u_cost * u_fea;
        if (u2g) {
            const Vec2 fea = point.trajectory.at(k);
            const double t_bind = sq_dist(fea, s.eaves_pos, s.altitude_m);
            if (t_bind - h2 <= kOverEavesRel * h2) {
                tight_const -= log2p1(gain / h2);
            } else {
                slot.log_power = gain;
                slot.bound_x = 2.0 * (fea.x - s.eaves_pos.x);
                slot.bound_y = 2.0 * (fea.y - s.eaves_pos.y);
                slot.bound_0 = sq_norm(s.eaves_pos) - sq_norm(fea) + h2;
            }
        }
    }

    const WarmStart warm = make_warm_start(s, spec, point.trajectory);
    SubproblemSolution sol = solve(spec, warm, tol);

    ScaStepResult res;
    Trajectory traj{std::move(sol.x), std::move(sol.y)};
    if (!is_feasible_trajectory(s, traj))
        throw NumericalBreakdownError("sca step produced an infeasible trajectory");
    res.point = init_slacks(s, traj);
    res.surrogate_objective = (tight_const - sol.diag.objective) / n;
    res.diag = sol.diag;
    return res;
}

} // namespace

FeasiblePoint init_slacks(const Scenario& s, const Trajectory& traj) {
    if (traj.size() != s.num_slots)
        throw std::invalid_argument("init_slacks: trajectory length mismatch");
    const double h2 = s.altitude_m * s.altitude_m;
    FeasiblePoint fp;
    fp.trajectory = traj;
    fp.u_slack.resize(s.num_slots);
    fp.t_slack.resize(s.num_slots);
    for (int k = 0; k < s.num_slots; ++k) {
        fp.u_slack[k] = sq_dist(traj.at(k), s.ground_pos, s.altitude_m);
        const double t_bind = sq_dist(traj.at(k), s.eaves_pos, s.altitude_m);
        fp.t_slack[k] = h2 + (t_bind - h2) * (1.0 - 1e-6);
    }
    return fp;
}

double surrogate_log(double u, double u_fea, double power_gain) {
    if (!(u > 0.0) || !(u_fea > 0.0))
        throw std::invalid_argument("surrogate_log: u and u_fea must be positive");
    if (power_gain <= 0.0) return 0.0;
    return log2p1(power_gain / u_fea)
           - power_gain * (u - u_fea)
                 / (std::numbers::ln2 * (u_fea * u_fea + power_gain * u_fea));
}

ScaStepResult sca_step_u2g(const Scenario& s, const FeasiblePoint& point,
                           const PowerProfile& power, double tol) {
    return run_step(s, point, power, tol, true);
}

ScaStepResult sca_step_g2u(const Scenario& s, const FeasiblePoint& point,
                           const PowerProfile& power, double tol) {
    return run_step(s, point, power, tol, false);
}

bool taut_chain(const Scenario& s) {
    const double reach = s.num_slots * s.max_step_m();
    return dist(s.start_pos, s.final_pos) >= reach * (1.0 - 1e-9);
}

Trajectory chord_trajectory(const Scenario& s) {
    Trajectory traj;
    traj.xs.resize(s.num_slots);
    traj.ys.resize(s.num_slots);
    const Vec2 span = s.final_pos - s.start_pos;
    const double len = norm(span);
    const double step = s.max_step_m();
    for (int n = 1; n <= s.num_slots; ++n) {
        const double arc = std::min(n * step, len);
        const Vec2 p = len > 0.0 ? s.start_pos + (arc / len) * span : s.start_pos;
        traj.xs[n - 1] = p.x;
        traj.ys[n - 1] = p.y;
    }
    return traj;
}

Trajectory bet_trajectory(const Scenario& s) {
    if (taut_chain(s)) return chord_trajectory(s);
    const double budget = s.v_max * s.flight_period_s();   // path length available
    const double leg1 = dist(s.start_pos, s.ground_pos);
    const double leg2 = dist(s.ground_pos, s.final_pos);

    if (leg1 + leg2 <= budget) {
        // Dwell time sits between the two legs; leg times plus hover add up
        // to T exactly.
        const double hover_s = s.flight_period_s() - (leg1 + leg2) / s.v_max;
        return sample_path(s, s.ground_pos, std::max(hover_s, 0.0));
    }

    // Not enough time to reach the node: turn at the point on start->node
    // making the total path length equal the budget.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const Vec2 turn = s.start_pos + mid * (s.ground_pos - s.start_pos);
        const double len = mid * leg1 + dist(turn, s.final_pos);
        (len <= budget ? lo : hi) = mid;
        if (hi - lo < 1e-16) break;
    }
    const Vec2 turn = s.start_pos + lo * (s.ground_pos - s.start_pos);
    return sample_path(s, turn, 0.0);
}

} // namespace uavsec
