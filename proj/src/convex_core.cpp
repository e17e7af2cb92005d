#include "uavsec/convex_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace uavsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symmetric positive definite band matrix, lower storage:
// entry(i, j) with 0 <= i - j <= hbw lives at a[(i - j) * n + j].
class BandMatrix {
public:
    BandMatrix(int n, int hbw) : n_(n), hbw_(hbw), a_((hbw + 1) * n, 0.0) {}

    void clear() { std::fill(a_.begin(), a_.end(), 0.0); }

    void add(int i, int j, double v) {
        if (i < j) std::swap(i, j);
        a_[(i - j) * n_ + j] += v;
    }

    double diag(int i) const { return a_[i]; }

    // In-place Cholesky of D A D with Jacobi scaling D = diag(1/sqrt(A_ii)).
    // Returns false on a non-positive pivot.
    bool factor(std::vector<double>& scale) {
        scale.resize(n_);
        for (int i = 0; i < n_; ++i) {
            const double d = a_[i];
            if (!(d > 0.0) || !std::isfinite(d)) return false;
            scale[i] = 1.0 / std::sqrt(d);
        }
        for (int k = 0; k <= hbw_; ++k)
            for (int j = 0; j + k < n_; ++j)
                a_[k * n_ + j] *= scale[j] * scale[j + k];

        for (int j = 0; j < n_; ++j) {
            double d = a_[j];
            for (int k = std::max(0, j - hbw_); k < j; ++k) {
                const double l = a_[(j - k) * n_ + k];
                d -= l * l;
            }
            if (!(d > 0.0) || !std::isfinite(d)) return false;
            const double root = std::sqrt(d);
            a_[j] = root;
            const int last = std::min(n_ - 1, j + hbw_);
            for (int i = j + 1; i <= last; ++i) {
                double s = a_[(i - j) * n_ + j];
                for (int k = std::max(0, i - hbw_); k < j; ++k)
                    s -= a_[(i - k) * n_ + k] * a_[(j - k) * n_ + k];
                a_[(i - j) * n_ + j] = s / root;
            }
        }
        return true;
    }

    // Solves (D A D) w = D rhs and returns D w (i.e. A z = rhs for the
    // original matrix). Call after factor().
    void solve_inplace(std::vector<double>& rhs, const std::vector<double>& scale) const {
        for (int i = 0; i < n_; ++i) rhs[i] *= scale[i];
        for (int j = 0; j < n_; ++j) {
            rhs[j] /= a_[j];
            const int last = std::min(n_ - 1, j + hbw_);
            for (int i = j + 1; i <= last; ++i) rhs[i] -= a_[(i - j) * n_ + j] * rhs[j];
        }
        for (int j = n_ - 1; j >= 0; --j) {
            const int last = std::min(n_ - 1, j + hbw_);
            for (int i = j + 1; i <= last; ++i) rhs[j] -= a_[(i - j) * n_ + j] * rhs[i];
            rhs[j] /= a_[j];
        }
        for (int i = 0; i < n_; ++i) rhs[i] *= scale[i];
    }

private:
    int n_;
    int hbw_;
    std::vector<double> a_;
};

// Flattened view of the subproblem: variable indexing, objective, constraint
// slacks, and barrier derivatives.
class Problem {
public:
    explicit Problem(const SubproblemSpec& spec) : spec_(spec) {
        const int n = spec.n_slots;
        xi_.resize(n);
        yi_.resize(n);
        ti_.assign(n, -1);
        ui_.assign(n, -1);
        int idx = 0;
        for (int k = 0; k < n; ++k) {
            xi_[k] = idx++;
            yi_[k] = idx++;
            if (spec.slots[k].log_power > 0.0) ti_[k] = idx++;
            if (spec.slots[k].u_cost > 0.0) ui_[k] = idx++;
        }
        n_vars_ = idx;
        hbw_ = 3;
        for (int k = 0; k + 1 < n; ++k)
            hbw_ = std::max(hbw_, yi_[k + 1] - xi_[k]);
        n_cons_ = n + 1;   // mobility chain
        for (int k = 0; k < n; ++k) {
            if (ui_[k] >= 0) n_cons_ += 1;
            if (ti_[k] >= 0) n_cons_ += 2;
        }
    }

    int n_vars() const { return n_vars_; }
    int n_cons() const { return n_cons_; }
    int hbw() const { return hbw_; }
    int xi(int k) const { return xi_[k]; }
    int yi(int k) const { return yi_[k]; }
    int ti(int k) const { return ti_[k]; }
    int ui(int k) const { return ui_[k]; }

    double objective(const std::vector<double>& z) const {
        double f = 0.0;
        for (int k = 0; k < spec_.n_slots; ++k) {
            const SlotTerm& s = spec_.slots[k];
            if (ui_[k] >= 0) f += s.u_cost * z[ui_[k]];
            if (ti_[k] >= 0) f += std::log1p(s.log_power / z[ti_[k]]) / std::numbers::ln2;
        }
        return f;
    }

    // Minimum slack over all constraints; the iterate is strictly feasible
    // iff the result is positive. Also false-positive-proof against NaNs.
    double min_slack(const std::vector<double>& z) const {
        double m = kInf;
        auto take = [&](double s) { m = std::isfinite(s) ? std::min(m, s) : -kInf; };
        const double d2 = spec_.mobility.step_bound_m * spec_.mobility.step_bound_m;
        const int n = spec_.n_slots;
        take(d2 - sq_norm(Vec2{z[xi_[0]], z[yi_[0]]} - spec_.mobility.start));
        for (int k = 0; k + 1 < n; ++k)
            take(d2 - sq_norm(Vec2{z[xi_[k + 1]], z[yi_[k + 1]]} - Vec2{z[xi_[k]], z[yi_[k]]}));
        take(d2 - sq_norm(spec_.mobility.finish - Vec2{z[xi_[n - 1]], z[yi_[n - 1]]}));
        for (int k = 0; k < n; ++k) {
            const SlotTerm& s = spec_.slots[k];
            if (ui_[k] >= 0) {
                const double bind = sq_norm(Vec2{z[xi_[k]], z[yi_[k]]} - spec_.ground)
                                    + spec_.altitude_sq;
                take(z[ui_[k]] - bind);
            }
            if (ti_[k] >= 0) {
                take(s.bound_x * z[xi_[k]] + s.bound_y * z[yi_[k]] + s.bound_0 - z[ti_[k]]);
                take(z[ti_[k]] - spec_.altitude_sq);
            }
        }
        return m;
    }

    // psi = objective + (1/eta) * barrier. Infinite outside the interior.
    double barrier_value(const std::vector<double>& z, double inv_eta) const {
        double phi = 0.0;
        auto take = [&](double s) {
            if (!(s > 0.0)) { phi = kInf; return; }
            phi -= std::log(s);
        };
        const double d2 = spec_.mobility.step_bound_m * spec_.mobility.step_bound_m;
        const int n = spec_.n_slots;
        take(d2 - sq_norm(Vec2{z[xi_[0]], z[yi_[0]]} - spec_.mobility.start));
        for (int k = 0; k + 1 < n && std::isfinite(phi); ++k)
            take(d2 - sq_norm(Vec2{z[xi_[k + 1]], z[yi_[k + 1]]} - Vec2{z[xi_[k]], z[yi_[k]]}));
        take(d2 - sq_norm(spec_.mobility.finish - Vec2{z[xi_[n - 1]], z[yi_[n - 1]]}));
        for (int k = 0; k < n && std::isfinite(phi); ++k) {
            const SlotTerm& s = spec_.slots[k];
            if (ui_[k] >= 0) {
                const double bind = sq_norm(Vec2{z[xi_[k]], z[yi_[k]]} - spec_.ground)
                                    + spec_.altitude_sq;
                take(z[ui_[k]] - bind);
            }
            if (ti_[k] >= 0) {
                take(s.bound_x * z[xi_[k]] + s.bound_y * z[yi_[k]] + s.bound_0 - z[ti_[k]]);
                take(z[ti_[k]] - spec_.altitude_sq);
            }
        }
        if (!std::isfinite(phi)) return kInf;
        return objective(z) + inv_eta * phi;
    }

    // Exact minimization of psi over the slack variables with the positions
    // held fixed (the slack block separates per slot). Keeps the iterate
    // compatible with the current barrier weight, so Newton only has to move
    // the positions.
    void center_slacks(std::vector<double>& z, double inv_eta) const {
        for (int k = 0; k < spec_.n_slots; ++k) {
            const SlotTerm& s = spec_.slots[k];
            if (ui_[k] >= 0) {
                const double bind = sq_norm(Vec2{z[xi_[k]], z[yi_[k]]} - spec_.ground)
                                    + spec_.altitude_sq;
                z[ui_[k]] = bind + inv_eta / s.u_cost;
            }
            if (ti_[k] >= 0) {
                const double cap = s.bound_x * z[xi_[k]] + s.bound_y * z[yi_[k]] + s.bound_0;
                const double h2 = spec_.altitude_sq;
                // d psi / dt = f'(t) + (1/eta) [1/(cap-t) - 1/(t-h2)] is
                // strictly increasing with a sign change across (h2, cap).
                double lo = h2, hi = cap;
                for (int iter = 0; iter < 80; ++iter) {
                    const double t = 0.5 * (lo + hi);
                    const double slope =
                        -s.log_power / (std::numbers::ln2 * t * (t + s.log_power))
                        + inv_eta * (1.0 / (cap - t) - 1.0 / (t - h2));
                    (slope < 0.0 ? lo : hi) = t;
                }
                z[ti_[k]] = 0.5 * (lo + hi);
            }
        }
    }

    // Gradient and Hessian of psi at a strictly feasible z.
    void derivatives(const std::vector<double>& z, double inv_eta,
                     std::vector<double>& grad, BandMatrix& hess) const {
        grad.assign(n_vars_, 0.0);
        hess.clear();
        const int n = spec_.n_slots;

        for (int k = 0; k < n; ++k) {
            const SlotTerm& s = spec_.slots[k];
            if (ui_[k] >= 0) grad[ui_[k]] += s.u_cost;
            if (ti_[k] >= 0) {
                const double t = z[ti_[k]];
                const double P = s.log_power;
                const double denom = t * (t + P);
                grad[ti_[k]] += -P / (std::numbers::ln2 * denom);
                hess.add(ti_[k], ti_[k], P * (2.0 * t + P) / (std::numbers::ln2 * denom * denom));
            }
        }

        // Rank-one plus curvature barrier terms, each scaled by 1/eta.
        auto add_quad_pair = [&](int ix, int iy, double gx, double gy, double slack,
                                 double curvature) {
            const double inv_s = inv_eta / slack;
            const double inv_s2 = inv_s / slack;
            grad[ix] += gx * inv_s;
            grad[iy] += gy * inv_s;
            hess.add(ix, ix, curvature * inv_s + gx * gx * inv_s2);
            hess.add(iy, iy, curvature * inv_s + gy * gy * inv_s2);
            hess.add(std::max(ix, iy), std::min(ix, iy), gx * gy * inv_s2);
        };

        const double d2 = spec_.mobility.step_bound_m * spec_.mobility.step_bound_m;

        {   // |z_1 - start|^2 <= D^2
            const Vec2 d = Vec2{z[xi_[0]], z[yi_[0]]} - spec_.mobility.start;
            add_quad_pair(xi_[0], yi_[0], 2.0 * d.x, 2.0 * d.y, d2 - sq_norm(d), 2.0);
        }
        for (int k = 0; k + 1 < n; ++k) {   // |z_{k+1} - z_k|^2 <= D^2
            const Vec2 d = Vec2{z[xi_[k + 1]], z[yi_[k + 1]]} - Vec2{z[xi_[k]], z[yi_[k]]};
            const double slack = d2 - sq_norm(d);
            const double inv_s = inv_eta / slack;
            const double inv_s2 = inv_s / slack;
            const double gx = 2.0 * d.x;
            const double gy = 2.0 * d.y;
            const int x0 = xi_[k], y0 = yi_[k], x1 = xi_[k + 1], y1 = yi_[k + 1];
            grad[x0] -= gx * inv_s;
            grad[y0] -= gy * inv_s;
            grad[x1] += gx * inv_s;
            grad[y1] += gy * inv_s;
            // curvature part: 2 * (e1 - e0)(e1 - e0)^T per coordinate
            hess.add(x0, x0, 2.0 * inv_s + gx * gx * inv_s2);
            hess.add(x1, x1, 2.0 * inv_s + gx * gx * inv_s2);
            hess.add(x1, x0, -2.0 * inv_s - gx * gx * inv_s2);
            hess.add(y0, y0, 2.0 * inv_s + gy * gy * inv_s2);
            hess.add(y1, y1, 2.0 * inv_s + gy * gy * inv_s2);
            hess.add(y1, y0, -2.0 * inv_s - gy * gy * inv_s2);
            // rank-one cross terms between x and y components
            hess.add(y0, x0, gx * gy * inv_s2);
            hess.add(y1, x1, gx * gy * inv_s2);
            hess.add(x1, y0, -gx * gy * inv_s2);
            hess.add(y1, x0, -gx * gy * inv_s2);
        }
        {   // |final - z_N|^2 <= D^2
            const Vec2 d = spec_.mobility.finish - Vec2{z[xi_[n - 1]], z[yi_[n - 1]]};
            add_quad_pair(xi_[n - 1], yi_[n - 1], -2.0 * d.x, -2.0 * d.y, d2 - sq_norm(d), 2.0);
        }

        for (int k = 0; k < n; ++k) {
            const SlotTerm& s = spec_.slots[k];
            const int ix = xi_[k], iy = yi_[k];
            if (ui_[k] >= 0) {   // (x-gx)^2 + (y-gy)^2 + H^2 - u <= 0
                const int iu = ui_[k];
                const Vec2 d = Vec2{z[ix], z[iy]} - spec_.ground;
                const double slack = z[iu] - sq_norm(d) - spec_.altitude_sq;
                const double inv_s = inv_eta / slack;
                const double inv_s2 = inv_s / slack;
                const double gx = 2.0 * d.x, gy = 2.0 * d.y, gu = -1.0;
                grad[ix] += gx * inv_s;
                grad[iy] += gy * inv_s;
                grad[iu] += gu * inv_s;
                hess.add(ix, ix, 2.0 * inv_s + gx * gx * inv_s2);
                hess.add(iy, iy, 2.0 * inv_s + gy * gy * inv_s2);
                hess.add(iu, iu, gu * gu * inv_s2);
                hess.add(iy, ix, gx * gy * inv_s2);
                hess.add(iu, ix, gx * gu * inv_s2);
                hess.add(iu, iy, gy * gu * inv_s2);
            }
            if (ti_[k] >= 0) {
                const int it = ti_[k];
                {   // t <= bx x + by y + b0 (linear)
                    const double slack = s.bound_x * z[ix] + s.bound_y * z[iy] + s.bound_0 - z[it];
                    const double inv_s = inv_eta / slack;
                    const double inv_s2 = inv_s / slack;
                    const double gx = -s.bound_x, gy = -s.bound_y, gt = 1.0;
                    grad[ix] += gx * inv_s;
                    grad[iy] += gy * inv_s;
                    grad[it] += gt * inv_s;
                    hess.add(ix, ix, gx * gx * inv_s2);
                    hess.add(iy, iy, gy * gy * inv_s2);
                    hess.add(it, it, gt * gt * inv_s2);
                    hess.add(iy, ix, gx * gy * inv_s2);
                    hess.add(it, ix, gx * gt * inv_s2);
                    hess.add(it, iy, gy * gt * inv_s2);
                }
                {   // t >= H^2
                    const double slack = z[it] - spec_.altitude_sq;
                    const double inv_s = inv_eta / slack;
                    grad[it] -= inv_s;
                    hess.add(it, it, inv_s / slack);
                }
            }
        }
    }

private:
    const SubproblemSpec& spec_;
    std::vector<int> xi_, yi_, ti_, ui_;
    int n_vars_ = 0;
    int n_cons_ = 0;
    int hbw_ = 3;
};

SubproblemSolution extract(const Problem& prob, const SubproblemSpec& spec,
                           const std::vector<double>& z, SolveDiagnostics diag) {
    SubproblemSolution sol;
    const int n = spec.n_slots;
    sol.x.resize(n);
    sol.y.resize(n);
    sol.t.resize(n);
    sol.u.resize(n);
    for (int k = 0; k < n; ++k) {
        sol.x[k] = z[prob.xi(k)];
        sol.y[k] = z[prob.yi(k)];
        sol.t[k] = prob.ti(k) >= 0 ? z[prob.ti(k)] : spec.altitude_sq;
        sol.u[k] = prob.ui(k) >= 0
                       ? z[prob.ui(k)]
                       : sq_norm(Vec2{sol.x[k], sol.y[k]} - spec.ground) + spec.altitude_sq;
    }
    sol.diag = diag;
    return sol;
}

} // namespace

SubproblemSolution solve(const SubproblemSpec& spec, const WarmStart& warm, double tol) {
    if (spec.n_slots < 1 || static_cast<int>(spec.slots.size()) != spec.n_slots)
        throw std::invalid_argument("subproblem spec: slot list must match n_slots");
    if (!(spec.mobility.step_bound_m > 0.0))
        throw std::invalid_argument("subproblem spec: step bound must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");

    Problem prob(spec);
    const int nv = prob.n_vars();
    const int nc = prob.n_cons();

    std::vector<double> z(nv, 0.0);
    const int n = spec.n_slots;
    if (static_cast<int>(warm.x.size()) != n || static_cast<int>(warm.y.size()) != n
        || static_cast<int>(warm.t.size()) != n || static_cast<int>(warm.u.size()) != n)
        throw std::invalid_argument("warm start: sequences must have length n_slots");
    for (int k = 0; k < n; ++k) {
        z[prob.xi(k)] = warm.x[k];
        z[prob.yi(k)] = warm.y[k];
        if (prob.ti(k) >= 0) z[prob.ti(k)] = warm.t[k];
        if (prob.ui(k) >= 0) z[prob.ui(k)] = warm.u[k];
    }
    if (!(prob.min_slack(z) > 0.0))
        throw InfeasibleStartError("warm start is not strictly feasible");

    // Barrier weight schedule: eta grows x10 per stage up to the value that
    // certifies gap = n_cons / eta <= tol (and 1/eta <= tol per constraint).
    const double eta_target = std::max(static_cast<double>(nc) / tol, 1.0 / tol);
    double f0 = std::abs(prob.objective(z));
    double eta = std::min(std::max(1.0, static_cast<double>(nc) / std::max(f0, 1.0)), eta_target);

    BandMatrix hess(nv, prob.hbw());
    std::vector<double> grad, step, scale;
    std::vector<double> stage_objectives;
    int total_newton = 0;
    int stages = 0;
    const int max_newton_total = 4000;
    double stationarity = kInf;

    bool last_stage = false;
    while (true) {
        last_stage = (eta >= eta_target);
        const double inv_eta = 1.0 / eta;
        ++stages;
        prob.center_slacks(z, inv_eta);

        int polish_steps = 0;
        for (int inner = 0;; ++inner) {
            if (total_newton >= max_newton_total || inner >= 300) {
                SolveDiagnostics diag;
                diag.newton_steps = total_newton;
                diag.outer_stages = stages;
                diag.kkt_stationarity = stationarity;
                diag.duality_gap = static_cast<double>(nc) / eta;
                diag.objective = prob.objective(z);
                diag.stage_objectives = stage_objectives;
                throw MaxIterationsError("interior point exceeded iteration budget",
                                         extract(prob, spec, z, diag));
            }
            prob.derivatives(z, inv_eta, grad, hess);
            stationarity = 0.0;
            for (double g : grad) stationarity = std::max(stationarity, std::abs(g));

            step = grad;
            if (!hess.factor(scale)) {
                // One retry with a diagonal bump before giving up.
                prob.derivatives(z, inv_eta, grad, hess);
                double dmax = 0.0;
                for (int i = 0; i < nv; ++i) dmax = std::max(dmax, hess.diag(i));
                for (int i = 0; i < nv; ++i) hess.add(i, i, 1e-12 * dmax);
                step = grad;
                if (!hess.factor(scale))
                    throw NumericalBreakdownError("barrier Hessian factorization failed");
            }
            hess.solve_inplace(step, scale);
            for (double& v : step) v = -v;

            double decrement_sq = 0.0;   // grad^T H^-1 grad
            for (int i = 0; i < nv; ++i) decrement_sq -= grad[i] * step[i];
            ++total_newton;
            if (std::getenv("UAVSEC_IP_DEBUG"))
                std::fprintf(stderr, "eta=%.3g inner=%d dec2=%.3g stat=%.3g obj=%.12g\n", eta,
                             inner, decrement_sq, stationarity, prob.objective(z));

            const double value_scale = std::max(1.0, std::abs(prob.objective(z)));
            const bool centered = 0.5 * decrement_sq <= 1e-10 * value_scale;
            if (centered) {
                if (!last_stage || stationarity <= tol) break;
                // Centered in the Newton metric but the raw gradient norm is
                // still above tol: polish a bounded number of extra steps,
                // then accept the floating-point floor (the duality gap bound
                // holds regardless).
                if (++polish_steps > 12) break;
            }

            // Backtracking line search (sufficient decrease 0.25, halving),
            // rejecting any step that leaves the strict interior.
            const double psi0 = prob.barrier_value(z, inv_eta);
            double slope = 0.0;
            for (int i = 0; i < nv; ++i) slope += grad[i] * step[i];
            double alpha = 1.0;
            std::vector<double> trial(nv);
            bool moved = false;
            while (alpha > 1e-20) {
                for (int i = 0; i < nv; ++i) trial[i] = z[i] + alpha * step[i];
                const double psi = prob.barrier_value(trial, inv_eta);
                if (psi <= psi0 + 0.25 * alpha * slope) {
                    z.swap(trial);
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) {
                if (centered) break;   // stationarity floor reached at this stage
                throw NumericalBreakdownError("line search failed to make progress");
            }
        }

        stage_objectives.push_back(prob.objective(z));
        if (last_stage) break;
        eta = std::min(eta * 10.0, eta_target);
    }

    SolveDiagnostics diag;
    diag.newton_steps = total_newton;
    diag.outer_stages = stages;
    diag.kkt_stationarity = stationarity;
    diag.duality_gap = static_cast<double>(nc) / eta_target;
    diag.objective = prob.objective(z);
    diag.stage_objectives = std::move(stage_objectives);
    return extract(prob, spec, z, diag);
}

} // namespace uavsec
