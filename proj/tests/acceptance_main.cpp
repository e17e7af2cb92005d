// Acceptance suite: end-to-end checks of the solver stack on the reference
// geometries. Prints one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "uavsec/channel.hpp"
#include "uavsec/evaluation.hpp"
#include "uavsec/orchestrator.hpp"
#include "uavsec/trajectory_sca.hpp"

using namespace uavsec;
using uavsec::testing::fading_log_mean;
using uavsec::testing::make_case;
using uavsec::testing::power_grid_best;
using uavsec::testing::TestRng;

namespace {

struct Harness {
    int failures = 0;

    void report(int id, bool pass, const std::string& label, const std::string& detail = "") {
        std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        if (!pass) ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec2 modal_position(const Trajectory& t) {
    // Most-occupied position: the slot with the most neighbors within 1 m.
    int best = 0, best_count = -1;
    for (int i = 0; i < t.size(); ++i) {
        int count = 0;
        for (int j = 0; j < t.size(); ++j)
            if (dist(t.at(i), t.at(j)) <= 1.0) ++count;
        if (count > best_count) {
            best_count = count;
            best = i;
        }
    }
    return t.at(best);
}

struct ScenarioKey {
    int case_id;
    LinkDirection dir;
    double period;
    double power_dbm;
    bool operator<(const ScenarioKey& o) const {
        return std::tie(case_id, dir, period, power_dbm)
               < std::tie(o.case_id, o.dir, o.period, o.power_dbm);
    }
};

std::string key_label(const ScenarioKey& k) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "case%d/%s T=%g P=%gdBm", k.case_id,
                  k.dir == LinkDirection::U2G ? "u2g" : "g2u", k.period, k.power_dbm);
    return buf;
}

} // namespace

int main() {
    Harness h;
    const auto suite_start = std::chrono::steady_clock::now();

    // ---------------------------------------------------------------- 1
    {
        const auto t0 = std::chrono::steady_clock::now();
        TestRng rng(20240601);
        bool ok = true;
        std::string detail;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            const int n = rng.uniform_int(1, 4);
            PowerInstance inst;
            inst.peak_power_w = 1.0;
            inst.avg_power_w = 0.25;
            for (int i = 0; i < n; ++i) {
                inst.legit_gain.push_back(rng.uniform(0.1, 10.0));
                inst.eaves_gain.push_back(rng.uniform(0.1, 10.0));
            }
            const double mine = power_objective(inst, optimal_power(inst));
            const double grid = power_grid_best(inst, 1e-3 * inst.peak_power_w);
            if (!(mine >= grid - 1e-3)) {
                ok = false;
                char buf[128];
                std::snprintf(buf, sizeof buf, "trial %d: closed form %.9f < grid %.9f - 1e-3",
                              trial, mine, grid);
                detail = buf;
            }
        }
        const double elapsed = seconds_since(t0);
        if (ok && elapsed >= 30.0) {
            ok = false;
            detail = "runtime " + std::to_string(elapsed) + " s >= 30 s";
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "1000 random instances, %.1f s", elapsed);
        h.report(1, ok, "power control matches the lattice oracle", ok ? buf : detail);
    }

    // ---------------------------------------------------------------- 2
    // Shared solve cache for criteria 2, 6, and 10.
    std::map<ScenarioKey, std::map<Scheme, SolveReport>> runs;
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        for (int case_id : {1, 2}) {
            for (LinkDirection dir : {LinkDirection::U2G, LinkDirection::G2U}) {
                for (double period : {400.0, 500.0, 600.0}) {
                    for (double power_dbm : {-5.0, 5.0}) {
                        const ScenarioKey key{case_id, dir, period, power_dbm};
                        const Scenario s = make_case(case_id, dir, period, 5.0, power_dbm);
                        for (Scheme scheme : all_schemes()) {
                            const SolveReport r = solve_benchmark(s, scheme);
                            runs[key][scheme] = r;
                            const bool iterative = scheme == Scheme::TOptWithPc
                                                   || scheme == Scheme::TOptWithoutPc;
                            if (!iterative) continue;
                            for (std::size_t k = 1; k < r.objective_history.size(); ++k) {
                                if (r.objective_history[k]
                                    < r.objective_history[k - 1] - 1e-9) {
                                    ok = false;
                                    detail = key_label(key) + " " + scheme_name(scheme)
                                             + ": objective decreased at iteration "
                                             + std::to_string(k);
                                }
                            }
                            if (!r.converged || r.iterations > 100) {
                                ok = false;
                                detail = key_label(key) + " " + scheme_name(scheme)
                                         + ": no convergence within 100 iterations";
                            }
                        }
                    }
                }
            }
        }
        const double elapsed = seconds_since(t0);
        if (ok && elapsed >= 300.0) {
            ok = false;
            detail = "runtime " + std::to_string(elapsed) + " s >= 5 min";
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "24 scenarios x 4 schemes, %.1f s", elapsed);
        h.report(2, ok, "alternating optimization is monotone and convergent", ok ? buf : detail);
    }

    // ---------------------------------------------------------------- 3
    {
        TestRng rng(77);
        bool ok = true;
        std::string detail;
        for (int trial = 0; trial < 100000 && ok; ++trial) {
            const double u = rng.uniform(1e-2, 1e6);
            const double u_fea = rng.uniform(1e-2, 1e6);
            const double gain = rng.uniform(0.0, 1e5);
            if (surrogate_log(u, u_fea, gain) > std::log2(1.0 + gain / u) + 1e-12) {
                ok = false;
                detail = "under-estimator violated";
            }
            if (std::abs(surrogate_log(u_fea, u_fea, gain) - std::log2(1.0 + gain / u_fea))
                > 1e-12) {
                ok = false;
                detail = "tightness violated";
            }
        }
        for (int trial = 0; trial < 100000 && ok; ++trial) {
            const Vec2 fea{rng.uniform(-1000, 1000), rng.uniform(-1000, 1000)};
            const Vec2 pos{rng.uniform(-1000, 1000), rng.uniform(-1000, 1000)};
            const Vec2 eaves{rng.uniform(-300, 300), rng.uniform(-300, 300)};
            const double h2 = rng.uniform(1.0, 1e4);
            const double cap = 2.0 * (fea.x - eaves.x) * pos.x + 2.0 * (fea.y - eaves.y) * pos.y
                               + sq_norm(eaves) - sq_norm(fea) + h2;
            const double true_sq = sq_norm(pos - eaves) + h2;
            if (cap > true_sq + 1e-9 * std::max(1.0, true_sq)) {
                ok = false;
                detail = "linearized bound exceeded the true squared distance";
            }
        }
        h.report(3, ok, "surrogates are tight global under-estimators (1e5 samples each)",
                 detail);
    }

    // ---------------------------------------------------------------- 4
    {
        // Minimum-period geometry at the reference slot grid (0.5 s).
        const Scenario s = make_case(1, LinkDirection::U2G, 400.0, 0.5, -5.0);
        std::vector<Trajectory> trajectories;
        for (Scheme scheme : all_schemes())
            trajectories.push_back(solve_benchmark(s, scheme).trajectory);
        double worst = 0.0;
        for (std::size_t a = 0; a < trajectories.size(); ++a)
            for (std::size_t b = a + 1; b < trajectories.size(); ++b)
                for (int n = 0; n < s.num_slots; ++n)
                    worst = std::max(worst, dist(trajectories[a].at(n), trajectories[b].at(n)));
        char buf[64];
        std::snprintf(buf, sizeof buf, "max pointwise gap %.3g m", worst);
        h.report(4, worst < 1e-3, "all schemes fly one line at the minimum period", buf);
    }

    // ---------------------------------------------------------------- 5
    {
        const SolveReport& r = runs[{1, LinkDirection::U2G, 600.0, -5.0}][Scheme::TOptWithPc];
        const Vec2 modal = modal_position(r.trajectory);
        char buf[64];
        std::snprintf(buf, sizeof buf, "modal position (%.2f, %.2f)", modal.x, modal.y);
        h.report(5, modal.x < 0.0, "downlink hover sits west of the ground node", buf);
    }

    // ---------------------------------------------------------------- 6
    {
        bool ok = true;
        std::string detail;
        int checked = 0;
        for (const auto& [key, by_scheme] : runs) {
            if (key.dir != LinkDirection::U2G) continue;
            for (Scheme scheme : {Scheme::TOptWithPc, Scheme::BetWithPc}) {
                const SolveReport& r = by_scheme.at(scheme);
                const Scenario s = make_case(key.case_id, key.dir, key.period, 5.0,
                                             key.power_dbm);
                for (int n = 0; n < s.num_slots; ++n) {
                    const double d_ug = sq_dist(r.trajectory.at(n), s.ground_pos, s.altitude_m);
                    const double d_ue = sq_dist(r.trajectory.at(n), s.eaves_pos, s.altitude_m);
                    ++checked;
                    if (d_ug >= d_ue && r.power.powers_w[n] != 0.0) {
                        ok = false;
                        detail = key_label(key) + " " + scheme_name(scheme) + " slot "
                                 + std::to_string(n + 1) + ": nonzero power in the zero zone";
                    }
                }
            }
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%d slots checked", checked);
        h.report(6, ok, "downlink power is exactly zero wherever d_UG >= d_UE",
                 ok ? buf : detail);
    }

    // ---------------------------------------------------------------- 7
    {
        const Scenario low = make_case(1, LinkDirection::U2G, 600.0, 5.0, -5.0);
        const Scenario high = make_case(1, LinkDirection::U2G, 600.0, 5.0, 10.0);
        const double bet_low = runs[{1, LinkDirection::U2G, 600.0, -5.0}][Scheme::BetWithPc]
                                   .clamped_objective;
        const double topt_low = runs[{1, LinkDirection::U2G, 600.0, -5.0}][Scheme::TOptWithoutPc]
                                    .clamped_objective;
        const double bet_high =
            solve_benchmark(high, Scheme::BetWithPc).clamped_objective;
        const double topt_high =
            solve_benchmark(high, Scheme::TOptWithoutPc).clamped_objective;
        (void)low;
        const bool ok = bet_low >= topt_low - 1e-3 && topt_high >= bet_high - 1e-3;
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "-5 dBm: BET-With-PC %.4f vs T-OPT-Without-PC %.4f; "
                      "10 dBm: %.4f vs %.4f",
                      bet_low, topt_low, bet_high, topt_high);
        h.report(7, ok, "power control wins at low power, trajectory at high power", buf);
    }

    // ---------------------------------------------------------------- 8
    {
        const SolveReport& r = runs[{2, LinkDirection::G2U, 600.0, -5.0}][Scheme::TOptWithPc];
        const Scenario s = make_case(2, LinkDirection::G2U, 600.0, 5.0, -5.0);
        const Vec2 modal = modal_position(r.trajectory);
        const double gap = dist(modal, s.ground_pos);
        char buf[64];
        std::snprintf(buf, sizeof buf, "modal position %.2f m from the node", gap);
        h.report(8, gap < 5.0, "uplink hover converges to the point above the node", buf);
    }

    // ---------------------------------------------------------------- 9
    {
        bool ok = true;
        std::string detail;
        for (double c : {0.1, 1.0, 10.0}) {
            const double q = c * 8e6 / 1e8;   // ref_snr q / d^kappa = c at d=200, kappa=3
            const McEstimate est = mc_ge_rate(q, 200.0, 3.0, 1e8, 100000, 2024);
            const double closed = fading_log_mean(c);
            if (std::abs(est.mean - closed) > 4.0 * est.std_error) {
                ok = false;
                char buf[128];
                std::snprintf(buf, sizeof buf, "c=%g: mean %.6f vs closed form %.6f (se %.2g)",
                              c, est.mean, closed, est.std_error);
                detail = buf;
            }
            if (est.mean > std::log2(1.0 + c)) {
                ok = false;
                detail = "sample mean exceeded the unit-mean-gain bound at c="
                         + std::to_string(c);
            }
        }
        h.report(9, ok, "fading average matches exp(1/c)E1(1/c)/ln2 and the upper bound",
                 detail);
    }

    // ---------------------------------------------------------------- 10
    {
        bool ok = true;
        std::string detail;
        for (const auto& [key, by_scheme] : runs) {
            const double joint = by_scheme.at(Scheme::TOptWithPc).clamped_objective;
            for (Scheme scheme :
                 {Scheme::TOptWithoutPc, Scheme::BetWithPc, Scheme::BetWithoutPc}) {
                const SolveReport& r = by_scheme.at(scheme);
                if (joint < r.clamped_objective - 1e-6) {
                    ok = false;
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "%s: joint %.9f < %s %.9f",
                                  key_label(key).c_str(), joint, scheme_name(scheme),
                                  r.clamped_objective);
                    detail = buf;
                    std::printf("  violating report (%s): iterations=%d converged=%d history:",
                                scheme_name(scheme), r.iterations, r.converged);
                    for (double v : r.objective_history) std::printf(" %.9f", v);
                    std::printf("\n");
                }
            }
        }
        h.report(10, ok, "joint optimization dominates every benchmark", detail);
    }

    std::printf("acceptance suite finished in %.1f s: %d criterion failure(s)\n",
                seconds_since(suite_start), h.failures);
    return h.failures == 0 ? 0 : 1;
}
