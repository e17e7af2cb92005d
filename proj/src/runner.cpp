#include "uavsec/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "uavsec/rng.hpp"

namespace uavsec {

namespace {

int log_level() {
    const char* env = std::getenv("UAVSEC_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void atomic_write_text(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace

std::vector<std::string> execute_run(const RunConfig& cfg, std::ostream& log) {
    namespace fs = std::filesystem;
    const int verbosity = log_level();

    validate_or_throw(cfg.scenario);

    SweepOptions opt;
    opt.epsilon = cfg.epsilon;
    opt.max_iter = cfg.max_iter;
    opt.mc_samples = cfg.mc_samples;
    opt.seed = cfg.seed;

    if (verbosity >= 1)
        log << "running " << cfg.sweep_values.size() << " sweep point(s) x "
            << cfg.schemes.size() << " scheme(s), direction="
            << (cfg.scenario.direction == LinkDirection::U2G ? "u2g" : "g2u") << "\n";

    std::vector<std::string> written;
    const fs::path out_dir(cfg.out_dir);
    fs::create_directories(out_dir);

    SweepResult sweep;
    if (cfg.axis == RunConfig::Axis::None) {
        // Single-point run: one solve per scheme feeds both the sweep row and
        // the per-scheme trajectory/power traces.
        sweep.axis = SweepAxis::FlightPeriod;
        sweep.axis_values = cfg.sweep_values;
        sweep.meta = {scenario_hash(cfg.scenario), opt.seed, opt.epsilon,
                      cfg.scenario.slot_len_s, opt.mc_samples};
        SolveOptions solve_opt;
        solve_opt.epsilon = cfg.epsilon;
        solve_opt.max_iter = cfg.max_iter;
        std::uint64_t point_index = 0;
        for (Scheme scheme : cfg.schemes) {
            const SolveReport report = solve_benchmark(cfg.scenario, scheme, solve_opt);
            sweep.points.push_back(evaluate_report(cfg.scenario, report, cfg.sweep_values[0],
                                                   opt, derive_seed(opt.seed, point_index)));
            ++point_index;
            const std::string slug = scheme_slug(scheme);
            const std::string traj_path = (out_dir / ("trajectory_" + slug + ".csv")).string();
            const std::string power_path = (out_dir / ("power_" + slug + ".csv")).string();
            write_trajectory_csv(traj_path, cfg.scenario, report.trajectory);
            write_power_csv(power_path, cfg.scenario, report);
            written.push_back(traj_path);
            written.push_back(power_path);
        }
    } else if (cfg.axis == RunConfig::Axis::AvgPower) {
        sweep = sweep_avg_power(cfg.scenario, cfg.sweep_values, cfg.schemes, opt);
    } else {
        sweep = sweep_flight_period(cfg.scenario, cfg.sweep_values, cfg.schemes, opt);
    }

    if (verbosity >= 2) {
        for (const SweepPoint& p : sweep.points)
            log << "  " << sweep_axis_name(sweep.axis) << "=" << p.axis_value << " "
                << scheme_name(p.scheme) << ": secrecy=" << p.secrecy_bps_hz
                << " iters=" << p.iterations << (p.converged ? "" : " (not converged)") << "\n";
    }

    const std::string sweep_path = (out_dir / "sweep.csv").string();
    write_sweep_csv(sweep_path, sweep);
    written.push_back(sweep_path);

    const std::string manifest_path = (out_dir / "manifest.cfg").string();
    atomic_write_text(manifest_path, render_manifest(cfg, config_to_keys(cfg)));
    written.push_back(manifest_path);

    if (verbosity >= 1) {
        log << "wrote " << written.size() << " file(s) to " << cfg.out_dir << "\n";
    }
    return written;
}

} // namespace uavsec
