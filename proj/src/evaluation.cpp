#include "uavsec/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "uavsec/channel.hpp"
#include "uavsec/rng.hpp"

namespace uavsec {

namespace {

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

void hash_double(std::uint64_t& h, double v) {
    // FNV-1a over the text rendering keeps the hash stable across builds.
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001B3ULL;
    }
}

SweepPoint run_point(const Scenario& s, Scheme scheme, double axis_value,
                     const SweepOptions& opt, std::uint64_t point_seed) {
    SolveOptions solve_opt;
    solve_opt.epsilon = opt.epsilon;
    solve_opt.max_iter = opt.max_iter;
    const SolveReport report = solve_benchmark(s, scheme, solve_opt);
    return evaluate_report(s, report, axis_value, opt, point_seed);
}

SweepResult run_sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values,
                      const std::vector<Scheme>& schemes, const SweepOptions& opt) {
    if (schemes.empty()) throw std::invalid_argument("sweep: scheme list must not be empty");
    SweepResult result;
    result.axis = axis;
    result.axis_values = values;
    result.meta = {scenario_hash(base), opt.seed, opt.epsilon, base.slot_len_s, opt.mc_samples};

    std::uint64_t point_index = 0;
    for (double value : values) {
        Scenario s = base;
        if (axis == SweepAxis::FlightPeriod) {
            s.num_slots = static_cast<int>(std::llround(value / s.slot_len_s));
        } else {
            s.avg_power_w = dbm_to_watts(value);
            s.peak_power_w = 4.0 * s.avg_power_w;
        }
        validate_or_throw(s);
        for (Scheme scheme : schemes) {
            result.points.push_back(
                run_point(s, scheme, value, opt, derive_seed(opt.seed, point_index)));
            ++point_index;
        }
    }
    return result;
}

void atomic_write(const std::string& path, const std::string& contents) {
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

const char* sweep_axis_name(SweepAxis axis) {
    return axis == SweepAxis::FlightPeriod ? "flight_period" : "avg_power";
}

SweepPoint evaluate_report(const Scenario& s, const SolveReport& report, double axis_value,
                           const SweepOptions& opt, std::uint64_t point_seed) {
    SweepPoint point;
    point.axis_value = axis_value;
    point.scheme = report.scheme;
    point.secrecy_bps_hz = report.clamped_objective;
    point.iterations = report.iterations;
    point.converged = report.converged;
    if (s.direction == LinkDirection::G2U) {
        const McSecrecy mc =
            mc_secrecy_g2u(s, report.trajectory, report.power, opt.mc_samples, point_seed);
        point.mc_secrecy_bps_hz = mc.mean;
        point.mc_stderr = mc.std_error;
    }
    return point;
}

SweepResult sweep_flight_period(const Scenario& base, const std::vector<double>& t_values_s,
                                const std::vector<Scheme>& schemes, const SweepOptions& opt) {
    return run_sweep(base, SweepAxis::FlightPeriod, t_values_s, schemes, opt);
}

SweepResult sweep_avg_power(const Scenario& base, const std::vector<double>& avg_power_dbm,
                            const std::vector<Scheme>& schemes, const SweepOptions& opt) {
    return run_sweep(base, SweepAxis::AvgPower, avg_power_dbm, schemes, opt);
}

std::vector<PowerTraceRow> power_trace(const Scenario& s, const SolveReport& report) {
    if (report.trajectory.size() != s.num_slots || report.power.size() != s.num_slots)
        throw std::invalid_argument("power_trace: report length does not match scenario");
    std::vector<PowerTraceRow> rows(s.num_slots);
    for (int n = 0; n < s.num_slots; ++n) {
        rows[n].slot = n + 1;
        rows[n].time_s = (n + 1) * s.slot_len_s;
        rows[n].power_w = report.power.powers_w[n];
        rows[n].d_ug_m = std::sqrt(sq_dist(report.trajectory.at(n), s.ground_pos, s.altitude_m));
        rows[n].d_ue_m = std::sqrt(sq_dist(report.trajectory.at(n), s.eaves_pos, s.altitude_m));
    }
    return rows;
}

McSecrecy mc_secrecy_g2u(const Scenario& s, const Trajectory& traj, const PowerProfile& power,
                         int n_samples, std::uint64_t seed) {
    if (s.direction != LinkDirection::G2U)
        throw std::invalid_argument("mc_secrecy_g2u: scenario direction must be G2U");
    if (traj.size() != s.num_slots || power.size() != s.num_slots)
        throw std::invalid_argument("mc_secrecy_g2u: length mismatch");
    const double d_ge = s.eaves_gap_m();
    double sum = 0.0;
    double var_sum = 0.0;
    for (int n = 0; n < s.num_slots; ++n) {
        const double q = power.powers_w[n];
        const double legit = rate_los(q, sq_dist(traj.at(n), s.ground_pos, s.altitude_m), s.ref_snr);
        const McEstimate leak = mc_ge_rate(q, d_ge, s.pathloss_exp, s.ref_snr, n_samples,
                                           derive_seed(seed, static_cast<std::uint64_t>(n)));
        const double term = legit - leak.mean;
        if (term > 0.0) {
            sum += term;
            var_sum += leak.std_error * leak.std_error;
        }
    }
    const double n = static_cast<double>(s.num_slots);
    return {sum / n, std::sqrt(var_sum) / n};
}

std::uint64_t scenario_hash(const Scenario& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double v : {s.ground_pos.x, s.ground_pos.y, s.eaves_pos.x, s.eaves_pos.y,
                     s.altitude_m, s.ref_snr, s.v_max, s.slot_len_s,
                     static_cast<double>(s.num_slots), s.start_pos.x, s.start_pos.y,
                     s.final_pos.x, s.final_pos.y, s.avg_power_w, s.peak_power_w,
                     s.pathloss_exp, s.direction == LinkDirection::U2G ? 0.0 : 1.0})
        hash_double(h, v);
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(const std::string& path, const Scenario& s, const Trajectory& traj) {
    if (traj.size() != s.num_slots)
        throw std::invalid_argument("write_trajectory_csv: length mismatch");
    std::ostringstream out;
    out << "slot,time_s,x_m,y_m\n";
    for (int n = 0; n < s.num_slots; ++n) {
        out << (n + 1) << ',' << format_double((n + 1) * s.slot_len_s) << ','
            << format_double(traj.xs[n]) << ',' << format_double(traj.ys[n]) << '\n';
    }
    atomic_write(path, out.str());
}

void write_power_csv(const std::string& path, const Scenario& s, const SolveReport& report) {
    std::ostringstream out;
    out << "slot,time_s,power_W,d_ug_m,d_ue_m\n";
    for (const PowerTraceRow& row : power_trace(s, report)) {
        out << row.slot << ',' << format_double(row.time_s) << ',' << format_double(row.power_w)
            << ',' << format_double(row.d_ug_m) << ',' << format_double(row.d_ue_m) << '\n';
    }
    atomic_write(path, out.str());
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ostringstream out;
    out << "axis_name,axis_value,scheme,secrecy_bps_hz,mc_secrecy_bps_hz,mc_stderr,iterations,"
           "converged\n";
    for (const SweepPoint& p : result.points) {
        out << sweep_axis_name(result.axis) << ',' << format_double(p.axis_value) << ','
            << scheme_name(p.scheme) << ',' << format_double(p.secrecy_bps_hz) << ','
            << (p.mc_secrecy_bps_hz ? format_double(*p.mc_secrecy_bps_hz) : std::string())
            << ',' << (p.mc_stderr ? format_double(*p.mc_stderr) : std::string()) << ','
            << p.iterations << ',' << (p.converged ? 1 : 0) << '\n';
    }
    atomic_write(path, out.str());
}

} // namespace uavsec
