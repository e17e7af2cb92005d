#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavsec/orchestrator.hpp"

namespace uavsec {

enum class SweepAxis { FlightPeriod, AvgPower };

const char* sweep_axis_name(SweepAxis axis);   // "flight_period" / "avg_power"

struct SweepOptions {
    double epsilon = 1e-4;
    int max_iter = 200;
    int mc_samples = 5000;
    std::uint64_t seed = 1;
};

struct SweepPoint {
    double axis_value = 0.0;                 // seconds or dBm, as configured
    Scheme scheme = Scheme::TOptWithPc;
    double secrecy_bps_hz = 0.0;             // clamped objective of the solve
    std::optional<double> mc_secrecy_bps_hz; // fading-averaged secrecy (uplink only)
    std::optional<double> mc_stderr;
    int iterations = 0;
    bool converged = false;
};

struct SweepMetadata {
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    double slot_len_s = 0.0;
    int mc_samples = 0;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::FlightPeriod;
    std::vector<double> axis_values;
    std::vector<SweepPoint> points;          // axis-major, scheme order as requested
    SweepMetadata meta;
};

/// Metric row for an already-computed solve; fills the Monte Carlo fields for
/// uplink scenarios using the given per-point seed.
SweepPoint evaluate_report(const Scenario& s, const SolveReport& report, double axis_value,
                           const SweepOptions& opt, std::uint64_t point_seed);

/// One solve per (T, scheme); num_slots is re-derived as round(T / slot_len).
SweepResult sweep_flight_period(const Scenario& base, const std::vector<double>& t_values_s,
                                const std::vector<Scheme>& schemes, const SweepOptions& opt = {});

/// One solve per (avg power, scheme); values are in dBm and the peak budget
/// tracks four times the average.
SweepResult sweep_avg_power(const Scenario& base, const std::vector<double>& avg_power_dbm,
                            const std::vector<Scheme>& schemes, const SweepOptions& opt = {});

struct PowerTraceRow {
    int slot = 0;          // 1-based
    double time_s = 0.0;
    double power_w = 0.0;
    double d_ug_m = 0.0;
    double d_ue_m = 0.0;
};

/// Per-slot power/distance series aligned for plotting.
std::vector<PowerTraceRow> power_trace(const Scenario& s, const SolveReport& report);

/// Fading-averaged uplink secrecy rate at a fixed solution, estimated slot by
/// slot from unit-mean exponential draws.
struct McSecrecy {
    double mean = 0.0;
    double std_error = 0.0;
};
McSecrecy mc_secrecy_g2u(const Scenario& s, const Trajectory& traj, const PowerProfile& power,
                         int n_samples, std::uint64_t seed);

/// Canonical hash of every scenario field; identical hash + seed + options
/// reproduce a sweep bit-exactly.
std::uint64_t scenario_hash(const Scenario& s);

// CSV writers (atomic: write temp file, then rename). Floating-point fields
// carry 17 significant digits.
void write_trajectory_csv(const std::string& path, const Scenario& s, const Trajectory& traj);
void write_power_csv(const std::string& path, const Scenario& s, const SolveReport& report);
void write_sweep_csv(const std::string& path, const SweepResult& result);

std::string format_double(double v);   // %.17g

} // namespace uavsec
