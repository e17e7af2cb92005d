#include "uavsec/scenario.hpp"

#include <sstream>
#include <stdexcept>

namespace uavsec {

double PowerProfile::mean() const {
    if (powers_w.empty()) return 0.0;
    double sum = 0.0;
    for (double p : powers_w) sum += p;
    return sum / static_cast<double>(powers_w.size());
}

std::vector<ValidationError> validate(const Scenario& s) {
    std::vector<ValidationError> errs;
    auto add = [&](const char* code, const std::string& msg) { errs.push_back({code, msg}); };

    if (!(s.altitude_m > 0.0))
        add("NonPositiveAltitude", "altitude_m must be > 0");
    if (!(s.v_max > 0.0))
        add("NonPositiveSpeed", "v_max must be > 0");
    if (!(s.slot_len_s > 0.0))
        add("NonPositiveSlotLength", "slot_len_s must be > 0");
    if (s.num_slots < 1)
        add("BadSlotCount", "num_slots must be >= 1");
    if (!(s.ref_snr > 0.0))
        add("NonPositiveRefSnr", "ref_snr must be > 0");
    if (!(s.pathloss_exp >= 2.0))
        add("BadPathlossExponent", "pathloss_exp must be >= 2");
    if (!(s.avg_power_w > 0.0) || !(s.peak_power_w > 0.0) || !(s.peak_power_w > s.avg_power_w))
        add("BadPowerBudget", "power budgets must satisfy 0 < avg < peak");
    if (s.eaves_gap_m() <= 0.0)
        add("CoLocatedEavesdropper", "ground node and eavesdropper must not coincide");

    if (s.v_max > 0.0 && s.slot_len_s > 0.0 && s.num_slots >= 1) {
        const double reach = s.v_max * s.flight_period_s();
        const double gap = dist(s.start_pos, s.final_pos);
        // Allow exact equality up to rounding: a taut straight line is feasible.
        if (gap > reach * (1.0 + 1e-12)) {
            std::ostringstream oss;
            oss << "endpoint distance " << gap << " m exceeds v_max*T = " << reach << " m";
            add("InfeasibleEndpoints", oss.str());
        }
    }
    return errs;
}

void validate_or_throw(const Scenario& s) {
    auto errs = validate(s);
    if (errs.empty()) return;
    std::ostringstream oss;
    oss << "invalid scenario:";
    for (const auto& e : errs) oss << " [" << e.code << "] " << e.message << ";";
    throw std::invalid_argument(oss.str());
}

bool is_feasible_trajectory(const Scenario& s, const Trajectory& traj, double tol) {
    if (traj.size() != s.num_slots || traj.ys.size() != traj.xs.size())
        throw std::invalid_argument("trajectory length does not match scenario num_slots");
    const double bound = s.max_step_m() + tol;
    const int n = traj.size();
    if (dist(s.start_pos, traj.at(0)) > bound) return false;
    for (int i = 0; i + 1 < n; ++i)
        if (dist(traj.at(i), traj.at(i + 1)) > bound) return false;
    if (dist(traj.at(n - 1), s.final_pos) > bound) return false;
    return true;
}

} // namespace uavsec
