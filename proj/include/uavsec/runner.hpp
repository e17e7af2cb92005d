#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "uavsec/config.hpp"

namespace uavsec {

/// Executes a resolved config: runs the sweep (a single-point sweep over the
/// configured flight period when no axis is set), writes sweep.csv and
/// manifest.cfg into out_dir, and for single-point runs also writes per-scheme
/// trajectory_<slug>.csv / power_<slug>.csv. Returns the written paths.
/// Log verbosity comes from the UAVSEC_LOG environment variable
/// (quiet|info|debug, default info); messages go to `log`.
std::vector<std::string> execute_run(const RunConfig& cfg, std::ostream& log);

} // namespace uavsec
