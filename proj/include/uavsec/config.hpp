#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavsec/evaluation.hpp"

namespace uavsec {

struct ConfigParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resolved experiment description. Built by layering key-value sources:
/// preset, config file, then explicit overrides (later sources win).
struct RunConfig {
    Scenario scenario;                        // SI units
    std::vector<Scheme> schemes;
    enum class Axis { None, FlightPeriod, AvgPower } axis = Axis::None;
    std::vector<double> sweep_values;         // seconds or dBm
    double epsilon = 1e-4;
    int max_iter = 200;
    int mc_samples = 5000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

/// Ordered key-value store for the `key = value` config grammar
/// (`#` starts a comment, keys are case-sensitive, unknown keys rejected).
class KeyValueMap {
public:
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, std::size_t> index_;
};

/// Parses config text; throws ConfigParseError with the offending line number.
KeyValueMap parse_config_text(const std::string& text, const std::string& origin);

/// Reads and parses a config file.
KeyValueMap parse_config_file(const std::string& path);

/// Known preset names: case1-u2g, case2-u2g, case1-g2u, case2-g2u.
std::vector<std::string> preset_names();
KeyValueMap preset_config(const std::string& name);

/// Validates keys/values and builds the resolved config. Missing required
/// keys and unknown keys raise ConfigParseError.
RunConfig resolve_config(const KeyValueMap& keys);

/// Renders a config that reproduces this run byte-for-byte when re-fed.
std::string render_manifest(const RunConfig& cfg, const KeyValueMap& resolved_keys);

/// The key-value form of a resolved config (used for the manifest).
KeyValueMap config_to_keys(const RunConfig& cfg);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);

} // namespace uavsec
