#include "uavsec/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace uavsec {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "direction", "ground_x", "ground_y", "eaves_x", "eaves_y", "altitude_m",
        "gamma0_db", "v_max", "slot_len_s", "flight_period_s", "start_x", "start_y",
        "final_x", "final_y", "avg_power_dbm", "peak_power_dbm", "pathloss_exp",
        "epsilon", "max_iter", "mc_samples", "seed", "schemes", "sweep_axis",
        "sweep_values", "out_dir",
    };
    return keys;
}

// Keys that must be present after layering; everything else has a default.
const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys = {
        "direction", "ground_x", "ground_y", "eaves_x", "eaves_y", "altitude_m",
        "gamma0_db", "v_max", "flight_period_s", "start_x", "start_y",
        "final_x", "final_y", "avg_power_dbm",
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const KeyValueMap& keys, const std::string& key) {
    const std::string& text = keys.get(key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ConfigParseError("key '" + key + "': cannot parse number from '" + text + "'");
    return v;
}

long long parse_integer(const KeyValueMap& keys, const std::string& key) {
    const double v = parse_number(keys, key);
    if (v != std::floor(v))
        throw ConfigParseError("key '" + key + "': expected an integer, got '" + keys.get(key) + "'");
    return static_cast<long long>(v);
}

std::uint64_t parse_seed(const KeyValueMap& keys, const std::string& key) {
    const std::string& text = keys.get(key);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw ConfigParseError("key '" + key + "': cannot parse unsigned integer from '" + text + "'");
    return v;
}

std::vector<double> parse_number_list(const KeyValueMap& keys, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(keys.get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigParseError("key '" + key + "': empty entry in list");
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigParseError("key '" + key + "': cannot parse number from '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigParseError("key '" + key + "': empty list");
    return out;
}

KeyValueMap case_preset(bool case1, bool u2g) {
    KeyValueMap kv;
    kv.set("direction", u2g ? "u2g" : "g2u");
    kv.set("ground_x", "0");
    kv.set("ground_y", "0");
    kv.set("eaves_x", "200");
    kv.set("eaves_y", "0");
    kv.set("altitude_m", "100");
    kv.set("gamma0_db", "80");
    kv.set("v_max", "3");
    kv.set("slot_len_s", "0.5");
    kv.set("flight_period_s", "600");
    kv.set("start_x", case1 ? "100" : "-500");
    kv.set("start_y", case1 ? "600" : "-150");
    kv.set("final_x", case1 ? "100" : "700");
    kv.set("final_y", case1 ? "-600" : "-150");
    kv.set("avg_power_dbm", "-5");
    kv.set("pathloss_exp", "3");
    return kv;
}

} // namespace

void KeyValueMap::set(const std::string& key, const std::string& value) {
    auto it = index_.find(key);
    if (it == index_.end()) {
        index_[key] = entries_.size();
        entries_.emplace_back(key, value);
    } else {
        entries_[it->second].second = value;
    }
}

bool KeyValueMap::has(const std::string& key) const { return index_.count(key) != 0; }

const std::string& KeyValueMap::get(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw ConfigParseError("missing required key '" + key + "'");
    return entries_[it->second].second;
}

KeyValueMap parse_config_text(const std::string& text, const std::string& origin) {
    KeyValueMap kv;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream oss;
            oss << origin << ":" << line_no << ": expected 'key = value'";
            throw ConfigParseError(oss.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            std::ostringstream oss;
            oss << origin << ":" << line_no << ": empty key or value";
            throw ConfigParseError(oss.str());
        }
        if (!known_keys().count(key)) {
            std::ostringstream oss;
            oss << origin << ":" << line_no << ": unknown key '" << key << "'";
            throw ConfigParseError(oss.str());
        }
        kv.set(key, value);
    }
    return kv;
}

KeyValueMap parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigParseError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::vector<std::string> preset_names() {
    return {"case1-u2g", "case2-u2g", "case1-g2u", "case2-g2u"};
}

KeyValueMap preset_config(const std::string& name) {
    if (name == "case1-u2g") return case_preset(true, true);
    if (name == "case2-u2g") return case_preset(false, true);
    if (name == "case1-g2u") return case_preset(true, false);
    if (name == "case2-g2u") return case_preset(false, false);
    throw ConfigParseError("unknown preset '" + name + "'");
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

RunConfig resolve_config(const KeyValueMap& keys) {
    for (const auto& [key, value] : keys.entries()) {
        (void)value;
        if (!known_keys().count(key)) throw ConfigParseError("unknown key '" + key + "'");
    }
    for (const std::string& key : required_keys())
        if (!keys.has(key)) throw ConfigParseError("missing required key '" + key + "'");

    RunConfig cfg;
    Scenario& s = cfg.scenario;

    const std::string& dir = keys.get("direction");
    if (dir == "u2g") s.direction = LinkDirection::U2G;
    else if (dir == "g2u") s.direction = LinkDirection::G2U;
    else throw ConfigParseError("key 'direction': expected 'u2g' or 'g2u', got '" + dir + "'");

    s.ground_pos = {parse_number(keys, "ground_x"), parse_number(keys, "ground_y")};
    s.eaves_pos = {parse_number(keys, "eaves_x"), parse_number(keys, "eaves_y")};
    s.altitude_m = parse_number(keys, "altitude_m");
    s.ref_snr = db_to_linear(parse_number(keys, "gamma0_db"));
    s.v_max = parse_number(keys, "v_max");
    s.slot_len_s = keys.has("slot_len_s") ? parse_number(keys, "slot_len_s") : 0.5;
    if (!(s.slot_len_s > 0.0)) throw ConfigParseError("key 'slot_len_s': must be > 0");
    const double period = parse_number(keys, "flight_period_s");
    s.num_slots = static_cast<int>(std::llround(period / s.slot_len_s));
    s.start_pos = {parse_number(keys, "start_x"), parse_number(keys, "start_y")};
    s.final_pos = {parse_number(keys, "final_x"), parse_number(keys, "final_y")};
    s.avg_power_w = dbm_to_watts(parse_number(keys, "avg_power_dbm"));
    s.peak_power_w = keys.has("peak_power_dbm")
                         ? dbm_to_watts(parse_number(keys, "peak_power_dbm"))
                         : 4.0 * s.avg_power_w;
    s.pathloss_exp = keys.has("pathloss_exp") ? parse_number(keys, "pathloss_exp") : 3.0;

    cfg.epsilon = keys.has("epsilon") ? parse_number(keys, "epsilon") : 1e-4;
    cfg.max_iter = keys.has("max_iter") ? static_cast<int>(parse_integer(keys, "max_iter")) : 200;
    cfg.mc_samples =
        keys.has("mc_samples") ? static_cast<int>(parse_integer(keys, "mc_samples")) : 5000;
    cfg.seed = keys.has("seed") ? parse_seed(keys, "seed") : 1;
    cfg.out_dir = keys.has("out_dir") ? keys.get("out_dir") : ".";

    if (keys.has("schemes") && keys.get("schemes") != "all") {
        std::stringstream ss(keys.get("schemes"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            Scheme scheme;
            item = trim(item);
            if (!scheme_from_slug(item, scheme))
                throw ConfigParseError("key 'schemes': unknown scheme '" + item + "'");
            cfg.schemes.push_back(scheme);
        }
        if (cfg.schemes.empty()) throw ConfigParseError("key 'schemes': empty list");
    } else {
        cfg.schemes = all_schemes();
    }

    const std::string axis = keys.has("sweep_axis") ? keys.get("sweep_axis") : "none";
    if (axis == "none") {
        cfg.axis = RunConfig::Axis::None;
        cfg.sweep_values = {period};
    } else if (axis == "flight_period") {
        cfg.axis = RunConfig::Axis::FlightPeriod;
        cfg.sweep_values = parse_number_list(keys, "sweep_values");
    } else if (axis == "avg_power") {
        cfg.axis = RunConfig::Axis::AvgPower;
        cfg.sweep_values = parse_number_list(keys, "sweep_values");
    } else {
        throw ConfigParseError(
            "key 'sweep_axis': expected none|flight_period|avg_power, got '" + axis + "'");
    }

    return cfg;
}

KeyValueMap config_to_keys(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    KeyValueMap kv;
    kv.set("direction", s.direction == LinkDirection::U2G ? "u2g" : "g2u");
    kv.set("ground_x", format_double(s.ground_pos.x));
    kv.set("ground_y", format_double(s.ground_pos.y));
    kv.set("eaves_x", format_double(s.eaves_pos.x));
    kv.set("eaves_y", format_double(s.eaves_pos.y));
    kv.set("altitude_m", format_double(s.altitude_m));
    kv.set("gamma0_db", format_double(10.0 * std::log10(s.ref_snr)));
    kv.set("v_max", format_double(s.v_max));
    kv.set("slot_len_s", format_double(s.slot_len_s));
    kv.set("flight_period_s", format_double(s.num_slots * s.slot_len_s));
    kv.set("start_x", format_double(s.start_pos.x));
    kv.set("start_y", format_double(s.start_pos.y));
    kv.set("final_x", format_double(s.final_pos.x));
    kv.set("final_y", format_double(s.final_pos.y));
    kv.set("avg_power_dbm", format_double(watts_to_dbm(s.avg_power_w)));
    kv.set("peak_power_dbm", format_double(watts_to_dbm(s.peak_power_w)));
    kv.set("pathloss_exp", format_double(s.pathloss_exp));
    kv.set("epsilon", format_double(cfg.epsilon));
    kv.set("max_iter", std::to_string(cfg.max_iter));
    kv.set("mc_samples", std::to_string(cfg.mc_samples));
    kv.set("seed", std::to_string(cfg.seed));
    std::string schemes;
    for (Scheme scheme : cfg.schemes) {
        if (!schemes.empty()) schemes += ',';
        schemes += scheme_slug(scheme);
    }
    kv.set("schemes", schemes);
    switch (cfg.axis) {
        case RunConfig::Axis::None: kv.set("sweep_axis", "none"); break;
        case RunConfig::Axis::FlightPeriod: kv.set("sweep_axis", "flight_period"); break;
        case RunConfig::Axis::AvgPower: kv.set("sweep_axis", "avg_power"); break;
    }
    if (cfg.axis != RunConfig::Axis::None) {
        std::string values;
        for (double v : cfg.sweep_values) {
            if (!values.empty()) values += ',';
            values += format_double(v);
        }
        kv.set("sweep_values", values);
    }
    kv.set("out_dir", cfg.out_dir);
    return kv;
}

std::string render_manifest(const RunConfig& cfg, const KeyValueMap& resolved_keys) {
    std::ostringstream out;
    out << "# resolved run configuration; feed back as a config file to reproduce\n";
    out << "# scenario_hash = " << scenario_hash(cfg.scenario) << "\n";
    if (cfg.axis == RunConfig::Axis::FlightPeriod) {
        out << "# num_slots per point:";
        for (double t : cfg.sweep_values)
            out << ' ' << static_cast<long long>(std::llround(t / cfg.scenario.slot_len_s));
        out << "\n";
    } else {
        out << "# num_slots = " << cfg.scenario.num_slots
            << " (flight_period_s rounded to slot_len_s grid)\n";
    }
    for (const auto& [key, value] : resolved_keys.entries())
        out << key << " = " << value << "\n";
    return out.str();
}

} // namespace uavsec
