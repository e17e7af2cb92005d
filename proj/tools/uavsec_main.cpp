#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavsec/convex_core.hpp"
#include "uavsec/runner.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 validation error, 4 solver error.
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-rate trajectory and transmit-power optimizer for UAV links"};

    std::string config_path;
    std::string preset;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string schemes;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool desk_scale = false;
    bool list_presets = false;

    app.add_option("config", config_path, "Config file (key = value lines, # comments)");
    app.add_option("--preset", preset, "Start from a built-in scenario preset");
    app.add_option("--set", sets, "Override key=value (repeatable, wins over file)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Random seed")->each([&](const std::string&) { have_seed = true; });
    app.add_option("--schemes", schemes, "Comma-separated scheme list or 'all'");
    app.add_flag("--desk-scale", desk_scale, "Coarsen the slot grid to 5 s for fast runs");
    app.add_flag("--list-presets", list_presets, "List preset names and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_presets) {
        for (const std::string& name : uavsec::preset_names()) std::cout << name << "\n";
        return 0;
    }

    try {
        uavsec::KeyValueMap keys;
        if (!preset.empty()) keys = uavsec::preset_config(preset);
        if (!config_path.empty()) {
            const uavsec::KeyValueMap file_keys = uavsec::parse_config_file(config_path);
            for (const auto& [k, v] : file_keys.entries()) keys.set(k, v);
        }
        if (preset.empty() && config_path.empty())
            throw uavsec::ConfigParseError("no config file and no --preset given");

        if (!out_dir.empty()) keys.set("out_dir", out_dir);
        if (have_seed) keys.set("seed", std::to_string(seed));
        if (!schemes.empty()) keys.set("schemes", schemes);
        if (desk_scale) keys.set("slot_len_s", "5");

        // --set pairs are applied last and win over everything else.
        for (const std::string& pair : sets) {
            const auto eq = pair.find('=');
            if (eq == std::string::npos || eq == 0)
                throw uavsec::ConfigParseError("--set expects key=value, got '" + pair + "'");
            const std::string key = pair.substr(0, eq);
            const std::string value = pair.substr(eq + 1);
            // Reuse the grammar checks (known key, non-empty value).
            const uavsec::KeyValueMap checked =
                uavsec::parse_config_text(key + " = " + value, "--set");
            for (const auto& [k, v] : checked.entries()) keys.set(k, v);
        }

        const uavsec::RunConfig cfg = uavsec::resolve_config(keys);
        uavsec::execute_run(cfg, std::cerr);
        return 0;
    } catch (const uavsec::ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const uavsec::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const uavsec::MaxIterationsError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const uavsec::NumericalBreakdownError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const uavsec::InfeasibleStartError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
