#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "horoflow/runconfig.hpp"

namespace {

int emit_error(const char* type, const std::string& message, int code) {
    std::string msg = message;
    for (auto& ch : msg)
        if (ch == '"' || ch == '\\' || ch == '\n') ch = ' ';
    std::fprintf(stderr, "{\"error\":{\"type\":\"%s\",\"message\":\"%s\"}}\n", type, msg.c_str());
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{ "horoflow: translating solitons and horosphere stability under mean curvature "
                  "flow in hyperbolic space" };
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool quiet = false;
    const char* names[] = { "catenoid", "grim-reaper", "flow", "stability", "verify" };
    const char* blurbs[] = { "integrate a translating catenoid (or a radius sweep)",
                             "integrate a grim reaper profile",
                             "run the radial graph flow and record the trajectory",
                             "run a horosphere stability experiment with catenoid barriers",
                             "run the formula residual suite" };
    for (int k = 0; k < 5; ++k) {
        CLI::App* sub = app.add_subcommand(names[k], blurbs[k]);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub_name = app.get_subcommands().front()->get_name();

    std::string text;
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) return emit_error("config", "cannot read config file " + config_path, 2);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    try {
        horoflow::RunConfig cfg = horoflow::parse_config(text);
        if (sub_name != horoflow::command_name(cfg.command))
            throw horoflow::ConfigError("config: command \"" +
                                        std::string(horoflow::command_name(cfg.command)) +
                                        "\" does not match subcommand \"" + sub_name + "\"");
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.quiet = quiet;
        horoflow::run(cfg);
    } catch (const horoflow::ConfigError& e) {
        return emit_error("config", e.what(), 2);
    } catch (const horoflow::DomainError& e) {
        return emit_error("numerical", e.what(), 3);
    } catch (const horoflow::NumericalError& e) {
        return emit_error("numerical", e.what(), 3);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), 3);
    }
    return 0;
}
