#include "awf/config.hpp"
#include "awf/errors.hpp"
#include "awf/experiments.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace {

int compare_reports(const std::string& lhs, const std::string& rhs) {
    const auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw awf::ArgumentError("cannot open " + path);
        }
        return awf::Json::parse(in);
    };
    const bool same = awf::reports_equal(load(lhs), load(rhs));
    std::cout << (same ? "identical" : "different") << " (metadata ignored)\n";
    return same ? awf::exit_pass : awf::exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine wavelet frame verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    const std::map<std::string, std::string> about{
        {"calderon", "Calderon sum over the frequency grid against |det P|"},
        {"frame-bounds", "frame bounds on a band-limited test space, Bessel and covolume checks"},
        {"transform-identity", "Plancherel identity of the semi-continuous transform"},
        {"quasilattice-check", "unique factorisation, separation/density and covolume of the quasi-lattice"},
        {"wavelet-set-check", "dilation and translation tiling of an indicator wavelet set"},
        {"full-report", "all checks on the built-in fixtures"},
    };
    for (const auto& name : awf::subcommand_names()) {
        const auto it = about.find(name);
        auto* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides AWF_OUT_DIR and outputs.dir)");
        sub->add_option("--seed", seed, "random seed (overrides the config)");
    }
    std::string lhs;
    std::string rhs;
    auto* cmp = app.add_subcommand("compare", "compare two reports, ignoring metadata");
    cmp->add_option("lhs", lhs)->required();
    cmp->add_option("rhs", rhs)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : awf::exit_error;
    }

    try {
        if (cmp->parsed()) {
            return compare_reports(lhs, rhs);
        }
        const std::string name = app.get_subcommands().front()->get_name();
        awf::ExperimentConfig config = awf::load_config(config_path);
        if (seed) {
            config.seed = *seed;
        }
        if (!out_dir) {
            if (const char* env = std::getenv("AWF_OUT_DIR"); env && *env) {
                out_dir = env;
            }
        }
        const auto result = awf::run_subcommand(name, config, out_dir);
        std::cout << name << ": " << (result.status == awf::exit_pass ? "PASS" : "FAIL") << "\n";
        for (const auto& f : result.files) {
            std::cout << "  wrote " << f.string() << "\n";
        }
        return result.status;
    } catch (const awf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const awf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return awf::exit_error;
}
