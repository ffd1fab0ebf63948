// Command-line front end: reads a JSON run configuration, executes the
// pipeline (or one inspection stage of it) and renders the result bundle.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "orbigw/pipeline.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw orbigw::ValidationError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(const std::string& config_path, const std::string& emit, int truncation_override,
        bool no_cache, const std::vector<std::string>& force_outputs) {
    orbigw::RunConfig cfg = orbigw::parse_config_text(read_input(config_path));
    if (truncation_override >= 0) cfg.truncation = truncation_override;
    if (!force_outputs.empty()) cfg.outputs = force_outputs;
    if (!emit.empty()) {
        if (emit != "text" && emit != "json" && emit != "csv")
            throw orbigw::StructuralError("unsupported format '" + emit + "'");
        cfg.format = emit;
    }
    if (const char* env = std::getenv("ORBIGW_CACHE_DIR"); env && *env) cfg.cache_dir = env;

    orbigw::ResultBundle bundle = orbigw::run_pipeline_cached(cfg, !no_cache);
    std::cout << orbigw::render(bundle.body, cfg.format);
    std::cerr << "[orbigw] " << (bundle.from_cache ? "cache hit" : "computed") << " in "
              << bundle.seconds << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbigw - genus-0 orbifold Gromov-Witten invariants of Calabi-Yau threefold "
                 "complete intersections in weighted projective stacks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string emit;
    int truncation = -1;
    bool no_cache = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to the JSON run configuration ('-' = stdin)")
            ->required();
        sub->add_option("--emit", emit, "output format: text|json|csv");
        sub->add_option("--truncation", truncation, "override the truncation total degree");
        sub->add_flag("--no-cache", no_cache, "bypass the result cache");
    };

    CLI::App* compute = app.add_subcommand("compute", "run the full pipeline");
    add_common(compute);
    CLI::App* sectors = app.add_subcommand("sectors", "inertia sectors of the target");
    add_common(sectors);
    CLI::App* basis = app.add_subcommand("basis", "admissible state-space basis");
    add_common(basis);
    CLI::App* git = app.add_subcommand("git", "extended weight matrix and multi-degrees");
    add_common(git);

    CLI11_PARSE(app, argc, argv);

    std::vector<std::string> force;
    if (sectors->parsed()) force = {"sectors"};
    if (basis->parsed()) force = {"basis"};
    if (git->parsed()) force = {"git"};

    try {
        return run(config_path, emit, truncation, no_cache, force);
    } catch (const orbigw::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const orbigw::NonInvertibleExtension& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const orbigw::CYViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const orbigw::NonInvertibleMap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const orbigw::ExtractionInconsistency& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const orbigw::InternalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
