#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "sqzdisp/errors.hpp"
#include "sqzdisp/io.hpp"
#include "sqzdisp/scenario.hpp"

namespace fs = std::filesystem;
using namespace sqzdisp;

namespace {

// A built-in id wins over a file of the same name only when no such file exists.
scenario::Config resolve(const std::string& what) {
    if (fs::exists(what)) return scenario::load(what);
    for (const auto& e : scenario::catalog())
        if (e.id == what) return scenario::builtin(what);
    throw ConfigInvalid(std::vector<ConfigInvalid::Diagnostic>{
        {"scenario", "'" + what + "' is neither a built-in scenario nor a readable file"}});
}

fs::path default_out_dir() {
    if (const char* env = std::getenv("SQZDISP_OUT_DIR"); env && *env) return env;
    return "sqzdisp_out";
}

int report(const ConfigInvalid& e) {
    std::cerr << "config invalid:\n";
    for (const auto& d : e.diagnostics) std::cerr << "  " << d.field << ": " << d.message << "\n";
    return static_cast<int>(ErrorKind::config_invalid);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatially squeezed displacement measurement scenarios"};
    app.require_subcommand(1);

    std::string target;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_order;
    std::optional<int> threads;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "Run a built-in scenario or a scenario file");
    run->add_option("scenario", target, "Built-in id or YAML path")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out-dir", out_dir, "Output directory (default $SQZDISP_OUT_DIR or ./sqzdisp_out)");
    run->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    run->add_option("--max-order", max_order, "Mode expansion order for cavity calculations")->check(CLI::Range(2, 60));

    auto* list = app.add_subcommand("list", "List built-in scenarios");

    std::string validate_target;
    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("file", validate_target, "YAML path or built-in id")->required();

    std::string manifest, golden_dir;
    auto* diff = app.add_subcommand("diff", "Compare a run against golden files");
    diff->add_option("manifest", manifest, "Manifest written by run")->required()->check(CLI::ExistingFile);
    diff->add_option("golden_dir", golden_dir, "Directory of golden CSVs")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::generic);
    }

    try {
        if (*list) {
            for (const auto& e : scenario::catalog()) {
                const auto cfg = scenario::builtin(e.id);
                std::cout << e.id << "\t" << scenario::kind_name(cfg.kind) << "\t" << cfg.description << "\n";
            }
        } else if (*validate) {
            const auto cfg = resolve(validate_target);
            const auto diags = scenario::validate(cfg);
            if (!diags.empty()) return report(ConfigInvalid(diags));
            std::cout << cfg.id << ": ok\n";
        } else if (*run) {
            if (threads) omp_set_num_threads(*threads);
            const auto cfg = resolve(target);
            scenario::Options opt;
            opt.seed = seed;
            opt.max_order = max_order;
            const auto result = scenario::run(cfg, opt);
            const auto path = scenario::write(result, cfg, out_dir.empty() ? default_out_dir() : fs::path(out_dir));
            std::cout << path.string() << "\n";
        } else if (*diff) {
            const auto r = io::diff_golden(manifest, golden_dir);
            std::cout << r.files << " files, " << r.cells << " cells match\n";
        }
    } catch (const ConfigInvalid& e) {
        return report(e);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::generic);
    }
    return 0;
}
