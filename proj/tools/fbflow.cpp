#include <cstdlib>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>

#include "fbflow/scenarios.hpp"

namespace {

std::string default_stamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&now));
    return buf;
}

std::string output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv("FBFLOW_OUT");
    if (env && *env) return env;
    return "out";
}

int report_exit(const fbflow::VerificationReport& rep) {
    int failed = 0;
    for (const auto& r : rep.records) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.scenario << " / "
                  << r.check << "\n";
        if (!r.pass) ++failed;
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fbflow: free-boundary mean curvature flow laboratory"};
    app.require_subcommand(1);

    std::string cfg_path, out_flag, stamp = default_stamp();
    double resolution = 0, until = 0, lambda = 0;
    std::string center_arg;
    bool parallel = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_flag, "output root directory");
        sub->add_option("--resolution", resolution, "override grid spacing h");
        sub->add_option("--stamp", stamp, "output subdirectory stamp");
    };

    CLI::App* run = app.add_subcommand("run", "run a flow scenario");
    run->add_option("config", cfg_path, "scenario name or config path")
        ->required();
    run->add_option("--until", until, "override run horizon");
    add_common(run);

    CLI::App* tr = app.add_subcommand("translator", "solve the graph problem");
    tr->add_option("config", cfg_path, "scenario name or config path")
        ->required();
    add_common(tr);

    CLI::App* bl = app.add_subcommand("blowup", "rescale about a spacetime point");
    bl->add_option("config", cfg_path, "scenario name or config path")
        ->required();
    bl->add_option("--center", center_arg, "x,y,t center (default: detected)");
    bl->add_option("--lambda", lambda, "rescaling factor");
    add_common(bl);

    CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
    std::string selector;
    ver->add_option("selector", selector, "fast or full")->required();
    ver->add_flag("--parallel", parallel, "run scenarios concurrently");
    add_common(ver);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            fbflow::ScenarioConfig cfg = fbflow::get_scenario(cfg_path);
            if (resolution > 0) cfg.h = resolution;
            if (until > 0) cfg.run.horizon = until;
            auto out =
                fbflow::run_scenario(cfg, output_root(out_flag), stamp);
            std::cout << "artifacts: " << out.out_dir << "\n";
            return report_exit(out.report);
        }
        if (tr->parsed()) {
            fbflow::ScenarioConfig cfg = fbflow::get_scenario(cfg_path);
            if (resolution > 0) cfg.h = resolution;
            auto out = fbflow::run_translator_scenario(
                cfg, output_root(out_flag), stamp);
            std::cout << "artifacts: " << out.out_dir << "\n";
            return report_exit(out.report);
        }
        if (bl->parsed()) {
            fbflow::ScenarioConfig cfg = fbflow::get_scenario(cfg_path);
            if (resolution > 0) cfg.h = resolution;
            fbflow::Vec2 center{0, 0};
            double t_star = -1;
            if (!center_arg.empty()) {
                double x, y, t;
                if (std::sscanf(center_arg.c_str(), "%lf,%lf,%lf", &x, &y,
                                &t) != 3)
                    throw fbflow::ValidationError("--center expects x,y,t");
                center = {x, y};
                t_star = t;
            }
            auto out = fbflow::run_blowup_scenario(
                cfg, center, t_star, lambda, output_root(out_flag), stamp);
            std::cout << "artifacts: " << out.out_dir << "\n";
            return report_exit(out.report);
        }
        if (ver->parsed()) {
            auto rep = fbflow::verify_all(selector, output_root(out_flag),
                                          stamp, parallel);
            return report_exit(rep);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
