#ifndef FBFLOW_SCENARIOS_HPP
#define FBFLOW_SCENARIOS_HPP

#include <memory>
#include <string>
#include <vector>

#include "fbflow/config.hpp"
#include "fbflow/report.hpp"

namespace fbflow {

std::vector<std::string> builtin_scenario_names();
std::string builtin_scenario_text(const std::string& name);

// Loads a builtin scenario by name or a config file by path.
ScenarioConfig get_scenario(const std::string& name_or_path);

struct ScenarioSetup {
    ScenarioConfig cfg;
    std::unique_ptr<BarrierDomain> dom;
    InitialRegion region;
    Grid2 grid;
};
ScenarioSetup setup_scenario(const ScenarioConfig& cfg);

struct ScenarioOutput {
    VerificationReport report;
    std::string out_dir;
};

// Flow run + enabled checks; writes snapshots/, series.csv, report.json and
// the resolved config echo under <out_root>/<scenario>/<stamp>/.
ScenarioOutput run_scenario(const ScenarioConfig& cfg,
                            const std::string& out_root,
                            const std::string& stamp);

// Continuation solve (plus the (eps, sigma) sweep when configured) with the
// maximum-principle checks; writes the solution snapshot, sweep.csv and
// report.json.
ScenarioOutput run_translator_scenario(const ScenarioConfig& cfg,
                                       const std::string& out_root,
                                       const std::string& stamp);

// Flow run + rescaling about a spacetime center + classification + density
// ladder; writes ladder.csv and report.json.
ScenarioOutput run_blowup_scenario(const ScenarioConfig& cfg, Vec2 center,
                                   double t_star, double lambda,
                                   const std::string& out_root,
                                   const std::string& stamp);

// Runs the named suite ("fast" or "full"); throws ValidationError on other
// selectors. Outputs land under <out_root>/<scenario>/<stamp>/.
VerificationReport verify_all(const std::string& selector,
                              const std::string& out_root,
                              const std::string& stamp, bool parallel);

}  // namespace fbflow

#endif
