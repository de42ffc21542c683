#ifndef FBFLOW_CONFIG_HPP
#define FBFLOW_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "fbflow/geometry.hpp"
#include "fbflow/grid.hpp"
#include "fbflow/levelset.hpp"
#include "fbflow/elliptic.hpp"

namespace fbflow {

// Scenario configuration, parsed from sectioned key = value text. Unknown
// keys are rejected with the offending path in the error message.
struct ScenarioConfig {
    std::string name = "scenario";
    Mode mode = Mode::planar;

    // [domain]
    std::string domain_shape;
    Vec2 domain_center{0, 0};
    double domain_radius = 1.0;
    double domain_r_in = 0, domain_r_out = 0;
    Vec2 domain_normal{0, 1};
    double domain_offset = 0;
    double domain_mid = 0, domain_halfwidth = 0;
    Vec2 domain_c1{0, 0}, domain_c2{0, 0};
    double domain_bulb_radius = 1.0, domain_neck_radius = 0.35;

    // [region]
    std::string region_shape;
    Vec2 region_center{0, 0};
    double region_radius = 0.5;
    Vec2 region_normal{0, 1};
    double region_mid = 0, region_halfwidth = 0.1, region_offset = 0;
    double region_r_in = 0, region_r_out = 0;
    double region_ring_radius = 0.6, region_tube_radius = 0.15;
    double region_z_center = 0;
    bool region_mean_convex = true;
    bool region_has_hole = false;
    Vec2 hole_center{0, 0};
    double hole_radius = 0;

    // [grid]
    double h = 1.0 / 64;
    Vec2 box_lo{-1, -1}, box_hi{1, 1};

    // [run]
    RunConfig run;

    // [translator]
    TranslatorParams translator;
    std::vector<double> sweep_eps, sweep_sigma;

    // [diagnostics]
    double blowup_threshold = 0.4;
    double H0 = -1;  // default 10/diam(D)
    double eps_cvx = 0.3;
    double c_grad = 10.0;
    double r_ext = -1;  // default reach/2

    // [output]
    std::string out_dir = "out";
    unsigned seed = 20240801;

    BarrierDomain make_domain() const;
    InitialRegion make_region(const BarrierDomain& dom) const;
    Grid2 make_grid() const;
    double resolved_H0(const BarrierDomain& dom) const;
    double resolved_r_ext(const BarrierDomain& dom) const;
    std::string echo() const;  // fully resolved config text
};

ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace fbflow

#endif
