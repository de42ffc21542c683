#include "fbflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fbflow {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using KV = std::map<std::string, std::map<std::string, std::string>>;

KV tokenize(const std::string& text) {
    KV out;
    std::istringstream in(text);
    std::string line, section = "scenario";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) +
                                 ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        out[section][key] = val;
    }
    return out;
}

struct Consumer {
    KV kv;

    bool has(const std::string& sec, const std::string& key) {
        auto s = kv.find(sec);
        return s != kv.end() && s->second.count(key);
    }
    std::string take(const std::string& sec, const std::string& key,
                     bool* found = nullptr) {
        auto s = kv.find(sec);
        if (s == kv.end() || !s->second.count(key)) {
            if (found) *found = false;
            return "";
        }
        if (found) *found = true;
        std::string v = s->second[key];
        s->second.erase(key);
        return v;
    }
    double take_num(const std::string& sec, const std::string& key,
                    double fallback) {
        bool found;
        std::string v = take(sec, key, &found);
        if (!found) return fallback;
        try {
            size_t pos;
            double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (...) {
            throw ValidationError(sec + "." + key + ": not a number: " + v);
        }
    }
    bool take_bool(const std::string& sec, const std::string& key,
                   bool fallback) {
        bool found;
        std::string v = take(sec, key, &found);
        if (!found) return fallback;
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ValidationError(sec + "." + key + ": not a boolean: " + v);
    }
    Vec2 take_vec(const std::string& sec, const std::string& key,
                  Vec2 fallback) {
        bool found;
        std::string v = take(sec, key, &found);
        if (!found) return fallback;
        size_t comma = v.find(',');
        if (comma == std::string::npos)
            throw ValidationError(sec + "." + key + ": expected x,y");
        try {
            return {std::stod(trim(v.substr(0, comma))),
                    std::stod(trim(v.substr(comma + 1)))};
        } catch (...) {
            throw ValidationError(sec + "." + key + ": expected x,y");
        }
    }
    std::vector<double> take_list(const std::string& sec,
                                  const std::string& key) {
        bool found;
        std::string v = take(sec, key, &found);
        std::vector<double> out;
        if (!found) return out;
        std::istringstream in(v);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw ValidationError(sec + "." + key + ": bad list item " +
                                      item);
            }
        }
        return out;
    }
    void reject_leftovers() const {
        for (const auto& [sec, keys] : kv)
            for (const auto& [key, val] : keys)
                throw ValidationError("unknown key: " + sec + "." + key);
    }
};

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
    Consumer c{tokenize(text)};
    ScenarioConfig cfg;

    bool found;
    std::string v = c.take("scenario", "name", &found);
    if (found) cfg.name = v;
    v = c.take("scenario", "mode", &found);
    if (found) {
        if (v == "planar") cfg.mode = Mode::planar;
        else if (v == "axisym") cfg.mode = Mode::axisym;
        else throw ValidationError("scenario.mode: planar or axisym");
    }

    cfg.domain_shape = c.take("domain", "shape", &found);
    if (!found) throw ValidationError("domain.shape is required");
    cfg.domain_center = c.take_vec("domain", "center", cfg.domain_center);
    cfg.domain_radius = c.take_num("domain", "radius", cfg.domain_radius);
    cfg.domain_r_in = c.take_num("domain", "r_in", cfg.domain_r_in);
    cfg.domain_r_out = c.take_num("domain", "r_out", cfg.domain_r_out);
    cfg.domain_normal =
        c.take_vec("domain", "normal", cfg.domain_normal).normalized();
    cfg.domain_offset = c.take_num("domain", "offset", cfg.domain_offset);
    cfg.domain_mid = c.take_num("domain", "mid", cfg.domain_mid);
    cfg.domain_halfwidth =
        c.take_num("domain", "halfwidth", cfg.domain_halfwidth);
    cfg.domain_c1 = c.take_vec("domain", "c1", cfg.domain_c1);
    cfg.domain_c2 = c.take_vec("domain", "c2", cfg.domain_c2);
    cfg.domain_bulb_radius =
        c.take_num("domain", "bulb_radius", cfg.domain_bulb_radius);
    cfg.domain_neck_radius =
        c.take_num("domain", "neck_radius", cfg.domain_neck_radius);

    cfg.region_shape = c.take("region", "shape", &found);
    if (!found) throw ValidationError("region.shape is required");
    cfg.region_center = c.take_vec("region", "center", cfg.region_center);
    cfg.region_radius = c.take_num("region", "radius", cfg.region_radius);
    cfg.region_normal =
        c.take_vec("region", "normal", cfg.region_normal).normalized();
    cfg.region_mid = c.take_num("region", "mid", cfg.region_mid);
    cfg.region_halfwidth =
        c.take_num("region", "halfwidth", cfg.region_halfwidth);
    cfg.region_offset = c.take_num("region", "offset", cfg.region_offset);
    cfg.region_r_in = c.take_num("region", "r_in", cfg.region_r_in);
    cfg.region_r_out = c.take_num("region", "r_out", cfg.region_r_out);
    cfg.region_ring_radius =
        c.take_num("region", "ring_radius", cfg.region_ring_radius);
    cfg.region_tube_radius =
        c.take_num("region", "tube_radius", cfg.region_tube_radius);
    cfg.region_z_center =
        c.take_num("region", "z_center", cfg.region_z_center);
    cfg.region_mean_convex =
        c.take_bool("region", "mean_convex", cfg.region_mean_convex);
    cfg.hole_center = c.take_vec("region", "hole_center", cfg.hole_center);
    cfg.hole_radius = c.take_num("region", "hole_radius", cfg.hole_radius);
    cfg.region_has_hole = cfg.hole_radius > 0;

    cfg.h = c.take_num("grid", "h", cfg.h);
    if (cfg.h <= 0) throw ValidationError("grid.h must be positive");
    cfg.box_lo = c.take_vec("grid", "box_lo", cfg.box_lo);
    cfg.box_hi = c.take_vec("grid", "box_hi", cfg.box_hi);
    if (cfg.box_hi.x <= cfg.box_lo.x || cfg.box_hi.y <= cfg.box_lo.y)
        throw ValidationError("grid.box must have positive extent");

    cfg.run.horizon = c.take_num("run", "horizon", cfg.run.horizon);
    if (cfg.run.horizon <= 0) throw ValidationError("run.horizon must be > 0");
    cfg.run.dt_factor = c.take_num("run", "dt_factor", cfg.run.dt_factor);
    cfg.run.delta_reg = c.take_num("run", "delta_reg", cfg.run.delta_reg);
    cfg.run.reinit_every =
        (int)c.take_num("run", "reinit_every", cfg.run.reinit_every);
    cfg.run.band_width =
        (int)c.take_num("run", "band_width", cfg.run.band_width);
    cfg.run.series_every =
        (int)c.take_num("run", "series_every", cfg.run.series_every);
    cfg.run.n_snapshots =
        (int)c.take_num("run", "n_snapshots", cfg.run.n_snapshots);
    cfg.run.snapshot_times = c.take_list("run", "snapshot_times");
    cfg.run.stop_on_extinction =
        c.take_bool("run", "stop_on_extinction", cfg.run.stop_on_extinction);
    cfg.run.mean_convex = cfg.region_mean_convex;

    cfg.translator.eps = c.take_num("translator", "eps", cfg.translator.eps);
    cfg.translator.sigma =
        c.take_num("translator", "sigma", cfg.translator.sigma);
    cfg.translator.tau = c.take_num("translator", "tau", cfg.translator.tau);
    cfg.translator.kappa_steps =
        (int)c.take_num("translator", "kappa_steps",
                        cfg.translator.kappa_steps);
    cfg.translator.newton_tol =
        c.take_num("translator", "newton_tol", cfg.translator.newton_tol);
    cfg.translator.weight_b =
        c.take_num("translator", "b", cfg.translator.weight_b);
    cfg.translator.weight_m =
        c.take_num("translator", "m", cfg.translator.weight_m);
    cfg.translator.decay_a =
        c.take_num("translator", "a", cfg.translator.decay_a);
    cfg.translator.monitor_lambda =
        c.take_num("translator", "lambda", cfg.translator.monitor_lambda);
    cfg.translator.monitor_theta =
        c.take_num("translator", "theta", cfg.translator.monitor_theta);
    cfg.sweep_eps = c.take_list("translator", "sweep_eps");
    cfg.sweep_sigma = c.take_list("translator", "sweep_sigma");

    cfg.blowup_threshold =
        c.take_num("diagnostics", "blowup_threshold", cfg.blowup_threshold);
    cfg.run.blowup_threshold = cfg.blowup_threshold;
    cfg.H0 = c.take_num("diagnostics", "h0", cfg.H0);
    cfg.eps_cvx = c.take_num("diagnostics", "eps_cvx", cfg.eps_cvx);
    cfg.c_grad = c.take_num("diagnostics", "c_grad", cfg.c_grad);
    cfg.r_ext = c.take_num("diagnostics", "r_ext", cfg.r_ext);

    v = c.take("output", "dir", &found);
    if (found) cfg.out_dir = v;
    cfg.seed = (unsigned)c.take_num("output", "seed", cfg.seed);

    c.reject_leftovers();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

BarrierDomain ScenarioConfig::make_domain() const {
    if (domain_shape == "disc")
        return BarrierDomain(DiscShape{domain_center, domain_radius}, mode);
    if (domain_shape == "annulus") {
        if (!(domain_r_in > 0 && domain_r_out > domain_r_in))
            throw ValidationError("domain: annulus needs 0 < r_in < r_out");
        return BarrierDomain(
            AnnulusShape{domain_center, domain_r_in, domain_r_out}, mode);
    }
    if (domain_shape == "halfplane")
        return BarrierDomain(HalfplaneShape{domain_normal, domain_offset},
                             mode);
    if (domain_shape == "slab") {
        if (domain_halfwidth <= 0)
            throw ValidationError("domain: slab needs halfwidth > 0");
        return BarrierDomain(
            SlabShape{domain_normal, domain_mid, domain_halfwidth}, mode);
    }
    if (domain_shape == "dumbbell")
        return BarrierDomain(DumbbellShape{domain_c1, domain_c2,
                                           domain_bulb_radius,
                                           domain_neck_radius},
                             mode);
    if (domain_shape == "ball") {
        if (mode != Mode::axisym)
            throw ValidationError("domain: ball requires axisym mode");
        return BarrierDomain(BallAxisymShape{domain_radius}, mode);
    }
    throw ValidationError("domain.shape: unknown shape " + domain_shape);
}

InitialRegion ScenarioConfig::make_region(const BarrierDomain& dom) const {
    std::optional<RegionHole> hole;
    if (region_has_hole) hole = RegionHole{hole_center, hole_radius};
    if (region_shape == "disc")
        return InitialRegion(RegionDisc{region_center, region_radius},
                             region_mean_convex, hole);
    if (region_shape == "slab")
        return InitialRegion(
            RegionSlab{region_normal, region_mid, region_halfwidth},
            region_mean_convex, hole);
    if (region_shape == "halfspace")
        return InitialRegion(RegionHalfspace{region_normal, region_offset},
                             region_mean_convex, hole);
    if (region_shape == "annulus_shell")
        return InitialRegion(
            RegionAnnulusShell{region_center, region_r_in, region_r_out},
            region_mean_convex, hole);
    if (region_shape == "torus_profile")
        return InitialRegion(
            RegionTorusProfile{region_ring_radius, region_tube_radius,
                               region_z_center},
            region_mean_convex, hole);
    if (region_shape == "half_torus")
        return InitialRegion(
            RegionHalfTorusProfile{region_ring_radius, region_tube_radius},
            region_mean_convex, hole);
    (void)dom;
    throw ValidationError("region.shape: unknown shape " + region_shape);
}

Grid2 ScenarioConfig::make_grid() const {
    return fbflow::make_grid(box_lo, box_hi, h, mode);
}

double ScenarioConfig::resolved_H0(const BarrierDomain& dom) const {
    if (H0 > 0) return H0;
    Vec2 lo, hi;
    dom.bounding_box(lo, hi);
    double diam = std::isfinite(lo.x) ? (hi - lo).norm()
                                      : (box_hi - box_lo).norm();
    return 10.0 / diam;
}

double ScenarioConfig::resolved_r_ext(const BarrierDomain& dom) const {
    if (r_ext > 0) return r_ext;
    double reach = dom.reach();
    if (!std::isfinite(reach)) reach = (box_hi - box_lo).norm();
    return 0.5 * reach;
}

std::string ScenarioConfig::echo() const {
    std::ostringstream os;
    os.precision(17);
    os << "[scenario]\nname = " << name << "\nmode = "
       << (mode == Mode::planar ? "planar" : "axisym") << "\n\n";
    os << "[domain]\nshape = " << domain_shape << "\ncenter = "
       << domain_center.x << "," << domain_center.y
       << "\nradius = " << domain_radius << "\nr_in = " << domain_r_in
       << "\nr_out = " << domain_r_out << "\nnormal = " << domain_normal.x
       << "," << domain_normal.y << "\noffset = " << domain_offset
       << "\nmid = " << domain_mid << "\nhalfwidth = " << domain_halfwidth
       << "\nc1 = " << domain_c1.x << "," << domain_c1.y
       << "\nc2 = " << domain_c2.x << "," << domain_c2.y
       << "\nbulb_radius = " << domain_bulb_radius
       << "\nneck_radius = " << domain_neck_radius << "\n\n";
    os << "[region]\nshape = " << region_shape << "\ncenter = "
       << region_center.x << "," << region_center.y
       << "\nradius = " << region_radius << "\nmean_convex = "
       << (region_mean_convex ? "true" : "false") << "\n\n";
    os << "[grid]\nh = " << h << "\nbox_lo = " << box_lo.x << "," << box_lo.y
       << "\nbox_hi = " << box_hi.x << "," << box_hi.y << "\n\n";
    os << "[run]\nhorizon = " << run.horizon
       << "\nn_snapshots = " << run.n_snapshots << "\n\n";
    os << "[translator]\neps = " << translator.eps
       << "\nsigma = " << translator.sigma << "\ntau = " << translator.tau
       << "\n\n";
    os << "[output]\nseed = " << seed << "\n";
    return os.str();
}

}  // namespace fbflow
