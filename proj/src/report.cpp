#include "fbflow/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace fbflow {

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json root;
    root["checks"] = nlohmann::ordered_json::array();
    int passed = 0;
    for (const auto& r : records) {
        nlohmann::ordered_json rec;
        rec["check"] = r.check;
        rec["scenario"] = r.scenario;
        rec["pass"] = r.pass;
        nlohmann::ordered_json meas, thr;
        for (const auto& [k, v] : r.measured) meas[k] = v;
        for (const auto& [k, v] : r.thresholds) thr[k] = v;
        rec["measured"] = meas;
        rec["thresholds"] = thr;
        root["checks"].push_back(rec);
        if (r.pass) ++passed;
    }
    root["summary"]["total"] = (int)records.size();
    root["summary"]["passed"] = passed;
    root["summary"]["all_pass"] = passed == (int)records.size();
    return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << content;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_series_csv(const std::string& path,
                      const std::vector<FlowTrajectory::DiagRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "t,area,perimeter,min_h,max_h,max_ah,contact_err\n";
    for (const auto& r : rows)
        os << fmt(r.t) << ',' << fmt(r.area) << ',' << fmt(r.perimeter) << ','
           << fmt(r.min_h) << ',' << fmt(r.max_h) << ',' << fmt(r.max_ah)
           << ',' << fmt(r.contact_err) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "eps,sigma,tau,max_u,min_v,fitted_c,pass\n";
    for (const auto& r : rows)
        os << fmt(r.eps) << ',' << fmt(r.sigma) << ',' << fmt(r.tau) << ','
           << fmt(r.max_u) << ',' << fmt(r.min_v) << ',' << fmt(r.fitted_c)
           << ',' << (r.pass ? 1 : 0) << '\n';
}

}  // namespace fbflow
