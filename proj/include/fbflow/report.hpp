#ifndef FBFLOW_REPORT_HPP
#define FBFLOW_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "fbflow/levelset.hpp"

namespace fbflow {

struct CheckRecord {
    std::string check;
    std::string scenario;
    bool pass = false;
    std::map<std::string, double> measured;
    std::map<std::string, double> thresholds;
};

struct VerificationReport {
    std::vector<CheckRecord> records;

    void add(CheckRecord rec) { records.push_back(std::move(rec)); }
    void merge(const VerificationReport& other) {
        for (const auto& r : other.records) records.push_back(r);
    }
    bool all_pass() const {
        for (const auto& r : records)
            if (!r.pass) return false;
        return true;
    }
    std::string to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);
void write_series_csv(const std::string& path,
                      const std::vector<FlowTrajectory::DiagRow>& rows);

// rows of (eps, sigma, tau, max_u, min_v, fitted_c, pass)
struct SweepRow {
    double eps, sigma, tau, max_u, min_v, fitted_c;
    bool pass;
};
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace fbflow

#endif
