#ifndef FBFLOW_SNAPSHOT_HPP
#define FBFLOW_SNAPSHOT_HPP

#include <string>

#include "fbflow/grid.hpp"

namespace fbflow {

// FBFLOW binary snapshot: magic "FBFLOW01", version u32, mode u8, nx u32,
// ny u32, origin 2xf64, h f64, t f64, then a row-major little-endian f64
// payload. Round trips are bit exact.
void write_snapshot(const std::string& path, const GridField& field, double t);

struct LoadedSnapshot {
    GridField field;
    double t = 0;
    uint32_t version = 0;
};
LoadedSnapshot read_snapshot(const std::string& path);

}  // namespace fbflow

#endif
