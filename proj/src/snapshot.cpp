#include "fbflow/snapshot.hpp"

#include <cstring>
#include <fstream>

namespace fbflow {

namespace {

constexpr char kMagic[8] = {'F', 'B', 'F', 'L', 'O', 'W', '0', '1'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v & 0xff),
                          (unsigned char)((v >> 8) & 0xff),
                          (unsigned char)((v >> 16) & 0xff),
                          (unsigned char)((v >> 24) & 0xff)};
    os.write((const char*)b, 4);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read((char*)b, 4);
    return (uint32_t)b[0] | ((uint32_t)b[1] << 8) | ((uint32_t)b[2] << 16) |
           ((uint32_t)b[3] << 24);
}

void put_f64(std::ostream& os, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = (unsigned char)((bits >> (8 * k)) & 0xff);
    os.write((const char*)b, 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read((char*)b, 8);
    uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= (uint64_t)b[k] << (8 * k);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const GridField& field,
                    double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write snapshot: " + path);
    os.write(kMagic, 8);
    put_u32(os, kVersion);
    unsigned char mode = field.grid.mode == Mode::planar ? 0 : 1;
    os.write((const char*)&mode, 1);
    put_u32(os, (uint32_t)field.grid.nx);
    put_u32(os, (uint32_t)field.grid.ny);
    put_f64(os, field.grid.origin.x);
    put_f64(os, field.grid.origin.y);
    put_f64(os, field.grid.h);
    put_f64(os, t);
    for (double v : field.data) put_f64(os, v);
}

LoadedSnapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read snapshot: " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw ParseError("bad snapshot magic in " + path);
    LoadedSnapshot out;
    out.version = get_u32(is);
    unsigned char mode;
    is.read((char*)&mode, 1);
    uint32_t nx = get_u32(is), ny = get_u32(is);
    double ox = get_f64(is), oy = get_f64(is);
    double h = get_f64(is);
    out.t = get_f64(is);
    Grid2 grid({ox, oy}, h, (int)nx, (int)ny,
               mode == 0 ? Mode::planar : Mode::axisym);
    out.field = GridField(grid);
    for (double& v : out.field.data) v = get_f64(is);
    if (!is) throw ParseError("truncated snapshot: " + path);
    return out;
}

}  // namespace fbflow
