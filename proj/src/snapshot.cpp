#include "rsl/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace rsl {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts unsupported");

namespace {
constexpr char kMagic[4] = {'R', 'L', 'B', '1'};
}

void write_snapshot(const std::string& path, const SpectralField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    const std::uint32_t comps = static_cast<std::uint32_t>(f.comps);
    const std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
    out.write(reinterpret_cast<const char*>(&comps), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&f.grid.box_length), 8);
    // std::complex<double> is laid out as (re, im) f64 pairs
    out.write(reinterpret_cast<const char*>(f.a.data()),
              static_cast<std::streamsize>(f.a.size() * sizeof(cplx)));
    if (!out) throw std::runtime_error("write failed for " + path);
}

SpectralField read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a RLB1 snapshot");
    std::uint32_t comps = 0, n = 0;
    double box_length = 0.0;
    in.read(reinterpret_cast<char*>(&comps), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&box_length), 8);
    if (!in || comps == 0 || n == 0 || n % 2 != 0 || !(box_length > 0.0))
        throw std::runtime_error(path + ": corrupt snapshot header");
    TorusGrid g{static_cast<int>(n), box_length};
    SpectralField f(g, static_cast<int>(comps));
    in.read(reinterpret_cast<char*>(f.a.data()),
            static_cast<std::streamsize>(f.a.size() * sizeof(cplx)));
    if (!in) throw std::runtime_error(path + ": truncated snapshot");
    return f;
}

} // namespace rsl
