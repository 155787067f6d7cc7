#include "rsl/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace rsl {

namespace {

// One plan pair per (n, comps). Plans are created once under a lock; execution
// uses fftw_execute_dft on thread-local buffers (safe concurrently), so
// independent fields can transform in parallel with identical results.
struct PlanPair {
    int n = 0, comps = 0;
    long total = 0;
    fftw_complex* proto = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;

    PlanPair(int n_, int comps_) : n(n_), comps(comps_) {
        total = static_cast<long>(n) * n * n * comps;
        proto = fftw_alloc_complex(total);
        int dims[3] = {n, n, n};
        fwd = fftw_plan_many_dft(3, dims, comps, proto, nullptr, comps, 1, proto, nullptr, comps, 1,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_many_dft(3, dims, comps, proto, nullptr, comps, 1, proto, nullptr, comps, 1,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
    }
    ~PlanPair() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(proto);
    }
};

std::mutex registry_mtx;

PlanPair& plan_for(int n, int comps) {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> registry;
    std::lock_guard<std::mutex> lk(registry_mtx);
    auto key = std::make_pair(n, comps);
    auto it = registry.find(key);
    if (it == registry.end())
        it = registry.emplace(key, std::make_unique<PlanPair>(n, comps)).first;
    return *it->second;
}

// thread-local scratch, grown on demand, fftw-aligned
fftw_complex* scratch(long total) {
    struct Buf {
        fftw_complex* p = nullptr;
        long cap = 0;
        ~Buf() { fftw_free(p); }
    };
    static thread_local Buf buf;
    if (buf.cap < total) {
        fftw_free(buf.p);
        buf.p = fftw_alloc_complex(total);
        buf.cap = total;
    }
    return buf.p;
}

void execute(const std::vector<cplx>& in, std::vector<cplx>& out, int n, int comps,
             bool forward_dir) {
    PlanPair& pp = plan_for(n, comps);
    fftw_complex* b = scratch(pp.total);
    auto* bc = reinterpret_cast<cplx*>(b);
    std::copy(in.begin(), in.end(), bc);
    fftw_execute_dft(forward_dir ? pp.fwd : pp.bwd, b, b);
    const double scale = 1.0 / std::pow(static_cast<double>(n), 1.5);
    out.resize(in.size());
    for (size_t i = 0; i < in.size(); ++i) out[i] = bc[i] * scale;
}

} // namespace

PhysicalField backward(const SpectralField& f) {
    PhysicalField u;
    u.grid = f.grid;
    u.comps = f.comps;
    execute(f.a, u.a, f.grid.n, f.comps, false);
    return u;
}

SpectralField forward(const PhysicalField& u) {
    SpectralField f;
    f.grid = u.grid;
    f.comps = u.comps;
    execute(u.a, f.a, u.grid.n, u.comps, true);
    return f;
}

PhysicalField backward_component(const SpectralField& f, int c) {
    return backward(f.component(c));
}

} // namespace rsl
