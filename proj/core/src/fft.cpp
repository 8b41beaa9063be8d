#include "besov/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "besov/error.hpp"

namespace besov {
namespace {

using PlanKey = std::tuple<std::vector<std::size_t>, std::size_t, int>;

// Plans are created once under the lock and never destroyed; executing a plan
// on fresh arrays through fftw_execute_dft is thread-safe.
fftw_plan plan_for(const std::vector<std::size_t>& sizes, std::size_t fiber, int sign) {
    static std::mutex mutex;
    static std::map<PlanKey, fftw_plan> cache;
    std::lock_guard lock(mutex);
    const PlanKey key{sizes, fiber, sign};
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    std::vector<int> dims(sizes.begin(), sizes.end());
    std::size_t total = fiber;
    for (auto n : sizes) total *= n;
    auto* in = fftw_alloc_complex(total);
    auto* out = fftw_alloc_complex(total);
    const int d = static_cast<int>(fiber);
    fftw_plan plan = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), d, in, nullptr,
                                        d, 1, out, nullptr, d, 1, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    require(plan != nullptr, ErrorCode::Unsupported, "FFT planner failed");
    cache.emplace(key, plan);
    return plan;
}

GridFunction transform(const GridFunction& f, int sign) {
    GridFunction out(f.grid(), f.fiber_dim(), f.fiber_p());
    const fftw_plan plan = plan_for(f.grid().sizes(), f.fiber_dim(), sign);
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(f.values().data()));
    fftw_execute_dft(plan, in, reinterpret_cast<fftw_complex*>(out.values().data()));
    return out;
}

}  // namespace

GridFunction forward_transform(const GridFunction& f) {
    GridFunction out = transform(f, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(f.grid().point_count());
    for (auto& v : out.values()) v *= scale;
    return out;
}

GridFunction inverse_transform(const GridFunction& spectrum) {
    return transform(spectrum, FFTW_BACKWARD);
}

void scale_modes(GridFunction& spectrum, const std::function<cplx(std::size_t)>& scale) {
    const std::size_t d = spectrum.fiber_dim();
    auto& v = spectrum.values();
    for (std::size_t j = 0; j < spectrum.point_count(); ++j) {
        const cplx s = scale(j);
        for (std::size_t c = 0; c < d; ++c) v[j * d + c] *= s;
    }
}

GridFunction spectral_derivative(const GridFunction& f, const MultiIndex& alpha) {
    require(alpha.dim() == f.grid().dim(), ErrorCode::DimensionMismatch,
            "multi-index has " + std::to_string(alpha.dim()) + " components, grid has " +
                std::to_string(f.grid().dim()) + " axes");
    if (alpha.order() == 0) return f;
    GridFunction spec = forward_transform(f);
    const Grid& g = f.grid();
    scale_modes(spec, [&](std::size_t j) {
        const auto xi = g.frequency(j);
        return monomial(alpha, xi);
    });
    return inverse_transform(spec);
}

std::string fft_library_version() { return fftw_version; }

}  // namespace besov
