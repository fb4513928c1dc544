#include "scbf/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <tuple>

#include "scbf/errors.hpp"

namespace scbf::fft {

namespace {

// Plans created once per (shape, sign) under a lock; FFTW_UNALIGNED keeps the
// new-array execute valid for any caller buffer, FFTW_ESTIMATE keeps plan
// selection deterministic across runs.
class PlanCache {
public:
    fftw_plan get(int rank, const int* dims, int sign) {
        std::array<int, 3> key_dims{0, 0, 0};
        for (int i = 0; i < rank; ++i) key_dims[static_cast<std::size_t>(i)] = dims[i];
        const Key key{rank, key_dims, sign};

        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::size_t total = 1;
        for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(dims[i]);
        std::vector<std::complex<double>> scratch(total);
        fftw_plan p = fftw_plan_dft(
            rank, dims, reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw ConfigurationError("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

private:
    using Key = std::tuple<int, std::array<int, 3>, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void transform(std::complex<double>* data, int rank, const int* dims, int sign) {
    fftw_plan p = cache().get(rank, dims, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

std::vector<std::complex<double>> to_physical(const TorusDomain& dom,
                                              const std::complex<double>* comp, int m) {
    const int dim = dom.dim();
    const int n = dom.resolution();
    if (m < n) throw ConfigurationError("physical grid must be at least the spectral resolution");

    std::size_t mtotal = 1;
    for (int d = 0; d < dim; ++d) mtotal *= static_cast<std::size_t>(m);
    std::vector<std::complex<double>> grid(mtotal, std::complex<double>(0.0, 0.0));

    // place each retained mode at bin (k mod m)
    const std::size_t nmodes = dom.num_modes();
    for (std::size_t flat = 0; flat < nmodes; ++flat) {
        const auto k = dom.wavevector(flat);
        std::size_t g = 0;
        for (int d = 0; d < dim; ++d) {
            const int bin = k[static_cast<std::size_t>(d)] >= 0
                                ? k[static_cast<std::size_t>(d)]
                                : k[static_cast<std::size_t>(d)] + m;
            g = g * static_cast<std::size_t>(m) + static_cast<std::size_t>(bin);
        }
        grid[g] = comp[flat];
    }

    int dims[3] = {m, m, m};
    transform(grid.data(), dim, dims, +1);
    return grid;
}

void from_physical(const TorusDomain& dom, std::vector<std::complex<double>>& grid, int m,
                   std::complex<double>* comp_out) {
    const int dim = dom.dim();
    const int n = dom.resolution();
    int dims[3] = {m, m, m};
    transform(grid.data(), dim, dims, -1);

    std::size_t mtotal = 1;
    for (int d = 0; d < dim; ++d) mtotal *= static_cast<std::size_t>(m);
    const double scale = 1.0 / static_cast<double>(mtotal);

    const std::size_t nmodes = dom.num_modes();
    for (std::size_t flat = 0; flat < nmodes; ++flat) {
        const auto k = dom.wavevector(flat);
        bool nyquist = false;
        for (int d = 0; d < dim; ++d)
            if (k[static_cast<std::size_t>(d)] == n / 2) nyquist = true;
        if (nyquist) {
            comp_out[flat] = std::complex<double>(0.0, 0.0);
            continue;
        }
        std::size_t g = 0;
        for (int d = 0; d < dim; ++d) {
            const int bin = k[static_cast<std::size_t>(d)] >= 0
                                ? k[static_cast<std::size_t>(d)]
                                : k[static_cast<std::size_t>(d)] + m;
            g = g * static_cast<std::size_t>(m) + static_cast<std::size_t>(bin);
        }
        comp_out[flat] = grid[g] * scale;
    }
}

}  // namespace scbf::fft
