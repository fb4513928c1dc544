#include "scbf/domain.hpp"

#include <algorithm>
#include <string>

#include "scbf/errors.hpp"

namespace scbf {

TorusDomain::TorusDomain(int dim, int resolution, int oversample)
    : dim_(dim), n_(resolution), oversample_(oversample) {
    num_modes_ = 1;
    for (int d = 0; d < dim_; ++d) num_modes_ *= static_cast<std::size_t>(n_);

    kvec_.resize(num_modes_);
    lam_.resize(num_modes_);
    sorted_lam_.reserve(num_modes_ - 1);
    for (std::size_t flat = 0; flat < num_modes_; ++flat) {
        std::array<int, 3> k{0, 0, 0};
        std::size_t rest = flat;
        // row-major: last axis fastest
        for (int d = dim_ - 1; d >= 0; --d) {
            const int bin = static_cast<int>(rest % static_cast<std::size_t>(n_));
            rest /= static_cast<std::size_t>(n_);
            k[static_cast<std::size_t>(d)] = freq(bin);
        }
        kvec_[flat] = k;
        const double l2 = static_cast<double>(k[0]) * k[0] +
                          static_cast<double>(k[1]) * k[1] +
                          static_cast<double>(k[2]) * k[2];
        lam_[flat] = l2;
        if (l2 > 0.0) sorted_lam_.push_back(l2);
    }
    std::sort(sorted_lam_.begin(), sorted_lam_.end());
}

TorusDomain make_domain(int dim, int resolution, int oversample) {
    if (dim != 2 && dim != 3)
        throw ConfigurationError("domain dim must be 2 or 3, got " + std::to_string(dim));
    if (resolution < 8 || resolution % 2 != 0)
        throw ConfigurationError("resolution must be an even integer >= 8, got " +
                                 std::to_string(resolution));
    if (oversample < 2)
        throw ConfigurationError("oversample factor must be >= 2, got " +
                                 std::to_string(oversample));
    return TorusDomain(dim, resolution, oversample);
}

}  // namespace scbf
