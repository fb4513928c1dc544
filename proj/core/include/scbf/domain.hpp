#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace scbf {

/// Periodic box [0,2pi]^dim sampled with `resolution` modes per axis.
/// Wavenumbers per axis run over {-N/2+1, ..., N/2} in FFT bin order; the
/// smallest nonzero Stokes eigenvalue is exactly 1.
class TorusDomain {
public:
    TorusDomain() = default;
    TorusDomain(int dim, int resolution, int oversample);

    int dim() const { return dim_; }
    int resolution() const { return n_; }
    int oversample() const { return oversample_; }

    /// Spectral points per component (resolution^dim).
    std::size_t num_modes() const { return num_modes_; }

    /// Integer frequency carried by an FFT bin index on one axis.
    int freq(int bin) const { return bin <= n_ / 2 ? bin : bin - n_; }

    /// Frequency vector of a flattened (row-major) spectral index.
    const std::array<int, 3>& wavevector(std::size_t flat) const { return kvec_[flat]; }

    /// |k|^2 of a flattened spectral index.
    double eigenvalue(std::size_t flat) const { return lam_[flat]; }

    /// Stokes eigenvalues |k|^2 over all nonzero wavenumbers, ascending.
    const std::vector<double>& sorted_eigenvalues() const { return sorted_lam_; }

    bool operator==(const TorusDomain& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && oversample_ == o.oversample_;
    }
    bool operator!=(const TorusDomain& o) const { return !(*this == o); }

private:
    int dim_ = 0;
    int n_ = 0;
    int oversample_ = 0;
    std::size_t num_modes_ = 0;
    std::vector<std::array<int, 3>> kvec_;  // frequency vector per flattened bin
    std::vector<double> lam_;               // |k|^2 per flattened bin
    std::vector<double> sorted_lam_;        // nonzero eigenvalues ascending
};

/// Validates dim in {2,3}, even resolution >= 8, oversample >= 2.
TorusDomain make_domain(int dim, int resolution, int oversample = 4);

}  // namespace scbf
