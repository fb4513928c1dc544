#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "scbf/domain.hpp"
#include "scbf/errors.hpp"

namespace scbf {

using Complex = std::complex<double>;
using DomainPtr = std::shared_ptr<const TorusDomain>;

inline DomainPtr make_shared_domain(int dim, int resolution, int oversample = 4) {
    return std::make_shared<const TorusDomain>(make_domain(dim, resolution, oversample));
}

/// Velocity field stored as Fourier coefficients u(x) = sum_k u_k e^{ikx},
/// one coefficient array per vector component. Value semantics; the domain
/// is shared and immutable.
class SpectralField {
public:
    SpectralField() = default;

    explicit SpectralField(DomainPtr dom)
        : dom_(std::move(dom)),
          c_(static_cast<std::size_t>(dom_->dim()) * dom_->num_modes(), Complex(0.0, 0.0)) {}

    const TorusDomain& domain() const { return *dom_; }
    const DomainPtr& domain_ptr() const { return dom_; }
    bool empty() const { return !dom_; }

    Complex& at(int comp, std::size_t flat) { return c_[offset(comp) + flat]; }
    const Complex& at(int comp, std::size_t flat) const { return c_[offset(comp) + flat]; }

    Complex* component(int comp) { return c_.data() + offset(comp); }
    const Complex* component(int comp) const { return c_.data() + offset(comp); }

    std::size_t flat_index(const std::array<int, 3>& k) const {
        const int n = dom_->resolution();
        std::size_t flat = 0;
        for (int d = 0; d < dom_->dim(); ++d) {
            const int bin = k[d] >= 0 ? k[d] : k[d] + n;
            flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(bin);
        }
        return flat;
    }

    /// Sets u_k for all components and u_{-k} = conj(u_k).
    void set_mode_pair(const std::array<int, 3>& k, const std::vector<Complex>& value) {
        std::array<int, 3> mk{-k[0], -k[1], -k[2]};
        const std::size_t fk = flat_index(k);
        const std::size_t fmk = flat_index(mk);
        for (int c = 0; c < dom_->dim(); ++c) {
            at(c, fk) = value[static_cast<std::size_t>(c)];
            at(c, fmk) = std::conj(value[static_cast<std::size_t>(c)]);
        }
    }

    std::vector<Complex> mode(const std::array<int, 3>& k) const {
        const std::size_t f = flat_index(k);
        std::vector<Complex> v(static_cast<std::size_t>(dom_->dim()));
        for (int c = 0; c < dom_->dim(); ++c) v[static_cast<std::size_t>(c)] = at(c, f);
        return v;
    }

    void set_zero() { std::fill(c_.begin(), c_.end(), Complex(0.0, 0.0)); }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_domain(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_domain(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    /// *this += a*o
    SpectralField& axpy(double a, const SpectralField& o) {
        require_same_domain(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * o.c_[i];
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField b) { return b *= a; }

    void require_same_domain(const SpectralField& o) const {
        if (!dom_ || !o.dom_ || *dom_ != *o.dom_)
            throw ConfigurationError("spectral fields live on different domains");
    }

private:
    std::size_t offset(int comp) const {
        return static_cast<std::size_t>(comp) * dom_->num_modes();
    }

    DomainPtr dom_;
    std::vector<Complex> c_;
};

}  // namespace scbf
