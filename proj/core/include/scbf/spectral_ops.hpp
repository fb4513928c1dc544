#pragma once

#include <map>
#include <vector>

#include "scbf/field.hpp"

namespace scbf {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// (2pi)^dim volume element factor of the domain.
double domain_volume(const TorusDomain& dom);

/// H inner product <u,v> = int u.v dx via Parseval.
double inner_h(const SpectralField& u, const SpectralField& v);

/// ||u||_H (Parseval, exact).
double norm_h(const SpectralField& u);

/// ||u||_V = ||grad u||_H (Parseval, exact).
double norm_v(const SpectralField& u);

/// ||u||_{L^p}, p >= 1, by rectangle-rule quadrature on the oversampled grid.
double norm_lp(const SpectralField& u, double p);

/// int |v(x)|^{r-1} |w(x)|^2 dx on the oversampled grid, r >= 1.
double weighted_h_norm_sq(const SpectralField& w, const SpectralField& v, double r);

/// Mode-wise projection onto divergence-free fields: u_k -> (I - kk^T/|k|^2) u_k.
/// Also zeroes the mean mode. Idempotent and self-adjoint in H.
SpectralField leray_project(const SpectralField& u);

/// Stokes operator: u_k -> |k|^2 u_k.
SpectralField stokes_apply(const SpectralField& u);

/// (c A)^{-1} on the zero-mean subspace: u_k -> u_k / (c |k|^2).
SpectralField stokes_inverse(const SpectralField& u, double c);

/// A^{-1/2} for discrete dual norms: u_k -> u_k / |k|.
SpectralField stokes_inv_sqrt(const SpectralField& u);

/// Smoothing eigenprojection: u_k -> e^{-|k|^2/n} u_k when |k|^2 < n^2, else 0.
SpectralField smoothing_projection(const SpectralField& u, int n);

/// Truncated Fourier box projection: zero modes with any |k_i| > kmax.
SpectralField galerkin_truncate(const SpectralField& u, int kmax);

/// Seeded Hermitian divergence-free field with |u_k| = amplitude * |k|^{-decay}
/// on every retained (non-Nyquist, nonzero) mode and pseudorandom phases.
SpectralField random_divfree_field(const DomainPtr& dom, double decay, double amplitude,
                                   std::uint64_t seed);

/// Interpolation slack ||u||_{L^s}^theta ||u||_{L^t}^{1-theta} - ||u||_{L^r}
/// with 1/r = theta/s + (1-theta)/t.
double check_interpolation(const SpectralField& u, double s, double r, double t);

/// Physical samples of every component on an m-per-axis grid.
std::vector<std::vector<Complex>> to_physical_components(const SpectralField& u, int m);

/// Largest deviation from Hermitian symmetry u_{-k} = conj(u_k).
double hermitian_defect(const SpectralField& u);

/// Max over modes of |k . u_k| (0 for divergence-free fields).
double divergence_defect(const SpectralField& u);

}  // namespace scbf
