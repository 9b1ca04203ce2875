#pragma once

// The truncated sampling density
//
//   rho(x) = 1/2 [ (1/k) sum_{j<k} b_{j+1}(x)^2 + sum_{k<=j<m} p_j b_{j+1}(x)^2 ],
//   p_j = a_j^2 / sum_{k<=i<m} a_i^2,
//
// and i.i.d. sampling from it. Each b_{j+1}^2 is a product of 1-d densities
// (1, 1 + cos(4 pi f x) or 1 - cos(4 pi f x)), so a draw picks a mixture
// component and then inverts one 1-d CDF per coordinate.

#include "sampnum/spectral_space.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sampnum {

class DensityParams {
public:
    // Requires 1 <= k < m <= basis->size().
    DensityParams(std::shared_ptr<const OrderedBasis> basis, std::size_t k, std::size_t m);

    const OrderedBasis& basis() const noexcept { return *basis_; }
    const std::shared_ptr<const OrderedBasis>& basis_ptr() const noexcept { return basis_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t m() const noexcept { return m_; }
    int dim() const noexcept { return basis_->dim(); }

    // p_j for j in [k, m), stored at offset j - k
    std::span<const double> tail_weights() const noexcept { return tail_weights_; }
    // Mixture component for a uniform draw u in [0,1) over the tail block.
    std::size_t pick_tail(double u) const;

private:
    std::shared_ptr<const OrderedBasis> basis_;
    std::size_t k_;
    std::size_t m_;
    std::vector<double> tail_weights_;
    std::vector<double> tail_cdf_;
};

// Throws DomainError unless x lies in [0,1)^d.
double density_eval(const DensityParams& params, std::span<const double> x);

enum class FactorKind { constant, cosine, sine };

// 1-d factor density of b^{(1)}_flat squared.
FactorKind factor_kind(std::uint32_t flat) noexcept;

// F^{-1}(u) for F(x) = x (constant), x + sin(4 pi f x)/(4 pi f) (cosine) or
// x - sin(4 pi f x)/(4 pi f) (sine), by bisection to |F(x) - u| <= 1e-12.
double inverse_cdf_1d(FactorKind kind, std::uint32_t freq, double u);

struct PointSet {
    int d = 1;
    std::vector<double> coords;     // size() * d, row per point
    std::vector<double> densities;  // rho(x_i)
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return densities.size(); }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
    }
};

// n i.i.d. draws from rho. Point i uses its own RNG substream derived from
// (seed, i), so the result does not depend on evaluation order.
PointSet sample_points(const DensityParams& params, std::size_t n, std::uint64_t seed);

// Tensor uniform-grid quadrature of rho with q nodes per coordinate. Exact
// for the trigonometric polynomial rho once q > 2 * max frequency; requires
// q >= 4 * max frequency (ArgumentError otherwise).
double density_selfcheck(const DensityParams& params, std::size_t q);

} // namespace sampnum
