#pragma once

// Spectral model of the Sobolev space of dominating mixed smoothness on the
// d-dimensional torus: the real tensor trigonometric basis, its H-norm
// weights, the hyperbolic-cross ordering and the exact tail sums of the
// squared approximation numbers.
//
// Conventions used throughout the library:
//   * flat 1-d index k: 0 -> 1, 2f -> sqrt(2) cos(2 pi f x),
//     2f-1 -> sqrt(2) sin(2 pi f x)
//   * the ordered basis is stored 0-based; position j holds b_{j+1}, so
//     sigma(j) = ||b_{j+1}||_H^{-1} = a_j.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace sampnum {

struct SpaceParams {
    int d = 1;
    double s = 1.0;

    SpaceParams() = default;
    // Throws ArgumentError unless d >= 1 and s > 1/2.
    SpaceParams(int d, double s);
};

using MultiIndex = std::vector<std::uint32_t>;

constexpr std::uint32_t frequency(std::uint32_t flat) noexcept { return (flat + 1) / 2; }

// One-dimensional basis function b^{(1)}_k at x (no range check).
double basis_eval_1d(std::uint32_t flat, double x) noexcept;

// Tensor basis function b_idx at x. Throws DomainError if any coordinate is
// outside [0,1) and ArgumentError on a dimension mismatch.
double basis_eval(std::span<const std::uint32_t> idx, std::span<const double> x);

// prod_j (1 + f_j^{2s}) with f_j = frequency(k_j). Factors are multiplied in
// ascending order so permuted indices give bitwise equal weights.
double hnorm_weight(std::span<const std::uint32_t> idx, double s);

class OrderedBasis {
public:
    OrderedBasis(SpaceParams params, std::vector<std::uint32_t> flat_indices,
                 std::vector<double> weights);

    const SpaceParams& params() const noexcept { return params_; }
    int dim() const noexcept { return params_.d; }
    std::size_t size() const noexcept { return weights_.size(); }

    std::span<const std::uint32_t> index(std::size_t j) const;
    double weight(std::size_t j) const { return weights_.at(j); }
    double sigma(std::size_t j) const { return sigma_.at(j); }
    // a_n = ||b_{n+1}||_H^{-1}; requires n < size().
    double approximation_number(std::size_t n) const { return sigma_.at(n); }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> sigmas() const noexcept { return sigma_; }

    // Largest flat index / frequency used by any of the first `count`
    // functions in any coordinate.
    std::uint32_t max_flat(std::size_t count) const;
    std::uint32_t max_frequency(std::size_t count) const { return frequency(max_flat(count)); }

    // Writes b_1(x), ..., b_count(x) into out[0..count). Coordinates are not
    // range checked.
    void eval_first(std::span<const double> x, std::size_t count, std::span<double> out) const;

private:
    SpaceParams params_;
    std::vector<std::uint32_t> flat_;  // size() * d, row per basis function
    std::vector<double> weights_;
    std::vector<double> sigma_;
};

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

// The m functions of smallest H-norm, ties broken lexicographically on the
// flat-index tuple. Throws ResourceError if the hyperbolic-cross enumeration
// would hold more than `cap` indices.
std::shared_ptr<const OrderedBasis> ordered_basis(const SpaceParams& params, std::size_t m,
                                                  std::size_t cap = kDefaultEnumerationCap);

struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const noexcept { return 0.5 * (lo + hi); }
    double width() const noexcept { return hi - lo; }
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

// sum_{f >= from} 1 / (1 + f^{2s}) for s > 1/2 and from >= 1: explicit terms
// followed by an integral-test bracket of the remainder. Throws
// PrecisionError if the relative width cannot be brought below rel_tol.
Enclosure frequency_series_tail(double s, std::uint64_t from, double rel_tol = 1e-12);

// d = 1 shortcuts that do not need an enumerated basis (position j of the
// 1-d ordered basis is flat index j).
double torus_approximation_number_1d(double s, std::uint64_t n);
Enclosure torus_tail_1d(double s, std::uint64_t k, double rel_tol = 1e-12);

class SpectrumSummary {
public:
    // a_sq[j] = a_j^2 for j < size(); remainder encloses sum_{j >= size()} a_j^2.
    SpectrumSummary(std::vector<double> a_sq, Enclosure remainder);
    // Test hook: a synthetic approximation-number sequence.
    static SpectrumSummary from_sequence(std::vector<double> a_sq, Enclosure remainder) {
        return SpectrumSummary(std::move(a_sq), remainder);
    }

    std::size_t size() const noexcept { return a_sq_.size(); }
    double total() const noexcept { return total_.mid(); }
    const Enclosure& total_enclosure() const noexcept { return total_; }
    const Enclosure& remainder() const noexcept { return remainder_; }
    double a(std::size_t k) const;
    // sum_{j<k} a_j^2, k <= size()
    double head(std::size_t k) const;
    // sum_{j>=k} a_j^2, k <= size(); explicit suffix plus the remainder
    double tail(std::size_t k) const;
    Enclosure tail_enclosure(std::size_t k) const;

private:
    std::vector<double> a_sq_;
    std::vector<double> head_;
    std::vector<double> suffix_;
    Enclosure remainder_;
    Enclosure total_;
};

// total = (1 + 2 S_1)^d with S_1 = sum_{f>=1} (1 + f^{2s})^{-1}.
SpectrumSummary spectral_sums(const OrderedBasis& basis, double rel_tol = 1e-12);

struct BetaGamma {
    double beta;
    double gamma;
};

// beta_k = sqrt(tail(k) / k), gamma_k = max(a_k, beta_k); 1 <= k < size().
BetaGamma beta_gamma(const SpectrumSummary& summary, std::size_t k);

// A function given by its L2 coefficients against an ordered basis.
class CoefVector {
public:
    CoefVector(std::shared_ptr<const OrderedBasis> basis, std::vector<double> coefficients);

    const std::shared_ptr<const OrderedBasis>& basis() const noexcept { return basis_; }
    std::span<const double> coefficients() const noexcept { return c_; }
    std::size_t size() const noexcept { return c_.size(); }
    double operator[](std::size_t j) const { return c_[j]; }

    double l2_norm() const;
    double h_norm() const;
    double operator()(std::span<const double> x) const;

private:
    std::shared_ptr<const OrderedBasis> basis_;
    std::vector<double> c_;
};

// L2-orthogonal projection onto span{b_1..b_k}: coefficients at positions
// >= k are zeroed. Requires k <= f.size().
CoefVector project(const CoefVector& f, std::size_t k);

// Random f with ||f||_H = 1 supported on positions [begin, end) (0-based,
// position j is b_{j+1}). Gaussian in the H-orthonormal frame u_j = c_j /
// sigma_j, then normalized. Deterministic given the seed.
CoefVector random_unit_function(std::shared_ptr<const OrderedBasis> basis, std::size_t begin,
                                std::size_t end, std::uint64_t seed);

} // namespace sampnum
