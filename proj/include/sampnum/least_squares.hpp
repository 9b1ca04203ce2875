#pragma once

#include "sampnum/sampler.hpp"
#include "sampnum/spectral_space.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>

namespace sampnum {

// Weighted evaluation matrices for one point set. Row i carries the weight
// rho(x_i)^{-1/2}.
struct InfoMatrices {
    std::size_t k = 0;
    std::size_t m = 0;
    Eigen::VectorXd weights;  // rho(x_i)^{-1/2}
    Eigen::MatrixXd B;        // n x m, B(i,j) = w_i b_{j+1}(x_i)
    Eigen::MatrixXd G;        // first k columns of B
    Eigen::MatrixXd Gamma;    // n x (m-k), column j-k is a_j * B.col(j)

    std::size_t rows() const noexcept { return static_cast<std::size_t>(B.rows()); }
};

// Requires 1 <= k <= m <= basis.size() and pts.size() >= k. k == m is
// allowed and yields an empty Gamma.
InfoMatrices build_matrices(const PointSet& pts, const OrderedBasis& basis, std::size_t k,
                            std::size_t m);

struct SingularExtrema {
    double s_min;
    double s_max;
};

// Smallest and largest of the min(rows, cols) singular values.
SingularExtrema singular_extrema(const Eigen::MatrixXd& M);

// Largest singular value via the eigenvalues of the smaller Gram matrix.
// Only the top of the spectrum is used, so squaring the condition number
// does not matter here.
double spectral_norm(const Eigen::MatrixXd& M);

inline constexpr double kRankTolerance = 1e-10;

// Moore-Penrose inverse from a thin SVD. Singular values at or below
// rel_tol * s_max are treated as zero; rank_ok() reports whether none were.
class Pseudoinverse {
public:
    explicit Pseudoinverse(const Eigen::MatrixXd& A, double rel_tol = kRankTolerance);

    double s_min() const noexcept { return s_min_; }
    double s_max() const noexcept { return s_max_; }
    bool rank_ok() const noexcept { return rank_ok_; }
    // ||A^+|| = 1 / s_min when rank_ok
    double norm() const noexcept { return norm_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& Y) const;
    Eigen::MatrixXd matrix() const;

private:
    Eigen::MatrixXd U_;
    Eigen::VectorXd inv_s_;
    Eigen::MatrixXd V_;
    double s_min_ = 0.0;
    double s_max_ = 0.0;
    double norm_ = 0.0;
    bool rank_ok_ = false;
};

struct Fit {
    Eigen::VectorXd coefficients;  // G^+ N f, length k
    double s_min_G = 0.0;
    double s_max_G = 0.0;
    bool rank_ok = false;
    double pinv_norm = 0.0;
};

// N f = (rho(x_i)^{-1/2} f(x_i))_i
Eigen::VectorXd information(std::span<const double> samples, const PointSet& pts);

// Weighted least-squares fit in span{b_1..b_k} to samples f(x_i). A
// rank-deficient G is reported through rank_ok, not thrown.
Fit fit(const InfoMatrices& info, std::span<const double> samples, const PointSet& pts);
Fit fit(const Pseudoinverse& pinv, std::span<const double> samples, const PointSet& pts);

CoefVector to_coef_vector(const Fit& f, std::shared_ptr<const OrderedBasis> basis);

// f(x_i) for every point.
std::vector<double> sample_values(const CoefVector& f, const PointSet& pts);

} // namespace sampnum
