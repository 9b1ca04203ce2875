#include "sampnum/least_squares.hpp"

#include "sampnum/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

#include <cmath>
#include <string>

namespace sampnum {

InfoMatrices build_matrices(const PointSet& pts, const OrderedBasis& basis, std::size_t k,
                            std::size_t m) {
    if (k < 1 || k > m || m > basis.size())
        throw ArgumentError("build_matrices: need 1 <= k <= m <= basis size, got k=" +
                            std::to_string(k) + " m=" + std::to_string(m));
    if (pts.d != basis.dim()) throw ArgumentError("build_matrices: dimension mismatch");
    const std::size_t n = pts.size();
    if (n < k)
        throw ArgumentError("build_matrices: " + std::to_string(n) + " points cannot determine " +
                            std::to_string(k) + " coefficients");

    InfoMatrices info;
    info.k = k;
    info.m = m;
    const auto rows = static_cast<Eigen::Index>(n);
    const auto cols = static_cast<Eigen::Index>(m);
    info.weights.resize(rows);
    info.B.resize(rows, cols);
    std::vector<double> b(m);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        info.weights(r) = 1.0 / std::sqrt(pts.densities[i]);
        basis.eval_first(pts.point(i), m, b);
        for (std::size_t j = 0; j < m; ++j) info.B(r, static_cast<Eigen::Index>(j)) = info.weights(r) * b[j];
    }
    const auto kk = static_cast<Eigen::Index>(k);
    info.G = info.B.leftCols(kk);
    info.Gamma = info.B.rightCols(cols - kk);
    for (Eigen::Index j = 0; j < cols - kk; ++j)
        info.Gamma.col(j) *= basis.sigma(static_cast<std::size_t>(j + kk));
    return info;
}

SingularExtrema singular_extrema(const Eigen::MatrixXd& M) {
    if (M.rows() == 0 || M.cols() == 0) throw ArgumentError("singular_extrema: empty matrix");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    return {sv(sv.size() - 1), sv(0)};
}

double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.rows() == 0 || M.cols() == 0) throw ArgumentError("spectral_norm: empty matrix");
    Eigen::MatrixXd gram;
    if (M.rows() >= M.cols())
        gram.noalias() = M.transpose() * M;
    else
        gram.noalias() = M * M.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

Pseudoinverse::Pseudoinverse(const Eigen::MatrixXd& A, double rel_tol) {
    if (A.rows() == 0 || A.cols() == 0) throw ArgumentError("Pseudoinverse: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    s_max_ = sv(0);
    s_min_ = sv(sv.size() - 1);
    const double cutoff = rel_tol * s_max_;
    rank_ok_ = s_min_ > cutoff;
    inv_s_.resize(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) inv_s_(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    U_ = svd.matrixU();
    V_ = svd.matrixV();
    norm_ = rank_ok_ ? 1.0 / s_min_ : inv_s_.maxCoeff();
}

Eigen::VectorXd Pseudoinverse::apply(const Eigen::VectorXd& y) const {
    return V_ * (inv_s_.asDiagonal() * (U_.transpose() * y));
}

Eigen::MatrixXd Pseudoinverse::apply(const Eigen::MatrixXd& Y) const {
    return V_ * (inv_s_.asDiagonal() * (U_.transpose() * Y));
}

Eigen::MatrixXd Pseudoinverse::matrix() const {
    return V_ * inv_s_.asDiagonal() * U_.transpose();
}

Eigen::VectorXd information(std::span<const double> samples, const PointSet& pts) {
    if (samples.size() != pts.size())
        throw ArgumentError("information: " + std::to_string(samples.size()) + " samples for " +
                            std::to_string(pts.size()) + " points");
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = samples[i] / std::sqrt(pts.densities[i]);
    return y;
}

Fit fit(const Pseudoinverse& pinv, std::span<const double> samples, const PointSet& pts) {
    Fit out;
    out.coefficients = pinv.apply(information(samples, pts));
    out.s_min_G = pinv.s_min();
    out.s_max_G = pinv.s_max();
    out.rank_ok = pinv.rank_ok();
    out.pinv_norm = pinv.norm();
    return out;
}

Fit fit(const InfoMatrices& info, std::span<const double> samples, const PointSet& pts) {
    if (pts.size() != info.rows()) throw ArgumentError("fit: point set does not match matrices");
    return fit(Pseudoinverse(info.G), samples, pts);
}

CoefVector to_coef_vector(const Fit& f, std::shared_ptr<const OrderedBasis> basis) {
    std::vector<double> c(f.coefficients.data(), f.coefficients.data() + f.coefficients.size());
    return CoefVector(std::move(basis), std::move(c));
}

std::vector<double> sample_values(const CoefVector& f, const PointSet& pts) {
    std::vector<double> v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) v[i] = f(pts.point(i));
    return v;
}

} // namespace sampnum
