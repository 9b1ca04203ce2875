#pragma once

#include "sampnum/least_squares.hpp"
#include "sampnum/spectral_space.hpp"

#include <Eigen/Dense>

namespace sampnum {

// Coefficient matrix of (id - A_n) on V_m, scaled columnwise by sigma_j so
// that the H-unit ball of V_m becomes the Euclidean unit ball:
// column j = sigma_j (e_j - [G^+ B_j; 0]).
Eigen::MatrixXd error_operator(const InfoMatrices& info, const Pseudoinverse& pinv,
                               const OrderedBasis& basis);

// sup { ||f - A_n f||_{L2} : f in V_m, ||f||_H <= 1 }, the largest singular
// value of error_operator(). Throws DegenerateFitError if G is rank deficient.
double worst_case_error_trunc(const InfoMatrices& info, const Pseudoinverse& pinv,
                              const OrderedBasis& basis, std::size_t k, std::size_t m);

// Bound on ||A_n g||_{L2} over ||g||_H <= 1, g orthogonal to V_m, given the
// tail sum sum_{j>=m} a_j^2; uses b(x)^2 <= 2^d pointwise.
double tail_addend(const InfoMatrices& info, double s_min_G, double tail_m, int d);

// e_trunc + a_m + tail_addend. Needs summary.size() > m for a_m.
double certified_upper_bound(double e_trunc, const OrderedBasis& basis,
                             const SpectrumSummary& summary, const InfoMatrices& info,
                             const Pseudoinverse& pinv, std::size_t k, std::size_t m);

// Exact L2 distance by Parseval; coefficients missing on either side are 0.
// Throws ArgumentError if the two vectors use different bases.
double empirical_error(const CoefVector& fitted, const CoefVector& f);

// a_k + s_max(Gamma) / s_min(G)
inline double error_decomposition_bound(double a_k, double s_max_gamma, double s_min_g) {
    return a_k + s_max_gamma / s_min_g;
}

struct ErrorReport {
    double e_trunc = 0.0;
    double e_upper = 0.0;
    double a_k = 0.0;
    double beta_k = 0.0;
    double gamma_k = 0.0;
    double c_report = 1.0;
    double theorem_rhs = 0.0;  // sqrt(c_report * tail(k) / k)
    double s_min_G = 0.0;
    double s_max_Gamma = 0.0;
    double decomposition_rhs = 0.0;
    double tail_k = 0.0;
};

// Everything above for one non-degenerate instance. Requires
// summary.size() > info.m.
ErrorReport error_report(const InfoMatrices& info, const Pseudoinverse& pinv,
                         const OrderedBasis& basis, const SpectrumSummary& summary,
                         double c_report = 1.0);

} // namespace sampnum
