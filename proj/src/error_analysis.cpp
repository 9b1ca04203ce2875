#include "sampnum/error_analysis.hpp"

#include "sampnum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sampnum {

Eigen::MatrixXd error_operator(const InfoMatrices& info, const Pseudoinverse& pinv,
                               const OrderedBasis& basis) {
    const auto k = static_cast<Eigen::Index>(info.k);
    const auto m = static_cast<Eigen::Index>(info.m);
    if (info.m > basis.size()) throw ArgumentError("error_operator: basis shorter than m");
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(m, m);
    E.topRows(k) -= pinv.apply(info.B);
    for (Eigen::Index j = 0; j < m; ++j) E.col(j) *= basis.sigma(static_cast<std::size_t>(j));
    return E;
}

double worst_case_error_trunc(const InfoMatrices& info, const Pseudoinverse& pinv,
                              const OrderedBasis& basis, std::size_t k, std::size_t m) {
    if (k != info.k || m != info.m)
        throw ArgumentError("worst_case_error_trunc: (k, m) = (" + std::to_string(k) + ", " +
                            std::to_string(m) + ") does not match the information matrices");
    if (!pinv.rank_ok())
        throw DegenerateFitError("worst_case_error_trunc: G is rank deficient (s_min = " +
                                 std::to_string(pinv.s_min()) + ")");
    return spectral_norm(error_operator(info, pinv, basis));
}

double tail_addend(const InfoMatrices& info, double s_min_G, double tail_m, int d) {
    if (!(s_min_G > 0.0)) throw DegenerateFitError("tail_addend: s_min(G) must be positive");
    const double inv_density_sum = info.weights.squaredNorm();
    return std::sqrt(inv_density_sum * std::ldexp(1.0, d) * std::max(tail_m, 0.0)) / s_min_G;
}

double certified_upper_bound(double e_trunc, const OrderedBasis& basis,
                             const SpectrumSummary& summary, const InfoMatrices& info,
                             const Pseudoinverse& pinv, std::size_t k, std::size_t m) {
    if (k != info.k || m != info.m)
        throw ArgumentError("certified_upper_bound: (k, m) does not match the information matrices");
    if (!pinv.rank_ok()) throw DegenerateFitError("certified_upper_bound: G is rank deficient");
    if (summary.size() <= m)
        throw ArgumentError("certified_upper_bound: need a_m, summary holds only " +
                            std::to_string(summary.size()) + " terms");
    // upper end of the tail enclosure keeps the bound certified
    const double tail_m = summary.tail_enclosure(m).hi;
    return e_trunc + summary.a(m) + tail_addend(info, pinv.s_min(), tail_m, basis.dim());
}

double empirical_error(const CoefVector& fitted, const CoefVector& f) {
    if (fitted.basis() != f.basis()) {
        const auto& a = *fitted.basis();
        const auto& b = *f.basis();
        bool same = a.dim() == b.dim();
        for (std::size_t j = 0; same && j < std::min(fitted.size(), f.size()); ++j) {
            const auto ia = a.index(j);
            const auto ib = b.index(j);
            same = std::equal(ia.begin(), ia.end(), ib.begin(), ib.end());
        }
        if (!same) throw ArgumentError("empirical_error: coefficient vectors use different bases");
    }
    const std::size_t len = std::max(fitted.size(), f.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const double a = j < fitted.size() ? fitted[j] : 0.0;
        const double b = j < f.size() ? f[j] : 0.0;
        acc += (b - a) * (b - a);
    }
    return std::sqrt(acc);
}

ErrorReport error_report(const InfoMatrices& info, const Pseudoinverse& pinv,
                         const OrderedBasis& basis, const SpectrumSummary& summary,
                         double c_report) {
    ErrorReport r;
    const std::size_t k = info.k;
    const std::size_t m = info.m;
    r.e_trunc = worst_case_error_trunc(info, pinv, basis, k, m);
    r.e_upper = certified_upper_bound(r.e_trunc, basis, summary, info, pinv, k, m);
    r.a_k = summary.a(k);
    const auto bg = beta_gamma(summary, k);
    r.beta_k = bg.beta;
    r.gamma_k = bg.gamma;
    r.tail_k = summary.tail(k);
    r.c_report = c_report;
    r.theorem_rhs = std::sqrt(c_report * r.tail_k / static_cast<double>(k));
    r.s_min_G = pinv.s_min();
    r.s_max_Gamma = info.Gamma.cols() > 0 ? spectral_norm(info.Gamma) : 0.0;
    r.decomposition_rhs = error_decomposition_bound(r.a_k, r.s_max_Gamma, r.s_min_G);
    return r;
}

} // namespace sampnum
