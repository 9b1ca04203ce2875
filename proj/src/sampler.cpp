#include "sampnum/sampler.hpp"

#include "sampnum/errors.hpp"
#include "sampnum/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sampnum {

DensityParams::DensityParams(std::shared_ptr<const OrderedBasis> basis, std::size_t k,
                             std::size_t m)
    : basis_(std::move(basis)), k_(k), m_(m) {
    if (!basis_) throw ArgumentError("DensityParams: null basis");
    if (k_ < 1 || k_ >= m_ || m_ > basis_->size())
        throw ArgumentError("DensityParams: need 1 <= k < m <= basis size, got k=" +
                            std::to_string(k_) + " m=" + std::to_string(m_) +
                            " basis size=" + std::to_string(basis_->size()));
    double total = 0.0;
    for (std::size_t j = k_; j < m_; ++j) total += 1.0 / basis_->weight(j);
    tail_weights_.reserve(m_ - k_);
    tail_cdf_.reserve(m_ - k_);
    double acc = 0.0;
    for (std::size_t j = k_; j < m_; ++j) {
        const double p = (1.0 / basis_->weight(j)) / total;
        tail_weights_.push_back(p);
        acc += p;
        tail_cdf_.push_back(acc);
    }
    tail_cdf_.back() = 1.0;
}

std::size_t DensityParams::pick_tail(double u) const {
    auto it = std::upper_bound(tail_cdf_.begin(), tail_cdf_.end(), u);
    if (it == tail_cdf_.end()) --it;
    return k_ + static_cast<std::size_t>(it - tail_cdf_.begin());
}

double density_eval(const DensityParams& params, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(params.dim()))
        throw ArgumentError("density_eval: point dimension mismatch");
    for (double xi : x)
        if (!(xi >= 0.0 && xi < 1.0))
            throw DomainError("density_eval: coordinate " + std::to_string(xi) + " outside [0,1)");
    const std::size_t k = params.k();
    const std::size_t m = params.m();
    std::vector<double> b(m);
    params.basis().eval_first(x, m, b);
    double head = 0.0;
    for (std::size_t j = 0; j < k; ++j) head += b[j] * b[j];
    double tail = 0.0;
    const auto p = params.tail_weights();
    for (std::size_t j = k; j < m; ++j) tail += p[j - k] * b[j] * b[j];
    return 0.5 * (head / static_cast<double>(k) + tail);
}

FactorKind factor_kind(std::uint32_t flat) noexcept {
    if (flat == 0) return FactorKind::constant;
    return flat % 2 == 0 ? FactorKind::cosine : FactorKind::sine;
}

double inverse_cdf_1d(FactorKind kind, std::uint32_t freq, double u) {
    if (kind == FactorKind::constant || freq == 0) return u;
    const double f = freq;
    const double sign = kind == FactorKind::cosine ? 1.0 : -1.0;
    auto cdf = [&](double x) {
        const double phase = std::fmod(2.0 * f * x, 1.0);
        return x + sign * std::sin(2.0 * std::numbers::pi * phase) / (4.0 * std::numbers::pi * f);
    };
    // F is the identity at multiples of 1/(2f); bracket inside one period.
    const double period = 0.5 / f;
    const double cell = std::floor(u / period);
    double lo = cell * period;
    double hi = std::min(1.0, lo + period);
    if (cdf(lo) == u) return lo;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    double x = std::abs(cdf(lo) - u) <= std::abs(cdf(hi) - u) ? lo : hi;
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);
    return x;
}

PointSet sample_points(const DensityParams& params, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ArgumentError("sample_points: n must be >= 1");
    const int d = params.dim();
    const auto ud = static_cast<std::size_t>(d);
    PointSet pts;
    pts.d = d;
    pts.seed = seed;
    pts.coords.resize(n * ud);
    pts.densities.resize(n);
    const auto& basis = params.basis();
    for (std::size_t i = 0; i < n; ++i) {
        auto eng = substream(seed, {i});
        std::size_t component;
        if (uniform01(eng) < 0.5) {
            component = std::min(params.k() - 1,
                                 static_cast<std::size_t>(uniform01(eng) * static_cast<double>(params.k())));
        } else {
            component = params.pick_tail(uniform01(eng));
        }
        const auto idx = basis.index(component);
        for (std::size_t dim = 0; dim < ud; ++dim)
            pts.coords[i * ud + dim] =
                inverse_cdf_1d(factor_kind(idx[dim]), frequency(idx[dim]), uniform01(eng));
        pts.densities[i] = density_eval(params, pts.point(i));
    }
    return pts;
}

double density_selfcheck(const DensityParams& params, std::size_t q) {
    const std::size_t max_freq = params.basis().max_frequency(params.m());
    if (q < 4 * std::max<std::size_t>(max_freq, 1))
        throw ArgumentError("density_selfcheck: resolution " + std::to_string(q) +
                            " below 4 * max frequency " + std::to_string(max_freq));
    const auto d = static_cast<std::size_t>(params.dim());
    std::vector<std::size_t> counter(d, 0);
    std::vector<double> x(d, 0.0);
    double total = 0.0;
    std::size_t nodes = 1;
    for (std::size_t i = 0; i < d; ++i) nodes *= q;
    for (std::size_t node = 0; node < nodes; ++node) {
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(counter[i]) / static_cast<double>(q);
        total += density_eval(params, x);
        for (std::size_t i = 0; i < d; ++i) {
            if (++counter[i] < q) break;
            counter[i] = 0;
        }
    }
    return total / static_cast<double>(nodes);
}

} // namespace sampnum
