#include "sampnum/spectral_space.hpp"

#include "sampnum/errors.hpp"
#include "sampnum/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace sampnum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double frequency_factor(std::uint32_t f, double s) {
    return f == 0 ? 1.0 : 1.0 + std::pow(static_cast<double>(f), 2.0 * s);
}

// int_{x0}^inf sum_{i=1}^{terms} (-1)^{i+1} x^{-2si} dx. The alternating
// expansion of 1/(1+x^{2s}) brackets it from above for odd `terms` and from
// below for even `terms` when x >= 1.
double alternating_integral(double x0, double s, int terms) {
    double acc = 0.0;
    for (int i = 1; i <= terms; ++i) {
        const double p = 2.0 * s * i;
        const double v = std::pow(x0, 1.0 - p) / (p - 1.0);
        acc += (i % 2 == 1) ? v : -v;
    }
    return acc;
}

} // namespace

SpaceParams::SpaceParams(int d_, double s_) : d(d_), s(s_) {
    if (d < 1) throw ArgumentError("dimension d must be >= 1, got " + std::to_string(d));
    if (!(s > 0.5)) throw ArgumentError("smoothness s must exceed 1/2, got " + std::to_string(s));
}

double basis_eval_1d(std::uint32_t flat, double x) noexcept {
    if (flat == 0) return 1.0;
    const double f = frequency(flat);
    const double phase = std::fmod(f * x, 1.0);
    const double arg = 2.0 * std::numbers::pi * phase;
    return std::numbers::sqrt2 * ((flat % 2 == 0) ? std::cos(arg) : std::sin(arg));
}

double basis_eval(std::span<const std::uint32_t> idx, std::span<const double> x) {
    if (idx.size() != x.size())
        throw ArgumentError("basis_eval: index has dimension " + std::to_string(idx.size()) +
                            " but point has dimension " + std::to_string(x.size()));
    double v = 1.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (!(x[j] >= 0.0 && x[j] < 1.0))
            throw DomainError("basis_eval: coordinate " + std::to_string(x[j]) + " outside [0,1)");
        v *= basis_eval_1d(idx[j], x[j]);
    }
    return v;
}

double hnorm_weight(std::span<const std::uint32_t> idx, double s) {
    std::vector<double> factors;
    factors.reserve(idx.size());
    for (auto k : idx) factors.push_back(frequency_factor(frequency(k), s));
    std::sort(factors.begin(), factors.end());
    double w = 1.0;
    for (double f : factors) w *= f;
    return w;
}

// ---------------------------------------------------------------------------
// OrderedBasis

OrderedBasis::OrderedBasis(SpaceParams params, std::vector<std::uint32_t> flat_indices,
                           std::vector<double> weights)
    : params_(params), flat_(std::move(flat_indices)), weights_(std::move(weights)) {
    const auto d = static_cast<std::size_t>(params_.d);
    if (flat_.size() != weights_.size() * d)
        throw ArgumentError("OrderedBasis: index storage does not match weight count");
    sigma_.resize(weights_.size());
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        if (j > 0 && weights_[j] < weights_[j - 1])
            throw ArgumentError("OrderedBasis: weights must be nondecreasing");
        sigma_[j] = 1.0 / std::sqrt(weights_[j]);
    }
}

std::span<const std::uint32_t> OrderedBasis::index(std::size_t j) const {
    if (j >= size()) throw ArgumentError("OrderedBasis::index: position out of range");
    const auto d = static_cast<std::size_t>(params_.d);
    return {flat_.data() + j * d, d};
}

std::uint32_t OrderedBasis::max_flat(std::size_t count) const {
    count = std::min(count, size());
    const auto d = static_cast<std::size_t>(params_.d);
    std::uint32_t mx = 0;
    for (std::size_t i = 0; i < count * d; ++i) mx = std::max(mx, flat_[i]);
    return mx;
}

void OrderedBasis::eval_first(std::span<const double> x, std::size_t count,
                              std::span<double> out) const {
    const auto d = static_cast<std::size_t>(params_.d);
    if (x.size() != d) throw ArgumentError("eval_first: point dimension mismatch");
    if (count > size() || out.size() < count)
        throw ArgumentError("eval_first: count exceeds basis or output size");
    const std::size_t stride = static_cast<std::size_t>(max_flat(count)) + 1;
    std::vector<double> table(d * stride);
    for (std::size_t dim = 0; dim < d; ++dim) {
        double* row = table.data() + dim * stride;
        row[0] = 1.0;
        // sine at 2f-1 and cosine at 2f share one phase
        for (std::size_t f = 1; 2 * f - 1 < stride; ++f) {
            const double phase = std::fmod(static_cast<double>(f) * x[dim], 1.0);
            const double arg = 2.0 * std::numbers::pi * phase;
            row[2 * f - 1] = std::numbers::sqrt2 * std::sin(arg);
            if (2 * f < stride) row[2 * f] = std::numbers::sqrt2 * std::cos(arg);
        }
    }
    for (std::size_t j = 0; j < count; ++j) {
        const std::uint32_t* idx = flat_.data() + j * d;
        double v = 1.0;
        for (std::size_t dim = 0; dim < d; ++dim) v *= table[dim * stride + idx[dim]];
        out[j] = v;
    }
}

// ---------------------------------------------------------------------------
// Hyperbolic-cross enumeration

namespace {

class CrossEnumerator {
public:
    CrossEnumerator(const SpaceParams& p, std::size_t cap) : d_(p.d), s_(p.s), cap_(cap) {}

    // All multi-indices with weight <= threshold.
    void collect(double threshold) {
        threshold_ = threshold;
        flat_.clear();
        weights_.clear();
        current_.assign(static_cast<std::size_t>(d_), 0);
        descend(0, 1.0);
    }

    std::size_t count() const { return weights_.size(); }
    std::vector<std::uint32_t>& flat() { return flat_; }
    std::vector<double>& weights() { return weights_; }

private:
    double factor(std::uint32_t f) {
        while (factors_.size() <= f)
            factors_.push_back(frequency_factor(static_cast<std::uint32_t>(factors_.size()), s_));
        return factors_[f];
    }

    void descend(int dim, double partial) {
        for (std::uint32_t k = 0;; ++k) {
            const double p = partial * factor(frequency(k));
            if (p > threshold_ * (1.0 + 1e-9)) break;
            current_[static_cast<std::size_t>(dim)] = k;
            if (dim + 1 < d_) {
                descend(dim + 1, p);
            } else {
                const double w = hnorm_weight(current_, s_);
                if (w <= threshold_) {
                    if (weights_.size() >= cap_)
                        throw ResourceError("hyperbolic-cross enumeration exceeds cap of " +
                                            std::to_string(cap_) + " indices");
                    flat_.insert(flat_.end(), current_.begin(), current_.end());
                    weights_.push_back(w);
                }
            }
        }
    }

    int d_;
    double s_;
    std::size_t cap_;
    double threshold_ = 1.0;
    std::vector<double> factors_;
    std::vector<std::uint32_t> current_;
    std::vector<std::uint32_t> flat_;
    std::vector<double> weights_;
};

} // namespace

std::shared_ptr<const OrderedBasis> ordered_basis(const SpaceParams& params, std::size_t m,
                                                  std::size_t cap) {
    if (m == 0) throw ArgumentError("ordered_basis: m must be >= 1");
    if (m > cap)
        throw ResourceError("ordered_basis: m = " + std::to_string(m) + " exceeds cap " +
                            std::to_string(cap));
    const auto d = static_cast<std::size_t>(params.d);

    CrossEnumerator en(params, cap);
    double threshold = 1.0;
    for (;;) {
        en.collect(threshold);
        if (en.count() >= m) break;
        threshold *= 2.0;
    }

    const auto& w = en.weights();
    const auto& flat = en.flat();
    std::vector<std::size_t> order(en.count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        if (w[a] != w[b]) return w[a] < w[b];
        return std::lexicographical_compare(flat.begin() + a * d, flat.begin() + (a + 1) * d,
                                            flat.begin() + b * d, flat.begin() + (b + 1) * d);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                      less);

    std::vector<std::uint32_t> out_flat;
    std::vector<double> out_w;
    out_flat.reserve(m * d);
    out_w.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t src = order[i];
        out_flat.insert(out_flat.end(), flat.begin() + src * d, flat.begin() + (src + 1) * d);
        out_w.push_back(w[src]);
    }
    return std::make_shared<const OrderedBasis>(params, std::move(out_flat), std::move(out_w));
}

// ---------------------------------------------------------------------------
// Tail sums

Enclosure frequency_series_tail(double s, std::uint64_t from, double rel_tol) {
    if (!(s > 0.5)) throw ArgumentError("frequency_series_tail: requires s > 1/2");
    if (from == 0) throw ArgumentError("frequency_series_tail: requires from >= 1");

    constexpr std::uint64_t kMaxTerms = std::uint64_t{1} << 27;
    CompensatedSum explicit_part;
    std::uint64_t next = from;  // first frequency not yet summed
    for (std::uint64_t target = 64;; target *= 2) {
        for (; next < from + target; ++next) {
            const double f = static_cast<double>(next);
            explicit_part.add(1.0 / (1.0 + std::pow(f, 2.0 * s)));
        }
        const double last = static_cast<double>(next - 1);
        const double sum = explicit_part.value();
        // Convexity of 1/(1+x^{2s}) on [1, inf): the remainder over f > last
        // lies between int_{last+1} g + g(last+1)/2 and int_{last+1/2} g.
        const double g_next = 1.0 / (1.0 + std::pow(last + 1.0, 2.0 * s));
        const double rem_hi = alternating_integral(last + 0.5, s, 3);
        const double rem_lo =
            std::max(0.0, alternating_integral(last + 1.0, s, 4) + 0.5 * g_next);
        const double slack = 4.0 * kEps * (sum + rem_hi) + static_cast<double>(target) * kEps * kEps * sum;
        Enclosure e{sum + rem_lo - slack, sum + rem_hi + slack};
        if (e.width() <= rel_tol * e.lo) return e;
        if (target >= kMaxTerms)
            throw PrecisionError("frequency_series_tail: enclosure width " +
                                 std::to_string(e.width()) + " exceeds relative tolerance " +
                                 std::to_string(rel_tol));
    }
}

double torus_approximation_number_1d(double s, std::uint64_t n) {
    const double f = static_cast<double>((n + 1) / 2);
    return 1.0 / std::sqrt(n == 0 ? 1.0 : 1.0 + std::pow(f, 2.0 * s));
}

Enclosure torus_tail_1d(double s, std::uint64_t k, double rel_tol) {
    if (k == 0) {
        auto t = frequency_series_tail(s, 1, rel_tol);
        return {1.0 + 2.0 * t.lo, 1.0 + 2.0 * t.hi};
    }
    const std::uint64_t f = (k + 1) / 2;
    if (k % 2 == 1) {
        // sin and cos of frequency f are both still in the tail
        auto t = frequency_series_tail(s, f, rel_tol);
        return {2.0 * t.lo, 2.0 * t.hi};
    }
    // only the cosine of frequency f remains
    const double single = 1.0 / (1.0 + std::pow(static_cast<double>(f), 2.0 * s));
    auto t = frequency_series_tail(s, f + 1, rel_tol);
    return {single + 2.0 * t.lo, single + 2.0 * t.hi};
}

SpectrumSummary::SpectrumSummary(std::vector<double> a_sq, Enclosure remainder)
    : a_sq_(std::move(a_sq)), remainder_(remainder) {
    if (!(remainder_.lo >= 0.0 && remainder_.lo <= remainder_.hi))
        throw ArgumentError("SpectrumSummary: remainder must be a nonnegative enclosure");
    const std::size_t len = a_sq_.size();
    head_.resize(len + 1);
    suffix_.resize(len + 1);
    CompensatedSum acc;
    head_[0] = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        if (!(a_sq_[j] > 0.0)) throw ArgumentError("SpectrumSummary: a_j^2 must be positive");
        acc.add(a_sq_[j]);
        head_[j + 1] = acc.value();
    }
    // summed from the small end, so tiny tails keep full relative accuracy
    CompensatedSum back;
    suffix_[len] = 0.0;
    for (std::size_t j = len; j-- > 0;) {
        back.add(a_sq_[j]);
        suffix_[j] = back.value();
    }
    total_ = tail_enclosure(0);
}

double SpectrumSummary::a(std::size_t k) const {
    if (k >= a_sq_.size()) throw ArgumentError("SpectrumSummary::a: index out of range");
    return std::sqrt(a_sq_[k]);
}

double SpectrumSummary::head(std::size_t k) const {
    if (k > a_sq_.size()) throw ArgumentError("SpectrumSummary::head: index out of range");
    return head_[k];
}

double SpectrumSummary::tail(std::size_t k) const {
    if (k > a_sq_.size()) throw ArgumentError("SpectrumSummary::tail: index out of range");
    return suffix_[k] + remainder_.mid();
}

Enclosure SpectrumSummary::tail_enclosure(std::size_t k) const {
    if (k > a_sq_.size()) throw ArgumentError("SpectrumSummary::tail: index out of range");
    const double s = suffix_[k];
    return {(s + remainder_.lo) * (1.0 - 4.0 * kEps), (s + remainder_.hi) * (1.0 + 4.0 * kEps)};
}

SpectrumSummary spectral_sums(const OrderedBasis& basis, double rel_tol) {
    const auto& p = basis.params();
    const Enclosure s1 = frequency_series_tail(p.s, 1, rel_tol);
    const double lo = std::pow(1.0 + 2.0 * s1.lo, p.d) * (1.0 - 4.0 * p.d * kEps);
    const double hi = std::pow(1.0 + 2.0 * s1.hi, p.d) * (1.0 + 4.0 * p.d * kEps);
    std::vector<double> a_sq(basis.size());
    CompensatedSum acc;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        a_sq[j] = 1.0 / basis.weight(j);
        acc.add(a_sq[j]);
    }
    // everything past the enumerated functions: total - head
    const double head = acc.value();
    const double slack = 2.0 * kEps * hi;
    if (!(hi - head + slack > 0.0)) throw PrecisionError("spectral_sums: head exceeds the total");
    return SpectrumSummary(std::move(a_sq), {std::max(0.0, lo - head - slack), hi - head + slack});
}

BetaGamma beta_gamma(const SpectrumSummary& summary, std::size_t k) {
    if (k < 1 || k >= summary.size())
        throw ArgumentError("beta_gamma: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(summary.size()) + ")");
    const double beta = std::sqrt(summary.tail(k) / static_cast<double>(k));
    return {beta, std::max(summary.a(k), beta)};
}

// ---------------------------------------------------------------------------
// Coefficient vectors

CoefVector::CoefVector(std::shared_ptr<const OrderedBasis> basis, std::vector<double> coefficients)
    : basis_(std::move(basis)), c_(std::move(coefficients)) {
    if (!basis_) throw ArgumentError("CoefVector: null basis");
    if (c_.size() > basis_->size())
        throw ArgumentError("CoefVector: more coefficients than basis functions");
}

double CoefVector::l2_norm() const {
    CompensatedSum acc;
    for (double c : c_) acc.add(c * c);
    return std::sqrt(acc.value());
}

double CoefVector::h_norm() const {
    CompensatedSum acc;
    for (std::size_t j = 0; j < c_.size(); ++j) acc.add(basis_->weight(j) * c_[j] * c_[j]);
    return std::sqrt(acc.value());
}

double CoefVector::operator()(std::span<const double> x) const {
    if (c_.empty()) return 0.0;
    for (double xi : x)
        if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("CoefVector: point outside [0,1)^d");
    std::vector<double> b(c_.size());
    basis_->eval_first(x, c_.size(), b);
    double v = 0.0;
    for (std::size_t j = 0; j < c_.size(); ++j) v += c_[j] * b[j];
    return v;
}

CoefVector project(const CoefVector& f, std::size_t k) {
    if (k > f.size()) throw ArgumentError("project: k exceeds coefficient length");
    std::vector<double> c(f.coefficients().begin(), f.coefficients().end());
    std::fill(c.begin() + static_cast<std::ptrdiff_t>(k), c.end(), 0.0);
    return CoefVector(f.basis(), std::move(c));
}

CoefVector random_unit_function(std::shared_ptr<const OrderedBasis> basis, std::size_t begin,
                                std::size_t end, std::uint64_t seed) {
    if (!basis) throw ArgumentError("random_unit_function: null basis");
    if (begin >= end) throw ArgumentError("random_unit_function: empty support range");
    if (end > basis->size()) throw ArgumentError("random_unit_function: support exceeds basis");
    auto eng = substream(seed, {0x756e6974ULL, begin, end});
    std::normal_distribution<double> normal;
    std::vector<double> u(end - begin);
    double norm2 = 0.0;
    while (norm2 == 0.0) {
        norm2 = 0.0;
        for (double& v : u) {
            v = normal(eng);
            norm2 += v * v;
        }
    }
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<double> c(end, 0.0);
    for (std::size_t j = begin; j < end; ++j) c[j] = basis->sigma(j) * u[j - begin] * inv;
    return CoefVector(std::move(basis), std::move(c));
}

} // namespace sampnum
