// One line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"

#include "sampnum/error_analysis.hpp"
#include "sampnum/errors.hpp"
#include "sampnum/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sampnum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

template <class Report>
std::string csv(const Report& r) {
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

// Shared by criteria 2-6 so the expensive runs happen once.
struct Runs {
    ClaimsReport claims;
    double claims_seconds = 0.0;
    RatesReport rates;
    double rates_seconds = 0.0;
    std::size_t extra_instances = 0;
    std::string failure;  // a CheckFailure raised inside a run
};

Runs& runs() {
    static Runs r = [] {
        Runs out;
        try {
            auto t0 = Clock::now();
            out.claims = run_claims(default_config(Experiment::claims), false);
            out.claims_seconds = seconds_since(t0);
            t0 = Clock::now();
            out.rates = run_rates(default_config(Experiment::rates));
            out.rates_seconds = seconds_since(t0);
        } catch (const CheckFailure& e) {
            out.failure = e.what();
        }
        return out;
    }();
    return r;
}

Outcome reproduction() {
    const auto t0 = Clock::now();
    const std::size_t n = 256, k = 16, m = 128;
    std::size_t draws = 0, degenerate = 0;
    double worst = 0.0;
    for (int d = 1; d <= 2; ++d) {
        auto basis = ordered_basis(SpaceParams(d, 1.0), m + 1);
        DensityParams density(basis, k, m);
        for (std::uint64_t t = 0; t < 100; ++t) {
            auto pts = sample_points(density, n, 1000 * static_cast<std::uint64_t>(d) + t);
            auto info = build_matrices(pts, *basis, k, k);
            Pseudoinverse pinv(info.G);
            if (!pinv.rank_ok()) {
                ++degenerate;
                continue;
            }
            auto f = random_unit_function(basis, 0, k, t);
            auto g = to_coef_vector(fit(pinv, sample_values(f, pts), pts), basis);
            worst = std::max(worst, empirical_error(g, f) / f.l2_norm());
            ++draws;
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << draws << " draws (" << degenerate << " degenerate), max relative L2 error " << worst
       << ", " << secs << " s";
    return {draws > 0 && worst < 1e-9 && secs < 30.0, os.str()};
}

Outcome decomposition() {
    auto& r = runs();
    if (!r.failure.empty()) return {false, r.failure};
    // more instances beyond the experiment runs: other dimensions and smoothness
    std::size_t violations = 0, checked = 0;
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
        for (double s : {0.75, 1.0, 2.0}) {
            for (std::uint64_t t = 0; t < 8; ++t) {
                const std::size_t n = 128 << (t % 3);
                const std::size_t k = 4 + 3 * t;
                const std::size_t m = 8 * k;
                auto basis = ordered_basis(SpaceParams(d, s), m + 1);
                DensityParams density(basis, k, m);
                auto pts = sample_points(density, n, 31 * t + static_cast<std::uint64_t>(d));
                auto info = build_matrices(pts, *basis, k, m);
                Pseudoinverse pinv(info.G);
                if (!pinv.rank_ok()) continue;
                const double e = worst_case_error_trunc(info, pinv, *basis, k, m);
                const double rhs = error_decomposition_bound(basis->sigma(k), spectral_norm(info.Gamma), pinv.s_min());
                if (e > rhs + 1e-10) ++violations;
                worst = std::max(worst, e / rhs);
                ++checked;
            }
        }
    }
    r.extra_instances = checked;
    double run_worst = 0.0;
    for (const auto& row : r.claims.rows) run_worst = std::max(run_worst, row.max_decomposition_ratio);
    for (const auto& row : r.rates.rows)
        if (!row.degenerate) run_worst = std::max(run_worst, row.ratio1);
    std::ostringstream os;
    os << r.claims.instances_checked + r.rates.instances_checked + checked << " instances, "
       << violations << " violations, max e_trunc / bound " << std::max(worst, run_worst);
    return {violations == 0, os.str()};
}

Outcome claim2() {
    auto& r = runs();
    if (!r.failure.empty()) return {false, r.failure};
    bool ok = r.claims.rows.size() == 2 && r.claims_seconds < 300.0;
    std::ostringstream os;
    for (const auto& row : r.claims.rows) {
        ok = ok && row.claim2_success_fraction > 0.5;
        os << "n=" << row.n << " fraction " << row.claim2_success_fraction << "; ";
    }
    os << r.claims_seconds << " s";
    return {ok, os.str()};
}

Outcome claim1() {
    auto& r = runs();
    if (!r.failure.empty()) return {false, r.failure};
    const auto& rows = r.claims.rows;
    if (rows.size() != 2) return {false, "expected two rows"};
    const double a = rows[0].claim1_ratio_median, b = rows[1].claim1_ratio_median;
    bool ok = std::isfinite(a) && std::isfinite(b) && a > 0 && b > 0 && std::max(a, b) / std::min(a, b) < 2.0;
    std::ostringstream os;
    for (const auto& row : rows) {
        ok = ok && row.claim1_success_fraction > 0.5;
        os << "n=" << row.n << " median " << row.claim1_ratio_median << " fraction "
           << row.claim1_success_fraction << "; ";
    }
    os << "median spread " << std::max(a, b) / std::min(a, b);
    return {ok, os.str()};
}

Outcome tail_rate_ratio() {
    auto& r = runs();
    if (!r.failure.empty()) return {false, r.failure};
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& row : r.rates.rows) {
        if (row.degenerate) continue;
        worst = std::max(worst, row.ratio2);
        ++used;
    }
    std::ostringstream os;
    os << "max e_trunc^2 k / tail(k) = " << worst << " over " << used << " rows";
    return {used > 0 && worst < 100.0, os.str()};
}

Outcome rate() {
    auto& r = runs();
    if (!r.failure.empty()) return {false, r.failure};
    const auto& rows = r.rates.rows;
    const bool grid = !rows.empty() && rows.front().n == 64 && rows.back().n == 4096;
    std::ostringstream os;
    os << "slope " << r.rates.slope << " over " << r.rates.fitted_rows << " rows, " << r.rates_seconds << " s";
    return {grid && r.rates.slope >= -1.25 && r.rates.slope <= -0.75 && r.rates_seconds < 600.0, os.str()};
}

Outcome approximation_numbers() {
    auto basis = ordered_basis(SpaceParams(2, 1.0), 4097);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t n = 32; n <= 4096; ++n) {
        const double v = basis->approximation_number(n) * static_cast<double>(n) / std::log(static_cast<double>(n));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ostringstream os;
    os << "a_n n / log n in [" << lo << ", " << hi << "], spread " << hi / lo;
    return {hi / lo < 10.0, os.str()};
}

Outcome beta() {
    ExperimentConfig cfg = default_config(Experiment::beta);
    cfg.n_grid = {8, 2048};
    auto r = run_beta_lemma(cfg);
    // gamma_k <= beta_{k/2} over the whole enumerated range
    auto basis = ordered_basis(SpaceParams(1, 1.0), 4097);
    auto sum = spectral_sums(*basis);
    double worst_gamma = 0.0;
    for (std::size_t k = 2; k < 4096; ++k)
        worst_gamma = std::max(worst_gamma, beta_gamma(sum, k).gamma / beta_gamma(sum, k / 2).beta);

    std::vector<double> a_sq(80);
    for (std::size_t j = 0; j < a_sq.size(); ++j) a_sq[j] = std::ldexp(1.0, -2 * static_cast<int>(j));
    const double rem = std::ldexp(4.0 / 3.0, -2 * static_cast<int>(a_sq.size()));
    auto geo = SpectrumSummary::from_sequence(a_sq, Enclosure{rem, rem});
    double hook = 0.0;
    for (std::size_t k = 1; k < 50; ++k) {
        const double exact = std::ldexp(1.0, -static_cast<int>(k)) * std::sqrt(4.0 / (3.0 * static_cast<double>(k)));
        hook = std::max(hook, std::abs(beta_gamma(geo, k).beta - exact) / exact);
    }
    std::ostringstream os;
    os << "beta/a in [" << r.min_ratio << ", " << r.max_ratio << "] for k in [8, 2048], max gamma_k / beta_{k/2} "
       << worst_gamma << ", geometric hook rel. error " << hook;
    return {r.min_ratio >= 0.5 && r.max_ratio <= 4.0 && worst_gamma <= 1.0 && hook <= 1e-12, os.str()};
}

Outcome oracles() {
    std::ostringstream os;
    bool ok = true;

    // (a) totals against brute-force summation
    double sums_err = 0.0;
    {
        // s = 1: 10^9 explicit terms leave a remainder below 2e-9
        const long double one = 1.0L + 2.0L * oracle::series(1.0, 1, 1'000'000'000);
        for (int d = 1; d <= 2; ++d) {
            const double total = spectral_sums(*ordered_basis(SpaceParams(d, 1.0), 2)).total();
            const long double brute = d == 1 ? one : one * one;
            sums_err = std::max(sums_err, std::abs(static_cast<double>(brute) - total) / total);
        }
        // s = 2, 3: the full 2000^d flat-index grid
        for (double s : {2.0, 3.0}) {
            std::vector<long double> w(1000);
            w[0] = 1.0L;
            for (std::size_t f = 1; f < 1000; ++f)
                w[f] = 2.0L / (1.0L + std::pow(static_cast<long double>(f), 2.0L * s));
            long double one = 0.0L, two = 0.0L;
            for (std::size_t i = 0; i < 1000; ++i) {
                one += w[i];
                for (std::size_t j = 0; j < 1000; ++j) two += w[i] * w[j];
            }
            const double t1 = spectral_sums(*ordered_basis(SpaceParams(1, s), 2)).total();
            const double t2 = spectral_sums(*ordered_basis(SpaceParams(2, s), 2)).total();
            sums_err = std::max(sums_err, std::abs(static_cast<double>(one) - t1) / t1);
            sums_err = std::max(sums_err, std::abs(static_cast<double>(two) - t2) / t2);
        }
    }
    ok = ok && sums_err <= 1e-8;
    os << "sums rel. error " << sums_err;

    // (b) 10^4 probes per d = 1 instance against the SVD value
    double worst_excess = -INFINITY, worst_gap = 0.0;
    for (std::uint64_t inst = 0; inst < 3; ++inst) {
        const std::size_t n = 256, k = 16, m = 128;
        auto basis = ordered_basis(SpaceParams(1, 1.0), m + 1);
        DensityParams density(basis, k, m);
        auto pts = sample_points(density, n, 500 + inst);
        auto info = build_matrices(pts, *basis, k, m);
        Pseudoinverse pinv(info.G);
        if (!pinv.rank_ok()) continue;
        const double e = worst_case_error_trunc(info, pinv, *basis, k, m);
        std::mt19937_64 g(inst);
        double best = 0.0;
        for (std::uint64_t t = 0; t < 10'000; ++t) {
            // alternate unit-ball draws over all of V_m with draws on short
            // windows of the tail block
            std::size_t begin = 0, end = m;
            if (t % 2 == 1) {
                const std::size_t w = 1 + g() % 4;
                begin = k + g() % (m - k - w + 1);
                end = begin + w;
            }
            auto f = random_unit_function(basis, begin, end, t);
            auto fitted = to_coef_vector(fit(pinv, sample_values(f, pts), pts), basis);
            const double err = empirical_error(fitted, f);
            best = std::max(best, err);
            worst_excess = std::max(worst_excess, err / e - 1.0);
        }
        worst_gap = std::max(worst_gap, 1.0 - best / e);
    }
    ok = ok && worst_excess <= 1e-12 && worst_gap <= 0.05;
    os << "; probes: max probe/exact - 1 = " << worst_excess << ", best probe within " << 100.0 * worst_gap << "%";

    // (c) density normalization
    double dens = 0.0;
    for (int d = 1; d <= 2; ++d) {
        auto cfg = default_config(Experiment::density_check);
        cfg.d = d;
        for (const auto& row : run_density_check(cfg).rows) dens = std::max(dens, row.deviation);
    }
    ok = ok && dens <= 1e-10;
    os << "; density |integral - 1| <= " << dens;
    return {ok, os.str()};
}

Outcome determinism() {
    auto small = [](Experiment e) {
        auto c = default_config(e);
        c.seed = 2024;
        if (e == Experiment::claims) {
            c.n_grid = {256, 512};
            c.trials = 5;
        }
        if (e == Experiment::rates) c.n_grid = {64, 128, 256};
        return c;
    };
    bool ok = true;
    std::ostringstream os;
    auto compare = [&](const char* name, const std::string& a, const std::string& b) {
        ok = ok && a == b && !a.empty();
        os << name << (a == b ? " identical" : " DIFFERS") << "; ";
    };
    compare("claims", csv(run_claims(small(Experiment::claims))), csv(run_claims(small(Experiment::claims))));
    compare("rates", csv(run_rates(small(Experiment::rates))), csv(run_rates(small(Experiment::rates))));
    compare("beta", csv(run_beta_lemma(small(Experiment::beta))), csv(run_beta_lemma(small(Experiment::beta))));
    compare("density-check", csv(run_density_check(small(Experiment::density_check))),
            csv(run_density_check(small(Experiment::density_check))));
    return {ok, os.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"reproduction of head-space functions", reproduction},
        {"per-instance error decomposition", decomposition},
        {"smallest singular value concentration", claim2},
        {"tail-block spectral norm concentration", claim1},
        {"error against tail-sum rate", tail_rate_ratio},
        {"convergence rate slope", rate},
        {"approximation-number asymptotics", approximation_numbers},
        {"beta statistic bounds", beta},
        {"oracle equivalences", oracles},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
