#include "sampnum/experiment.hpp"

#include "sampnum/error_analysis.hpp"
#include "sampnum/errors.hpp"
#include "sampnum/least_squares.hpp"
#include "sampnum/rng.hpp"
#include "sampnum/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace sampnum {

namespace {

constexpr std::size_t kMaxSamples = std::size_t{1} << 14;
constexpr std::size_t kMaxBasis = std::size_t{1} << 13;
constexpr double kDecompositionSlack = 1e-10;

enum StreamTag : std::uint64_t { kClaimsTag = 1, kRatesTag = 2, kThresholdTag = 3 };

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ArgumentError("config: cannot parse value '" + text + "' for key '" + key + "'");
    return value;
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream is(normalized);
    std::vector<std::size_t> out;
    for (std::string tok; is >> tok;) out.push_back(parse_number<std::size_t>(key, tok));
    if (out.empty()) throw ArgumentError("config: '" + key + "' must list at least one value");
    return out;
}

std::uint64_t instance_seed(std::uint64_t master, StreamTag tag, std::size_t n, std::size_t trial) {
    return substream(master, {tag, n, trial})();
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct SizedSpace {
    std::size_t k;
    std::size_t m;
    std::shared_ptr<const OrderedBasis> basis;
};

SizedSpace sized_space(const SpaceParams& params, double c, std::size_t m_factor, std::size_t n) {
    const std::size_t k = head_size(c, n);
    const std::size_t m = m_factor * k;
    // one extra function so that a_m is available
    return {k, m, ordered_basis(params, m + 1)};
}

double claim2_fraction(const SpaceParams& params, std::size_t n, double c, std::size_t m_factor,
                       std::size_t trials, std::uint64_t seed) {
    const auto space = sized_space(params, c, m_factor, n);
    const DensityParams density(space.basis, space.k, space.m);
    const double threshold = 0.5 * std::sqrt(static_cast<double>(n));
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto pts = sample_points(density, n, instance_seed(seed, kThresholdTag, n, t));
        const auto info = build_matrices(pts, *space.basis, space.k, space.k);
        if (singular_extrema(info.G).s_min >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

void check_decomposition(std::size_t n, std::size_t trial, double e_trunc, double rhs) {
    if (e_trunc > rhs + kDecompositionSlack) {
        std::ostringstream os;
        os << std::setprecision(17) << "error decomposition violated at n=" << n
           << " trial=" << trial << ": e_trunc=" << e_trunc << " > a_k + s_max/s_min=" << rhs;
        throw CheckFailure(os.str());
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "d") cfg.d = parse_number<int>(key, value);
        else if (key == "s") cfg.s = parse_number<double>(key, value);
        else if (key == "n_grid") cfg.n_grid = parse_list(key, value);
        else if (key == "c_head") cfg.c_head = parse_number<double>(key, value);
        else if (key == "m_factor") cfg.m_factor = parse_number<std::size_t>(key, value);
        else if (key == "trials") cfg.trials = parse_number<std::size_t>(key, value);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "out") cfg.out = value;
        else throw ArgumentError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config file '" + path + "'");
    return parse_config(in);
}

ExperimentConfig default_config(Experiment which) {
    ExperimentConfig cfg;
    switch (which) {
    case Experiment::claims:
        cfg.n_grid = {512, 2048};
        cfg.trials = 50;
        break;
    case Experiment::rates:
        cfg.n_grid = {64, 128, 256, 512, 1024, 2048, 4096};
        cfg.c_head = 0.3;
        cfg.trials = 5;
        break;
    case Experiment::beta:
        cfg.n_grid = {8, 16, 32, 64, 128, 256, 512, 1024, 2048};
        break;
    case Experiment::density_check:
        cfg.n_grid = {256, 1024, 4096};
        break;
    }
    return cfg;
}

std::size_t head_size(double c_head, std::size_t n) {
    if (n < 2) return 0;
    const double v = c_head * static_cast<double>(n) / std::log(static_cast<double>(n));
    return static_cast<std::size_t>(std::floor(v));
}

void validate(const ExperimentConfig& cfg, Experiment which) {
    (void)SpaceParams(cfg.d, cfg.s);
    if (cfg.n_grid.empty()) throw ArgumentError("config: n_grid is empty");
    if (cfg.trials < 1) throw ArgumentError("config: trials must be >= 1");
    if (which == Experiment::beta) {
        for (auto k : cfg.n_grid)
            if (k < 1) throw ArgumentError("config: beta grid values must be >= 1");
        if (*std::max_element(cfg.n_grid.begin(), cfg.n_grid.end()) + 1 > kDefaultEnumerationCap)
            throw ArgumentError("config: beta grid exceeds the enumeration cap");
        return;
    }
    if (!(cfg.c_head > 0.0)) throw ArgumentError("config: c_head must be positive");
    if (cfg.m_factor < 2) throw ArgumentError("config: m_factor must be >= 2");
    for (auto n : cfg.n_grid) {
        if (n < 2 || n > kMaxSamples)
            throw ArgumentError("config: n = " + std::to_string(n) + " outside [2, " +
                                std::to_string(kMaxSamples) + "]");
        const std::size_t k = head_size(cfg.c_head, n);
        const std::size_t m = cfg.m_factor * k;
        if (k < 1)
            throw ArgumentError("config: c_head = " + format_real(cfg.c_head) + " gives k = 0 at n = " +
                                std::to_string(n));
        if (k > n) throw ArgumentError("config: k exceeds n at n = " + std::to_string(n));
        if (m > kMaxBasis)
            throw ArgumentError("config: m = " + std::to_string(m) + " exceeds " +
                                std::to_string(kMaxBasis) + " at n = " + std::to_string(n));
    }
}

// ---------------------------------------------------------------------------
// claims

ClaimsReport run_claims(const ExperimentConfig& cfg, bool search_threshold) {
    validate(cfg, Experiment::claims);
    const SpaceParams params(cfg.d, cfg.s);
    ClaimsReport report;
    report.config = cfg;
    for (const std::size_t n : cfg.n_grid) {
        const auto space = sized_space(params, cfg.c_head, cfg.m_factor, n);
        const auto summary = spectral_sums(*space.basis);
        const DensityParams density(space.basis, space.k, space.m);
        const double gamma_k = beta_gamma(summary, space.k).gamma;
        const double a_k = summary.a(space.k);
        const double root_n = std::sqrt(static_cast<double>(n));

        ClaimsRow row;
        row.n = n;
        row.k = space.k;
        row.m = space.m;
        row.trials = cfg.trials;
        std::vector<double> ratios;
        std::size_t claim2 = 0, claim1 = 0, degenerate = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const auto pts = sample_points(density, n, instance_seed(cfg.seed, kClaimsTag, n, t));
            const auto info = build_matrices(pts, *space.basis, space.k, space.m);
            const Pseudoinverse pinv(info.G);
            const double s_max_gamma = spectral_norm(info.Gamma);
            const double ratio = s_max_gamma / (gamma_k * root_n);
            ratios.push_back(ratio);
            if (ratio <= 3.0) ++claim1;
            if (pinv.s_min() >= 0.5 * root_n) ++claim2;
            if (!pinv.rank_ok()) {
                ++degenerate;
                continue;
            }
            const double e = worst_case_error_trunc(info, pinv, *space.basis, space.k, space.m);
            const double rhs = error_decomposition_bound(a_k, s_max_gamma, pinv.s_min());
            check_decomposition(n, t, e, rhs);
            row.max_decomposition_ratio = std::max(row.max_decomposition_ratio, e / rhs);
            ++report.instances_checked;
        }
        const double trials = static_cast<double>(cfg.trials);
        row.claim2_success_fraction = static_cast<double>(claim2) / trials;
        row.claim1_success_fraction = static_cast<double>(claim1) / trials;
        row.degenerate_fraction = static_cast<double>(degenerate) / trials;
        row.claim1_ratio_median = median(ratios);
        row.claim1_ratio_min = *std::min_element(ratios.begin(), ratios.end());
        row.claim1_ratio_max = *std::max_element(ratios.begin(), ratios.end());

        if (search_threshold && row.claim2_success_fraction >= 0.5) {
            double c = cfg.c_head;
            row.c_threshold = c;
            for (;;) {
                const double next = 2.0 * c;
                const std::size_t k = head_size(next, n);
                if (4 * k > n || cfg.m_factor * k > kMaxBasis) {
                    row.c_threshold_capped = true;
                    break;
                }
                if (claim2_fraction(params, n, next, cfg.m_factor, cfg.trials, cfg.seed) < 0.5) break;
                c = next;
                row.c_threshold = c;
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// rates

RatesReport run_rates(const ExperimentConfig& cfg) {
    validate(cfg, Experiment::rates);
    const SpaceParams params(cfg.d, cfg.s);
    RatesReport report;
    report.config = cfg;
    for (const std::size_t n : cfg.n_grid) {
        const auto space = sized_space(params, cfg.c_head, cfg.m_factor, n);
        const auto summary = spectral_sums(*space.basis);
        const DensityParams density(space.basis, space.k, space.m);

        RatesRow row;
        row.n = n;
        row.k = space.k;
        row.m = space.m;
        std::vector<ErrorReport> instances;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
            const auto pts = sample_points(density, n, instance_seed(cfg.seed, kRatesTag, n, t));
            const auto info = build_matrices(pts, *space.basis, space.k, space.m);
            const Pseudoinverse pinv(info.G);
            if (!pinv.rank_ok()) {
                ++row.degenerate_trials;
                continue;
            }
            auto er = error_report(info, pinv, *space.basis, summary);
            check_decomposition(n, t, er.e_trunc, er.decomposition_rhs);
            if (er.e_trunc > er.e_upper)
                throw CheckFailure("certified bound below e_trunc at n=" + std::to_string(n));
            ++report.instances_checked;
            instances.push_back(er);
        }
        if (instances.empty()) {
            row.degenerate = true;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.a_k = summary.a(space.k);
            row.beta_k = beta_gamma(summary, space.k).beta;
            row.gamma_k = beta_gamma(summary, space.k).gamma;
            row.s_min_G = row.s_max_Gamma = row.e_trunc = row.e_upper = nan;
            row.ratio1 = row.ratio2 = nan;
        } else {
            // lower median instance, so the row stays one consistent draw
            std::sort(instances.begin(), instances.end(),
                      [](const ErrorReport& a, const ErrorReport& b) { return a.e_trunc < b.e_trunc; });
            const auto& er = instances[(instances.size() - 1) / 2];
            row.a_k = er.a_k;
            row.beta_k = er.beta_k;
            row.gamma_k = er.gamma_k;
            row.s_min_G = er.s_min_G;
            row.s_max_Gamma = er.s_max_Gamma;
            row.e_trunc = er.e_trunc;
            row.e_upper = er.e_upper;
            row.ratio1 = er.e_trunc / er.decomposition_rhs;
            row.ratio2 = er.e_trunc * er.e_trunc * static_cast<double>(space.k) / er.tail_k;
        }
        report.rows.push_back(row);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (const auto& row : report.rows) {
        if (row.degenerate) continue;
        const double x = std::log(static_cast<double>(row.n));
        const double y = std::log(row.e_trunc);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    report.fitted_rows = cnt;
    const double denom = static_cast<double>(cnt) * sxx - sx * sx;
    report.slope = cnt >= 2 && denom > 0.0 ? (static_cast<double>(cnt) * sxy - sx * sy) / denom
                                           : std::numeric_limits<double>::quiet_NaN();
    return report;
}

// ---------------------------------------------------------------------------
// beta

BetaReport beta_lemma(const SpectrumSummary& summary, std::vector<std::size_t> k_grid) {
    if (k_grid.empty()) throw ArgumentError("beta_lemma: empty k grid");
    std::sort(k_grid.begin(), k_grid.end());
    k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());
    BetaReport report;
    report.k_min = k_grid.front();
    report.k_max = k_grid.back();
    if (report.k_min < 1 || report.k_max >= summary.size())
        throw ArgumentError("beta_lemma: k grid outside [1, " + std::to_string(summary.size()) + ")");

    auto make_row = [&](std::size_t k) {
        BetaRow row;
        row.k = k;
        const auto bg = beta_gamma(summary, k);
        row.a_k = summary.a(k);
        row.beta_k = bg.beta;
        row.gamma_k = bg.gamma;
        row.beta_half = k / 2 >= 1 ? beta_gamma(summary, k / 2).beta
                                   : std::numeric_limits<double>::infinity();
        row.ratio = row.beta_k / row.a_k;
        row.gamma_over_beta_half = row.gamma_k / row.beta_half;
        return row;
    };

    report.min_ratio = std::numeric_limits<double>::infinity();
    report.max_ratio = 0.0;
    report.max_gamma_over_beta_half = 0.0;
    for (std::size_t k = report.k_min; k <= report.k_max; ++k) {
        const auto row = make_row(k);
        report.min_ratio = std::min(report.min_ratio, row.ratio);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        report.max_gamma_over_beta_half = std::max(report.max_gamma_over_beta_half, row.gamma_over_beta_half);
    }
    for (auto k : k_grid) report.rows.push_back(make_row(k));
    return report;
}

BetaReport run_beta_lemma(const ExperimentConfig& cfg) {
    validate(cfg, Experiment::beta);
    const SpaceParams params(cfg.d, cfg.s);
    const std::size_t k_max = *std::max_element(cfg.n_grid.begin(), cfg.n_grid.end());
    const auto basis = ordered_basis(params, k_max + 1);
    auto report = beta_lemma(spectral_sums(*basis), cfg.n_grid);
    report.config = cfg;
    return report;
}

// ---------------------------------------------------------------------------
// density-check

DensityReport run_density_check(const ExperimentConfig& cfg) {
    validate(cfg, Experiment::density_check);
    const SpaceParams params(cfg.d, cfg.s);
    DensityReport report;
    report.config = cfg;
    for (const std::size_t n : cfg.n_grid) {
        const auto space = sized_space(params, cfg.c_head, cfg.m_factor, n);
        const DensityParams density(space.basis, space.k, space.m);
        const std::size_t q = std::max<std::size_t>(8, 4 * space.basis->max_frequency(space.m));
        DensityRow row;
        row.n = n;
        row.k = space.k;
        row.m = space.m;
        row.quad_points = q;
        row.integral = density_selfcheck(density, q);
        row.deviation = std::abs(row.integral - 1.0);
        row.density_floor = 0.5 / static_cast<double>(space.k);

        const auto d = static_cast<std::size_t>(cfg.d);
        std::size_t nodes = 1;
        for (std::size_t i = 0; i < d; ++i) nodes *= q;
        std::vector<double> x(d);
        row.min_density = std::numeric_limits<double>::infinity();
        for (std::size_t node = 0; node < nodes; ++node) {
            std::size_t rem = node;
            for (std::size_t i = 0; i < d; ++i) {
                x[i] = static_cast<double>(rem % q) / static_cast<double>(q);
                rem /= q;
            }
            row.min_density = std::min(row.min_density, density_eval(density, x));
        }
        if (!(row.deviation <= kDensityTolerance)) report.passed = false;
        report.rows.push_back(row);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Output

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const ClaimsReport& r) {
    os << "n,k,m,trials,claim2_success_fraction,claim1_ratio_median,claim1_ratio_min,"
          "claim1_ratio_max,claim1_success_fraction,degenerate_fraction,max_decomposition_ratio,"
          "c_threshold,c_threshold_capped\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << row.k << ',' << row.m << ',' << row.trials << ','
           << format_real(row.claim2_success_fraction) << ',' << format_real(row.claim1_ratio_median)
           << ',' << format_real(row.claim1_ratio_min) << ',' << format_real(row.claim1_ratio_max)
           << ',' << format_real(row.claim1_success_fraction) << ','
           << format_real(row.degenerate_fraction) << ',' << format_real(row.max_decomposition_ratio)
           << ','
           << format_real(row.c_threshold ? *row.c_threshold : std::numeric_limits<double>::quiet_NaN())
           << ',' << (row.c_threshold_capped ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& os, const RatesReport& r) {
    os << "n,k,m,a_k,beta_k,gamma_k,s_min_G,s_max_Gamma,e_trunc,e_upper,ratio1,ratio2,"
          "degenerate_trials\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << row.k << ',' << row.m << ',' << format_real(row.a_k) << ','
           << format_real(row.beta_k) << ',' << format_real(row.gamma_k) << ','
           << format_real(row.s_min_G) << ',' << format_real(row.s_max_Gamma) << ','
           << format_real(row.e_trunc) << ',' << format_real(row.e_upper) << ','
           << format_real(row.ratio1) << ',' << format_real(row.ratio2) << ','
           << row.degenerate_trials << '\n';
    }
}

void write_csv(std::ostream& os, const BetaReport& r) {
    os << "k,a_k,beta_k,gamma_k,beta_half_k,beta_over_a,gamma_over_beta_half\n";
    for (const auto& row : r.rows) {
        os << row.k << ',' << format_real(row.a_k) << ',' << format_real(row.beta_k) << ','
           << format_real(row.gamma_k) << ',' << format_real(row.beta_half) << ','
           << format_real(row.ratio) << ',' << format_real(row.gamma_over_beta_half) << '\n';
    }
}

void write_csv(std::ostream& os, const DensityReport& r) {
    os << "n,k,m,quad_points,integral,deviation,min_density,density_floor\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << row.k << ',' << row.m << ',' << row.quad_points << ','
           << format_real(row.integral) << ',' << format_real(row.deviation) << ','
           << format_real(row.min_density) << ',' << format_real(row.density_floor) << '\n';
    }
}

void print_summary(std::ostream& os, const ClaimsReport& r) {
    const auto& c = r.config;
    os << "claims: d=" << c.d << " s=" << c.s << " c_head=" << c.c_head << " m_factor=" << c.m_factor
       << " trials=" << c.trials << " seed=" << c.seed << '\n';
    for (const auto& row : r.rows) {
        os << "  n=" << row.n << " k=" << row.k << " m=" << row.m
           << "  P[s_min(G) >= sqrt(n)/2]=" << row.claim2_success_fraction
           << "  median s_max(Gamma)/(gamma_k sqrt(n))=" << row.claim1_ratio_median
           << "  P[ratio <= 3]=" << row.claim1_success_fraction
           << "  degenerate=" << row.degenerate_fraction;
        if (row.c_threshold)
            os << "  c threshold >= " << *row.c_threshold << (row.c_threshold_capped ? " (search capped)" : "");
        os << '\n';
    }
    os << "  error decomposition re-checked on " << r.instances_checked << " instances\n";
}

void print_summary(std::ostream& os, const RatesReport& r) {
    const auto& c = r.config;
    os << "rates: d=" << c.d << " s=" << c.s << " c_head=" << c.c_head << " m_factor=" << c.m_factor
       << " trials=" << c.trials << " seed=" << c.seed << '\n';
    double max_ratio2 = 0.0;
    for (const auto& row : r.rows) {
        os << "  n=" << row.n << " k=" << row.k << " m=" << row.m << "  e_trunc=" << row.e_trunc
           << "  e_upper=" << row.e_upper << "  ratio1=" << row.ratio1 << "  ratio2=" << row.ratio2;
        if (row.degenerate) os << "  [degenerate]";
        else if (row.degenerate_trials > 0) os << "  (" << row.degenerate_trials << " degenerate trials)";
        os << '\n';
        if (!row.degenerate) max_ratio2 = std::max(max_ratio2, row.ratio2);
    }
    os << "  log-log slope of e_trunc vs n: " << r.slope << " (reference " << -c.s << ", "
       << r.fitted_rows << " rows)\n";
    os << "  max e_trunc^2 k / tail(k): " << max_ratio2 << '\n';
}

void print_summary(std::ostream& os, const BetaReport& r) {
    const auto& c = r.config;
    os << "beta: d=" << c.d << " s=" << c.s << " k in [" << r.k_min << ", " << r.k_max << "]\n";
    os << "  beta_k / a_k in [" << r.min_ratio << ", " << r.max_ratio << "]\n";
    os << "  max gamma_k / beta_{floor(k/2)}: " << r.max_gamma_over_beta_half << '\n';
}

void print_summary(std::ostream& os, const DensityReport& r) {
    const auto& c = r.config;
    os << "density-check: d=" << c.d << " s=" << c.s << '\n';
    for (const auto& row : r.rows)
        os << "  n=" << row.n << " k=" << row.k << " m=" << row.m << " q=" << row.quad_points
           << "  integral=" << format_real(row.integral) << "  min density=" << row.min_density
           << " (floor " << row.density_floor << ")\n";
}

} // namespace sampnum
