#pragma once

// Desk-scale experiments: concentration of the extreme singular values of
// the information matrices, convergence rates of the weighted least-squares
// recovery, the tail statistic beta_k, and density normalization.

#include "sampnum/spectral_space.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sampnum {

struct ExperimentConfig {
    int d = 1;
    double s = 1.0;
    std::vector<std::size_t> n_grid;
    double c_head = 0.05;
    std::size_t m_factor = 8;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
};

// Parse "key = value" lines ('#' starts a comment). n_grid is a comma or
// whitespace separated list. Unknown keys and malformed values throw
// ArgumentError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// k_n = floor(c * n / ln n)
std::size_t head_size(double c_head, std::size_t n);

enum class Experiment { claims, rates, beta, density_check };

// Configuration used when no config file is given.
ExperimentConfig default_config(Experiment which);

// Throws ArgumentError if any derived (k, m) pair is invalid for the given
// experiment. For `beta`, n_grid lists the k values directly.
void validate(const ExperimentConfig& cfg, Experiment which);

// -- claims ---------------------------------------------------------------

struct ClaimsRow {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double claim2_success_fraction = 0.0;  // s_min(G) >= sqrt(n)/2
    double claim1_ratio_median = 0.0;      // s_max(Gamma) / (gamma_k sqrt(n))
    double claim1_ratio_min = 0.0;
    double claim1_ratio_max = 0.0;
    double claim1_success_fraction = 0.0;  // s_max(Gamma) <= 3 gamma_k sqrt(n)
    double degenerate_fraction = 0.0;
    double max_decomposition_ratio = 0.0;  // max e_trunc / (a_k + s_max/s_min)
    // Largest doubled head constant with Claim-2 success fraction >= 1/2;
    // nullopt if already below 1/2 at c_head.
    std::optional<double> c_threshold;
    bool c_threshold_capped = false;  // search stopped before the fraction dropped
};

struct ClaimsReport {
    ExperimentConfig config;
    std::vector<ClaimsRow> rows;
    std::size_t instances_checked = 0;
};

ClaimsReport run_claims(const ExperimentConfig& cfg, bool search_threshold = true);

// -- rates ----------------------------------------------------------------

struct RatesRow {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    double a_k = 0.0;
    double beta_k = 0.0;
    double gamma_k = 0.0;
    double s_min_G = 0.0;
    double s_max_Gamma = 0.0;
    double e_trunc = 0.0;
    double e_upper = 0.0;
    double ratio1 = 0.0;  // e_trunc / (a_k + s_max(Gamma)/s_min(G))
    double ratio2 = 0.0;  // e_trunc^2 k / tail(k)
    std::size_t degenerate_trials = 0;
    bool degenerate = false;  // every trial was rank deficient
};

struct RatesReport {
    ExperimentConfig config;
    std::vector<RatesRow> rows;
    double slope = 0.0;      // least-squares slope of ln e_trunc vs ln n
    std::size_t fitted_rows = 0;
    std::size_t instances_checked = 0;
};

RatesReport run_rates(const ExperimentConfig& cfg);

// -- beta -----------------------------------------------------------------

struct BetaRow {
    std::size_t k = 0;
    double a_k = 0.0;
    double beta_k = 0.0;
    double gamma_k = 0.0;
    double beta_half = 0.0;  // beta_{floor(k/2)}, +inf for k = 1
    double ratio = 0.0;      // beta_k / a_k
    double gamma_over_beta_half = 0.0;
};

struct BetaReport {
    ExperimentConfig config;
    std::vector<BetaRow> rows;  // one per grid value
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    // over every integer k in [k_min, k_max]
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double max_gamma_over_beta_half = 0.0;
};

BetaReport run_beta_lemma(const ExperimentConfig& cfg);
BetaReport beta_lemma(const SpectrumSummary& summary, std::vector<std::size_t> k_grid);

// -- density-check ----------------------------------------------------------

struct DensityRow {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t quad_points = 0;  // per coordinate
    double integral = 0.0;
    double deviation = 0.0;
    double min_density = 0.0;    // over the quadrature grid
    double density_floor = 0.0;  // 1 / (2k)
};

inline constexpr double kDensityTolerance = 1e-10;

struct DensityReport {
    ExperimentConfig config;
    std::vector<DensityRow> rows;
    bool passed = true;  // every |integral - 1| <= kDensityTolerance
};

DensityReport run_density_check(const ExperimentConfig& cfg);

// -- output ---------------------------------------------------------------

// printf %.17g; nan/inf spelled out.
std::string format_real(double v);

void write_csv(std::ostream& os, const ClaimsReport& r);
void write_csv(std::ostream& os, const RatesReport& r);
void write_csv(std::ostream& os, const BetaReport& r);
void write_csv(std::ostream& os, const DensityReport& r);

void print_summary(std::ostream& os, const ClaimsReport& r);
void print_summary(std::ostream& os, const RatesReport& r);
void print_summary(std::ostream& os, const BetaReport& r);
void print_summary(std::ostream& os, const DensityReport& r);

} // namespace sampnum
