#include "oracles.hpp"

#include "sampnum/errors.hpp"
#include "sampnum/least_squares.hpp"

#include <doctest.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <random>

using namespace sampnum;

namespace {

struct Instance {
    std::shared_ptr<const OrderedBasis> basis;
    PointSet pts;
    InfoMatrices info;
};

Instance make(int d, std::size_t n, std::size_t k, std::size_t m, std::uint64_t seed) {
    auto b = ordered_basis(SpaceParams(d, 1.0), m + 1);
    DensityParams p(b, k, m);
    auto pts = sample_points(p, n, seed);
    auto info = build_matrices(pts, *b, k, m);
    return {b, std::move(pts), std::move(info)};
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> N;
    Eigen::MatrixXd M(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) M(i, j) = N(g);
    return M;
}

} // namespace

TEST_SUITE("least_squares") {

TEST_CASE("uniform head gives an all-ones G") {
    auto b = ordered_basis(SpaceParams(1, 1.0), 3);
    DensityParams p(b, 1, 3);
    auto pts = sample_points(p, 100, 1);
    auto info = build_matrices(pts, *b, 1, 3);
    CHECK((info.G.array() - 1.0).abs().maxCoeff() < 1e-14);
    CHECK(singular_extrema(info.G).s_min == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("matrix entries match their definition") {
    auto inst = make(1, 64, 8, 32, 3);
    auto& info = inst.info;
    REQUIRE(info.B.rows() == 64);
    REQUIRE(info.B.cols() == 32);
    REQUIRE(info.G.cols() == 8);
    REQUIRE(info.Gamma.cols() == 24);
    for (std::size_t i = 0; i < 64; ++i) {
        auto x = inst.pts.point(i);
        std::vector<double> xv(x.begin(), x.end());
        const double w = 1.0 / std::sqrt(inst.pts.densities[i]);
        for (std::size_t j = 0; j < 32; ++j) {
            auto idx = inst.basis->index(j);
            const double v = w * oracle::basis({idx.begin(), idx.end()}, xv);
            const auto r = static_cast<Eigen::Index>(i);
            const auto c = static_cast<Eigen::Index>(j);
            CHECK(info.B(r, c) == doctest::Approx(v).epsilon(1e-13).scale(1.0));
            if (j < 8)
                CHECK(info.G(r, c) == info.B(r, c));
            else
                CHECK(info.Gamma(r, c - 8) == doctest::Approx(inst.basis->sigma(j) * v).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("matrix arguments") {
    auto b = ordered_basis(SpaceParams(1, 1.0), 20);
    DensityParams p(b, 4, 16);
    auto pts = sample_points(p, 3, 1);
    CHECK_THROWS_AS(build_matrices(pts, *b, 4, 16), ArgumentError);
    auto more = sample_points(p, 30, 1);
    CHECK_THROWS_AS(build_matrices(more, *b, 0, 16), ArgumentError);
    CHECK_THROWS_AS(build_matrices(more, *b, 4, 21), ArgumentError);
    auto eq = build_matrices(more, *b, 16, 16);
    CHECK(eq.Gamma.cols() == 0);
}

TEST_CASE("singular value extremes") {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(5, 3);
    D(0, 0) = 3.0;
    D(1, 1) = 0.5;
    D(2, 2) = 2.0;
    auto e = singular_extrema(D);
    CHECK(e.s_max == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(e.s_min == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spectral_norm(D) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(spectral_norm(Eigen::MatrixXd(D.transpose())) == doctest::Approx(3.0).epsilon(1e-15));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto M = random_matrix(40 + static_cast<Eigen::Index>(seed), 25, seed);
        CHECK(spectral_norm(M) == doctest::Approx(singular_extrema(M).s_max).epsilon(1e-12));
        CHECK(spectral_norm(M) == doctest::Approx(oracle::power_iteration(M)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(singular_extrema(Eigen::MatrixXd(0, 3)), ArgumentError);
}

TEST_CASE("pseudoinverse contract") {
    for (auto [r, c] : {std::pair<Eigen::Index, Eigen::Index>{10, 3}, {100, 40}, {512, 64}, {64, 64}}) {
        auto A = random_matrix(r, c, static_cast<std::uint64_t>(r * 7 + c));
        Pseudoinverse P(A);
        REQUIRE(P.rank_ok());
        const Eigen::MatrixXd Ap = P.matrix();
        CHECK((A * Ap * A - A).norm() <= 1e-8 * P.s_max());
        CHECK((Ap * A * Ap - Ap).norm() <= 1e-8 / P.s_min());
        CHECK(P.norm() * P.s_min() == doctest::Approx(1.0).epsilon(1e-14));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ap);
        CHECK(svd.singularValues()(0) == doctest::Approx(P.norm()).epsilon(1e-10));
    }
    // rank deficient: two equal columns
    auto A = random_matrix(30, 4, 9);
    A.col(3) = A.col(1);
    Pseudoinverse P(A);
    CHECK_FALSE(P.rank_ok());
    CHECK((A * P.matrix() * A - A).norm() <= 1e-8 * P.s_max());
}

TEST_CASE("fit reproduces functions in the head space") {
    auto inst = make(2, 256, 16, 64, 21);
    Pseudoinverse P(inst.info.G);
    REQUIRE(P.s_min() > 0.1 * std::sqrt(256.0));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto f = random_unit_function(inst.basis, 0, 16, seed);
        auto res = fit(P, sample_values(f, inst.pts), inst.pts);
        auto g = to_coef_vector(res, inst.basis);
        double err = 0.0;
        for (std::size_t j = 0; j < 16; ++j) err += (g[j] - f[j]) * (g[j] - f[j]);
        CHECK(std::sqrt(err) / f.l2_norm() < 1e-9);
    }
    // a single basis function and the zero function
    CoefVector b3(inst.basis, {0, 0, 1});
    auto r3 = fit(inst.info, sample_values(b3, inst.pts), inst.pts);
    for (Eigen::Index j = 0; j < 16; ++j) CHECK(std::abs(r3.coefficients(j) - (j == 2 ? 1.0 : 0.0)) < 1e-10);
    CoefVector zero(inst.basis, std::vector<double>(16, 0.0));
    auto rz = fit(inst.info, sample_values(zero, inst.pts), inst.pts);
    CHECK(rz.coefficients.norm() == 0.0);
}

TEST_CASE("fit agrees with a QR solve") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = make(1, 128, 10, 60, seed);
        auto f = random_unit_function(inst.basis, 0, 60, seed + 100);
        auto y = sample_values(f, inst.pts);
        auto res = fit(inst.info, y, inst.pts);
        const Eigen::VectorXd rhs = information(y, inst.pts);
        const Eigen::VectorXd qr = inst.info.G.colPivHouseholderQr().solve(rhs);
        CHECK((res.coefficients - qr).norm() <= 1e-10 * (1.0 + qr.norm()));
    }
}

TEST_CASE("fit minimizes the weighted residual") {
    auto inst = make(1, 200, 12, 80, 4);
    auto f = random_unit_function(inst.basis, 0, 80, 8);
    auto y = sample_values(f, inst.pts);
    auto res = fit(inst.info, y, inst.pts);
    const Eigen::VectorXd rhs = information(y, inst.pts);
    const double best = (inst.info.G * res.coefficients - rhs).squaredNorm();
    std::mt19937_64 g(1);
    std::normal_distribution<double> N;
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd delta(12);
        for (auto& v : delta) v = N(g) * 1e-3;
        CHECK((inst.info.G * (res.coefficients + delta) - rhs).squaredNorm() >= best);
    }
    // normal equations hold
    CHECK((inst.info.G.transpose() * (inst.info.G * res.coefficients - rhs)).norm() <= 1e-10 * rhs.norm() * res.s_max_G);
}

TEST_CASE("spectral norm of Gamma is bounded by its Frobenius norm") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = make(2, 300, 12, 96, seed);
        const double smax = spectral_norm(inst.info.Gamma);
        CHECK(smax * smax <= inst.info.Gamma.squaredNorm() * (1.0 + 1e-12));
        CHECK(smax == doctest::Approx(singular_extrema(inst.info.Gamma).s_max).epsilon(1e-10));
    }
}

TEST_CASE("sample count checks") {
    auto inst = make(1, 50, 4, 20, 1);
    std::vector<double> wrong(49, 0.0);
    CHECK_THROWS_AS(information(wrong, inst.pts), ArgumentError);
    CHECK_THROWS_AS(Pseudoinverse(Eigen::MatrixXd(0, 0)), ArgumentError);
}

} // TEST_SUITE
