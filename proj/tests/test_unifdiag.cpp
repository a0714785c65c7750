#include "udsk/unifdiag.hpp"

#include "support/oracles.hpp"
#include "udsk/error.hpp"
#include "udsk/opast.hpp"
#include "udsk/rng.hpp"

#include <doctest.h>

#include <cmath>

using udsk::Mat;
using udsk::UniformizationResult;

namespace {

double matrix_inf_norm(const Mat& m) {
    double worst = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) worst = std::max(worst, std::abs(m.data()[k]));
    return worst;
}

std::size_t count_outside_band(const Mat& m, double tau, double tol) {
    std::size_t outside = 0;
    for (std::size_t l = 0; l < m.rows(); ++l)
        if (std::abs(m(l, l) - tau) > tol) ++outside;
    return outside;
}

void check_uniformization(const Mat& s, const UniformizationResult& result, double tol) {
    const std::size_t c = s.rows();
    const double tau = udsk::trace(s) / static_cast<double>(c);

    CHECK(result.rotations_used <= c - 1);
    for (std::size_t l = 0; l < c; ++l)
        CHECK(std::abs(result.rotated(l, l) - tau) <= tol);
    CHECK(result.residual <= tol);
    CHECK(std::abs(udsk::trace(result.rotated) - udsk::trace(s)) <=
          1e-9 * std::max(1.0, std::abs(udsk::trace(s))));
    CHECK(udsk::max_abs_diff(udsk::matmul(result.rotation, udsk::transpose(result.rotation)),
                             Mat::identity(c)) <= 1e-9);
    // Independent route: full conjugation with the returned rotation.
    CHECK(udsk::max_abs_diff(result.rotated, udsk::conjugate(result.rotation, s)) <=
          1e-8 * std::max(1.0, matrix_inf_norm(s)));
}

}  // namespace

TEST_CASE("uniformize: already-uniform diagonal needs no rotations") {
    for (const double tau : {0.5, 1.0, 42.0}) {
        Mat s(4, 4);
        for (std::size_t l = 0; l < 4; ++l) s(l, l) = tau;
        const UniformizationResult result = udsk::uniformize_diagonal(s);
        CHECK(result.rotations_used == 0);
        CHECK(udsk::max_abs_diff(result.rotation, Mat::identity(4)) == 0.0);
        CHECK(udsk::max_abs_diff(result.rotated, s) == 0.0);
        CHECK(result.residual == 0.0);
    }
}

TEST_CASE("uniformize: diag(3, 1) takes one rotation") {
    Mat s(2, 2);
    s(0, 0) = 3.0;
    s(1, 1) = 1.0;
    const UniformizationResult result = udsk::uniformize_diagonal(s, 1e-9);
    CHECK(result.rotations_used == 1);
    CHECK(result.rotated(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(result.rotated(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(result.rotated(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(result.rotated(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
    check_uniformization(s, result, 1e-9);
    // Input untouched.
    CHECK(s(0, 0) == 3.0);
    CHECK(s(0, 1) == 0.0);
}

TEST_CASE("uniformize: random PSD matrices across sizes") {
    udsk::Rng rng(991);
    for (const std::size_t c : {2ul, 4ul, 8ul, 16ul, 32ul}) {
        for (int trial = 0; trial < 60; ++trial) {
            const Mat s = oracle::random_psd(c, rng);
            const double tau = udsk::trace(s) / static_cast<double>(c);
            const double tol = udsk::default_uniformization_tol(tau);
            const Mat input_copy = s;

            const UniformizationResult result = udsk::uniformize_diagonal(s);
            check_uniformization(s, result, tol);
            CHECK(udsk::max_abs_diff(s, input_copy) == 0.0);

            // Every rotation retires at least one diagonal entry.
            const std::size_t before = count_outside_band(s, tau, tol);
            const std::size_t after = count_outside_band(result.rotated, tau, tol);
            CHECK(before - after >= result.rotations_used);
        }
    }
}

TEST_CASE("uniformize: input validation") {
    Mat rect(2, 3);
    CHECK_THROWS_AS((void)udsk::uniformize_diagonal(rect), udsk::Error);

    Mat asym = Mat::identity(3);
    asym(0, 1) = 0.5;
    try {
        (void)udsk::uniformize_diagonal(asym);
        CHECK(false);
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::not_symmetric);
    }

    Mat nan_mat = Mat::identity(3);
    nan_mat(1, 1) = std::nan("");
    try {
        (void)udsk::uniformize_diagonal(nan_mat);
        CHECK(false);
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::non_finite_input);
    }
}

TEST_CASE("uniformize: trivial 1x1") {
    Mat s(1, 1);
    s(0, 0) = 3.0;
    const UniformizationResult result = udsk::uniformize_diagonal(s);
    CHECK(result.rotations_used == 0);
    CHECK(result.rotated(0, 0) == 3.0);
}

TEST_CASE("refresh_rotation delegates and is deterministic") {
    udsk::ProjectedCovariance cov(3);
    cov.sigma = Mat::identity(3);
    CHECK(udsk::max_abs_diff(udsk::refresh_rotation(cov), Mat::identity(3)) == 0.0);

    udsk::ProjectedCovariance skewed(2);
    skewed.sigma(0, 0) = 3.0;
    skewed.sigma(1, 1) = 1.0;
    const Mat from_cov = udsk::refresh_rotation(skewed, 1e-9);
    const Mat direct = udsk::uniformize_diagonal(skewed.sigma, 1e-9).rotation;
    CHECK(from_cov == direct);          // bit-for-bit
    CHECK(from_cov == udsk::refresh_rotation(skewed, 1e-9));  // repeatable
    CHECK(skewed.sigma(0, 0) == 3.0);   // cov unchanged
}
