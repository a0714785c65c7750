#include "udsk/givens.hpp"

#include "support/oracles.hpp"
#include "udsk/error.hpp"
#include "udsk/rng.hpp"

#include <doctest.h>

#include <cmath>

using udsk::GivensParams;
using udsk::Mat;
using udsk::TwoByTwoProblem;
using udsk::TwoByTwoSolution;

namespace {

// Absolute check scaled by the problem's magnitude.
void check_close(double got, double want, double rel, double scale) {
    CAPTURE(got);
    CAPTURE(want);
    CHECK(std::abs(got - want) <= rel * std::max(1.0, scale));
}

double problem_scale(const TwoByTwoProblem& p) {
    return std::abs(p.a) + std::abs(p.d) + std::abs(p.b) + std::abs(p.tau);
}

void check_against_oracle(const TwoByTwoProblem& p, const TwoByTwoSolution& sol) {
    const double scale = problem_scale(p);
    CHECK(std::abs(sol.c * sol.c + sol.s * sol.s - 1.0) <= 1e-12);
    const oracle::TwoByTwo direct = oracle::rotate_2x2(p.a, p.d, p.b, sol.c, sol.s);
    check_close(direct.a_prime, p.tau, 1e-10, scale);
    check_close(direct.d_prime, p.a + p.d - p.tau, 1e-10, scale);
    check_close(direct.b_prime, sol.b_prime, 1e-10, scale);
    check_close(sol.a_prime, p.tau, 0.0, scale);               // assigned exactly
    check_close(sol.d_prime, p.a + p.d - p.tau, 0.0, scale);   // assigned exactly
}

}  // namespace

TEST_CASE("solve: degenerate plane with a == tau returns the identity") {
    const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation({1.0, 1.0, 0.0, 1.0});
    CHECK(sol.c == 1.0);
    CHECK(sol.s == 0.0);
    CHECK(sol.a_prime == 1.0);
    CHECK(sol.d_prime == 1.0);
    CHECK(sol.b_prime == 0.0);
}

TEST_CASE("solve: diagonal 2, 0 with tau 1") {
    const TwoByTwoProblem p{2.0, 0.0, 0.0, 1.0};
    const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation(p);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(sol.c == doctest::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(sol.s == doctest::Approx(-inv_sqrt2).epsilon(1e-14));
    CHECK(sol.a_prime == 1.0);
    CHECK(sol.d_prime == 1.0);
    CHECK(sol.b_prime == doctest::Approx(-1.0).epsilon(1e-14));
    check_against_oracle(p, sol);
}

TEST_CASE("solve: a=3 d=1 b=1 tau=2") {
    const TwoByTwoProblem p{3.0, 1.0, 1.0, 2.0};
    const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation(p);
    CHECK(sol.a_prime == 2.0);
    CHECK(sol.d_prime == 2.0);
    CHECK(sol.b_prime == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    check_against_oracle(p, sol);
}

TEST_CASE("solve: admissibility errors") {
    CHECK_THROWS_AS((void)udsk::solve_uniformizing_rotation({1.0, 1.0, 0.0, 2.0}), udsk::Error);
    try {
        (void)udsk::solve_uniformizing_rotation({1.0, 1.0, 0.0, 2.0});
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::degenerate_plane);
    }
    // r = 1, interval is [0, 2]
    try {
        (void)udsk::solve_uniformizing_rotation({2.0, 0.0, 0.0, 2.5});
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::admissibility_violated);
    }
}

TEST_CASE("solve: boundary tau hits the interval edge") {
    // tau = mid + r: s2 = 0, b' = 0, diagonal entries swap.
    const TwoByTwoProblem p{0.0, 2.0, 0.0, 2.0};
    const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation(p);
    check_against_oracle(p, sol);
    CHECK(std::abs(sol.b_prime) <= 1e-12);
}

TEST_CASE("solve: random admissible problems match the explicit transform") {
    udsk::Rng rng(20240717);
    for (int trial = 0; trial < 20000; ++trial) {
        TwoByTwoProblem p;
        p.a = 4.0 * rng.gaussian();
        p.d = 4.0 * rng.gaussian();
        p.b = 4.0 * rng.gaussian();
        const double mid = 0.5 * (p.a + p.d);
        const double radius = std::hypot(0.5 * (p.a - p.d), p.b);
        if (radius < 1e-9) continue;
        p.tau = mid + (2.0 * rng.uniform() - 1.0) * radius;
        const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation(p);
        check_against_oracle(p, sol);
    }
}

TEST_CASE("make_givens normalizes the plane order") {
    // Same rotation described with swapped indices: applications must agree.
    udsk::Rng rng(7);
    const double angle = 0.7;
    const GivensParams fwd = udsk::make_givens(0, 2, std::cos(angle), std::sin(angle));
    const GivensParams rev = udsk::make_givens(2, 0, std::cos(angle), -std::sin(angle));
    Mat a(3, 3);
    for (std::size_t k = 0; k < a.size(); ++k) a.data()[k] = rng.gaussian();
    Mat b = a;
    udsk::apply_right_transpose(a, fwd);
    udsk::apply_right_transpose(b, rev);
    CHECK(udsk::max_abs_diff(a, b) == 0.0);
    CHECK_THROWS_AS((void)udsk::make_givens(1, 1, 1.0, 0.0), udsk::Error);
}

TEST_CASE("apply_two_sided: identity rotation is a no-op") {
    udsk::Rng rng(11);
    Mat s = oracle::random_psd(6, rng);
    const Mat before = s;
    udsk::apply_two_sided(s, udsk::make_givens(1, 4, 1.0, 0.0));
    CHECK(udsk::max_abs_diff(s, before) == 0.0);
}

TEST_CASE("apply_two_sided: worked 2x2 example") {
    const TwoByTwoSolution sol = udsk::solve_uniformizing_rotation({3.0, 1.0, 1.0, 2.0});
    Mat s(2, 2);
    s(0, 0) = 3.0;
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    s(1, 1) = 1.0;
    udsk::apply_two_sided(s, udsk::make_givens(0, 1, sol.c, sol.s));
    CHECK(s(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s(0, 1) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(s(1, 0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("apply_two_sided: trace and symmetry preserved, off-plane rows untouched") {
    udsk::Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        Mat s = oracle::random_psd(8, rng);
        const Mat before = s;
        const double trace_before = udsk::trace(s);

        const double angle = 2.0 * M_PI * rng.uniform();
        const std::size_t j = rng.next_u64() % 8;
        std::size_t i = rng.next_u64() % 8;
        while (i == j) i = rng.next_u64() % 8;
        udsk::apply_two_sided(s, udsk::make_givens(j, i, std::cos(angle), std::sin(angle)));

        CHECK(std::abs(udsk::trace(s) - trace_before) <=
              1e-9 * std::max(1.0, std::abs(trace_before)));
        CHECK(udsk::is_symmetric(s, 1e-9));
        for (std::size_t r = 0; r < 8; ++r) {
            if (r == i || r == j) continue;
            for (std::size_t c2 = 0; c2 < 8; ++c2) {
                if (c2 == i || c2 == j) continue;
                CHECK(s(r, c2) == before(r, c2));
            }
        }
    }
}

TEST_CASE("apply_right_transpose: quarter turn and identity") {
    Mat r = Mat::identity(2);
    udsk::apply_right_transpose(r, udsk::make_givens(0, 1, 0.0, 1.0));
    CHECK(r(0, 0) == 0.0);
    CHECK(r(0, 1) == 1.0);
    CHECK(r(1, 0) == -1.0);
    CHECK(r(1, 1) == 0.0);

    Mat id = Mat::identity(4);
    udsk::apply_right_transpose(id, udsk::make_givens(1, 3, 1.0, 0.0));
    CHECK(udsk::max_abs_diff(id, Mat::identity(4)) == 0.0);
}

TEST_CASE("apply_right_transpose: orthogonality survives 1000 random rotations") {
    udsk::Rng rng(37);
    Mat r = Mat::identity(16);
    for (int step = 0; step < 1000; ++step) {
        const double angle = 2.0 * M_PI * rng.uniform();
        const std::size_t j = rng.next_u64() % 16;
        std::size_t i = rng.next_u64() % 16;
        while (i == j) i = rng.next_u64() % 16;
        udsk::apply_right_transpose(r, udsk::make_givens(j, i, std::cos(angle), std::sin(angle)));
    }
    CHECK(udsk::max_abs_diff(udsk::matmul(r, udsk::transpose(r)), Mat::identity(16)) < 1e-10);
}

TEST_CASE("apply: index out of range") {
    Mat s = Mat::identity(3);
    CHECK_THROWS_AS(udsk::apply_two_sided(s, GivensParams{1, 3, 1.0, 0.0}), udsk::Error);
    CHECK_THROWS_AS(udsk::apply_right_transpose(s, GivensParams{0, 5, 1.0, 0.0}), udsk::Error);
}
