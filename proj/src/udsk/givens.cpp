#include "udsk/givens.hpp"

#include "udsk/error.hpp"

#include <cmath>
#include <string>

namespace udsk {

namespace {

void check_plane(std::size_t j, std::size_t i, std::size_t n) {
    if (j >= i || i >= n) {
        fail(Status::index_out_of_range,
             "plane (" + std::to_string(j) + ", " + std::to_string(i) +
                 ") invalid for dimension " + std::to_string(n));
    }
}

}  // namespace

GivensParams make_givens(std::size_t j, std::size_t i, double c, double s) {
    if (j == i) fail(Status::index_out_of_range, "plane indices must differ");
    if (j > i) {
        std::swap(j, i);
        s = -s;
    }
    return GivensParams{j, i, c, s};
}

TwoByTwoSolution solve_uniformizing_rotation(const TwoByTwoProblem& p) {
    const double mid = 0.5 * (p.a + p.d);
    const double half_diff = 0.5 * (p.a - p.d);
    const double radius = std::hypot(half_diff, p.b);

    if (radius == 0.0) {
        // a == d, b == 0: every rotation fixes the diagonal.
        if (p.a == p.tau) return TwoByTwoSolution{1.0, 0.0, p.a, p.d, 0.0};
        fail(Status::degenerate_plane, "a == d, b == 0 and a != tau; no rotation can reach tau");
    }

    double c2 = (p.tau - mid) / radius;
    if (std::abs(c2) > 1.0) {
        if (std::abs(c2) > 1.0 + 1e-12) {
            fail(Status::admissibility_violated,
                 "tau = " + std::to_string(p.tau) + " outside [" + std::to_string(mid - radius) +
                     ", " + std::to_string(mid + radius) + "]");
        }
        c2 = c2 > 0.0 ? 1.0 : -1.0;
    }
    const double c1 = half_diff / radius;
    const double s1 = p.b / radius;
    const double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));

    const double cos_two_theta = c1 * c2 - s1 * s2;
    const double cos_theta = std::sqrt(std::max(0.0, 0.5 * (1.0 + cos_two_theta)));

    double c = cos_theta;
    double s;
    if (cos_theta < 1e-12) {
        // Quarter turn; the sine formula divides by cos(theta). Both signs of
        // s conjugate [[a,b],[b,d]] identically when c = 0.
        c = 0.0;
        s = 1.0;
    } else {
        s = -(c1 * s2 + c2 * s1) / (2.0 * cos_theta);
        // The division inflates roundoff when cos(theta) is small; rescale
        // onto the unit circle without moving the angle.
        const double h = std::hypot(c, s);
        c /= h;
        s /= h;
    }

    return TwoByTwoSolution{c, s, p.tau, p.a + p.d - p.tau, -s2 * radius};
}

void apply_two_sided(Mat& s, const GivensParams& g) {
    if (s.rows() != s.cols()) fail(Status::bad_dimensions, "matrix must be square");
    check_plane(g.j, g.i, s.rows());
    const std::size_t n = s.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const double vj = s(g.j, k);
        const double vi = s(g.i, k);
        s(g.j, k) = g.c * vj - g.s * vi;
        s(g.i, k) = g.s * vj + g.c * vi;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double vj = s(k, g.j);
        const double vi = s(k, g.i);
        s(k, g.j) = g.c * vj - g.s * vi;
        s(k, g.i) = g.s * vj + g.c * vi;
    }
}

void apply_right_transpose(Mat& r, const GivensParams& g) {
    check_plane(g.j, g.i, r.cols());
    for (std::size_t k = 0; k < r.rows(); ++k) {
        const double vj = r(k, g.j);
        const double vi = r(k, g.i);
        r(k, g.j) = g.c * vj - g.s * vi;
        r(k, g.i) = g.s * vj + g.c * vi;
    }
}

}  // namespace udsk
