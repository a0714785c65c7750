#include "udsk/unifdiag.hpp"

#include "udsk/error.hpp"
#include "udsk/givens.hpp"
#include "udsk/opast.hpp"

#include <cmath>
#include <deque>

namespace udsk {

UniformizationResult uniformize_diagonal(const Mat& sigma, double tol) {
    const std::size_t c = sigma.rows();
    if (c == 0 || sigma.cols() != c) fail(Status::bad_dimensions, "need a nonempty square matrix");
    if (!all_finite({sigma.data(), sigma.size()}))
        fail(Status::non_finite_input, "matrix has non-finite entries");
    if (!is_symmetric(sigma, 1e-9)) fail(Status::not_symmetric, "matrix is not symmetric");

    const double tau = trace(sigma) / static_cast<double>(c);
    if (tol <= 0.0) tol = default_uniformization_tol(tau);

    UniformizationResult out;
    out.rotated = sigma;
    Mat accum = Mat::identity(c);  // accumulates the G^T products

    std::deque<std::size_t> below;  // diagonal < tau - tol
    std::deque<std::size_t> above;  // diagonal > tau + tol
    for (std::size_t l = 0; l < c; ++l) {
        const double v = out.rotated(l, l);
        if (v < tau - tol) below.push_back(l);
        else if (v > tau + tol) above.push_back(l);
    }

    Mat& work = out.rotated;
    std::size_t it = 0;
    while (it < c - 1 && !below.empty() && !above.empty()) {
        const std::size_t j = below.front();
        below.pop_front();
        const std::size_t i = above.front();
        above.pop_front();

        const double a = work(j, j);
        const double b = work(i, j);
        const double d = work(i, i);
        const TwoByTwoSolution sol = solve_uniformizing_rotation({a, d, b, tau});
        ++it;

        // The (c, s) pair is defined for the ordered plane (j, i).
        const GivensParams g = make_givens(j, i, sol.c, sol.s);
        apply_two_sided(work, g);
        // Pin the touched block to the closed-form values; the rotated (j,j)
        // entry equals tau exactly, and symmetry is restored explicitly.
        work(j, j) = sol.a_prime;
        work(i, i) = sol.d_prime;
        work(j, i) = sol.b_prime;
        work(i, j) = sol.b_prime;

        apply_right_transpose(accum, g);

        const double mid = 0.5 * (a + d);
        if (mid < tau - tol) below.push_back(i);
        else if (mid > tau + tol) above.push_back(i);
    }

    // The accumulated product satisfies work == accum^T * sigma * accum;
    // report its transpose so that work == R * sigma * R^T.
    out.rotation = transpose(accum);
    out.rotations_used = it;
    for (std::size_t l = 0; l < c; ++l)
        out.residual = std::max(out.residual, std::abs(work(l, l) - tau));
    return out;
}

Mat refresh_rotation(const ProjectedCovariance& cov, double tol) {
    return uniformize_diagonal(cov.sigma, tol).rotation;
}

}  // namespace udsk
