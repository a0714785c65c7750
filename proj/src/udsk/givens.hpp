#pragma once

#include "udsk/linalg.hpp"

#include <cstddef>

namespace udsk {

/// One plane rotation. Acts on coordinates (j, i) with j < i; restricted to
/// that plane the matrix is [[c, -s], [s, c]], i.e. g_jj = g_ii = c,
/// g_ji = -s, g_ij = s. c^2 + s^2 = 1.
struct GivensParams {
    std::size_t j = 0;
    std::size_t i = 0;
    double c = 1.0;
    double s = 0.0;
};

/// Builds GivensParams for the ordered plane (j, i), normalizing to j < i.
/// Swapping the two indices flips the sign of s, so any ordering of the pair
/// describes the same rotation.
GivensParams make_givens(std::size_t j, std::size_t i, double c, double s);

/// The 2x2 subproblem a single rotation reduces to: diagonal entries a (at
/// j,j) and d (at i,i), off-diagonal b, and the target value tau for the
/// rotated (j,j) entry.
struct TwoByTwoProblem {
    double a = 0.0;
    double d = 0.0;
    double b = 0.0;
    double tau = 0.0;
};

struct TwoByTwoSolution {
    double c = 1.0;       // cos(theta)
    double s = 0.0;       // sin(theta)
    double a_prime = 0.0; // rotated (j,j) entry; equals tau by construction
    double d_prime = 0.0; // rotated (i,i) entry; equals a + d - tau
    double b_prime = 0.0; // rotated off-diagonal
};

/// Closed-form rotation setting the (j,j) entry of [[a,b],[b,d]] to tau.
/// Admissible iff (a+d)/2 - r <= tau <= (a+d)/2 + r with
/// r = sqrt(((a-d)/2)^2 + b^2). The angle itself is never formed; only
/// (cos, sin) are computed.
TwoByTwoSolution solve_uniformizing_rotation(const TwoByTwoProblem& p);

/// S <- G S G^T, in place. Touches only rows and columns j and i; O(n).
void apply_two_sided(Mat& s, const GivensParams& g);

/// R <- R G^T, in place. Mixes only columns j and i; O(n).
void apply_right_transpose(Mat& r, const GivensParams& g);

}  // namespace udsk
