#pragma once

#include "udsk/linalg.hpp"

#include <cstddef>

namespace udsk {

struct ProjectedCovariance;

struct UniformizationResult {
    Mat rotation;                  // orthogonal R with rotated == R * input * R^T
    Mat rotated;                   // the uniformized copy of the input
    std::size_t rotations_used = 0;
    double residual = 0.0;         // max_l |rotated(l,l) - tau|
};

/// Default absolute tolerance for diagonal uniformization; hybrid so that
/// matrices with tiny or huge trace behave alike.
inline double default_uniformization_tol(double tau) {
    return 1e-8 * (tau > 1.0 ? tau : 1.0);
}

/// Rotates a symmetric matrix so every diagonal entry equals
/// tau = trace / c, using at most c - 1 plane rotations. Each step picks one
/// index below the band and one above, sets the low one exactly to tau, and
/// re-files the other. The input is not modified.
///
/// tol <= 0 selects the default tolerance.
UniformizationResult uniformize_diagonal(const Mat& sigma, double tol = 0.0);

/// Rotation for the encoder: uniformize a copy of the tracked projected
/// covariance and hand back R only.
Mat refresh_rotation(const ProjectedCovariance& cov, double tol = 0.0);

}  // namespace udsk
