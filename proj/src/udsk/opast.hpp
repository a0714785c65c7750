#pragma once

#include "udsk/linalg.hpp"

#include <cstdint>
#include <span>

namespace udsk {

/// Exponentially weighted covariance of the projected stream,
/// sigma <- beta * sigma + y y^T. Symmetric by construction.
struct ProjectedCovariance {
    Mat sigma;
    double weight = 0.0;

    explicit ProjectedCovariance(std::size_t c = 0) : sigma(c, c) {}

    std::size_t dim() const { return sigma.rows(); }
    double tau() const { return dim() ? trace(sigma) / static_cast<double>(dim()) : 0.0; }
};

void projected_cov_update(ProjectedCovariance& cov, std::span<const double> y, double beta);

/// Online tracker of the c-dimensional principal subspace. Keeps a c x d
/// projection W with orthonormal rows and a c x c auxiliary matrix Z
/// (approximate inverse of the projected correlation). One update costs
/// 4dc + O(c^2) flops; nothing sized d x d is ever formed.
///
/// Z is propagated as a square-root factor G with Z = G G^T. The plain
/// rank-one inverse update amplifies roundoff by 1/beta per step and loses
/// definiteness within ~ln(1/eps)/ln(1/beta) updates when beta < 1; the
/// factored form keeps Z positive definite for any beta.
class OpastTracker {
public:
    /// W starts as a seeded random orthonormal basis, Z as the identity.
    OpastTracker(std::size_t dim, std::size_t subspace_dim, std::uint64_t seed,
                 double beta = 1.0, std::size_t reorthonormalize_every = 10000);

    /// Projects x with the current basis, then folds x into the tracked
    /// subspace. Returns y = W x computed before the update; the reference
    /// stays valid until the next call.
    const Vec& update(std::span<const double> x);

    std::size_t dim() const { return w_.cols(); }
    std::size_t subspace_dim() const { return w_.rows(); }
    double beta() const { return beta_; }
    std::uint64_t updates() const { return updates_; }

    const Mat& projection() const { return w_; }

    /// Materializes Z = G G^T (symmetric positive definite).
    Mat auxiliary() const;

    /// Heap footprint of the tracker state, for memory-stability checks.
    std::size_t state_bytes() const;

private:
    Mat w_;       // c x d, orthonormal rows
    Mat factor_;  // c x c, Z = factor factor^T
    double beta_;
    std::uint64_t updates_ = 0;
    std::size_t reorth_every_;

    // Per-update scratch, kept to avoid allocating in the hot path.
    Vec y_, q_, v_, p_, wq_;
};

}  // namespace udsk
