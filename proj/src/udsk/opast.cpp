#include "udsk/opast.hpp"

#include "udsk/error.hpp"
#include "udsk/rng.hpp"

#include <cmath>

namespace udsk {

void projected_cov_update(ProjectedCovariance& cov, std::span<const double> y, double beta) {
    const std::size_t c = cov.dim();
    if (y.size() != c) fail(Status::dimension_mismatch, "projection length != covariance dimension");
    if (!all_finite(y)) fail(Status::non_finite_input, "projection has non-finite entries");
    for (std::size_t k = 0; k < c; ++k) {
        double* row = cov.sigma.row(k);
        const double yk = y[k];
        for (std::size_t l = 0; l < c; ++l) row[l] = beta * row[l] + yk * y[l];
    }
    cov.weight = beta * cov.weight + 1.0;
}

OpastTracker::OpastTracker(std::size_t dim, std::size_t subspace_dim, std::uint64_t seed,
                           double beta, std::size_t reorthonormalize_every)
    : w_(subspace_dim, dim),
      factor_(Mat::identity(subspace_dim)),
      beta_(beta),
      reorth_every_(reorthonormalize_every),
      y_(subspace_dim),
      q_(subspace_dim),
      v_(subspace_dim),
      p_(dim),
      wq_(dim) {
    if (subspace_dim == 0 || subspace_dim >= dim)
        fail(Status::bad_dimensions, "need 1 <= subspace dimension < input dimension");
    if (!(beta > 0.0 && beta <= 1.0)) fail(Status::bad_spec, "beta must be in (0, 1]");

    Rng rng(seed);
    for (std::size_t k = 0; k < w_.size(); ++k) w_.data()[k] = rng.gaussian();
    orthonormalize_rows(w_);
    orthonormalize_rows(w_);  // second pass scrubs the first one's roundoff
}

const Vec& OpastTracker::update(std::span<const double> x) {
    const std::size_t d = dim();
    const std::size_t c = subspace_dim();
    if (x.size() != d) fail(Status::dimension_mismatch, "sample dimension mismatch");
    if (!all_finite(x)) fail(Status::non_finite_input, "sample has non-finite entries");

    // y = W x
    for (std::size_t k = 0; k < c; ++k)
        y_[k] = dot({w_.row(k), d}, x);

    // q = Z y / beta with Z = G G^T: v = G^T y, q = G v / beta. Then
    // y^T q = ||v||^2 / beta >= 0, so gamma stays in (0, 1].
    std::fill(v_.begin(), v_.end(), 0.0);
    for (std::size_t k = 0; k < c; ++k) {
        const double* row = factor_.row(k);
        const double yk = y_[k];
        for (std::size_t l = 0; l < c; ++l) v_[l] += row[l] * yk;
    }
    const double v_norm_sq = dot(v_, v_);
    for (std::size_t k = 0; k < c; ++k) q_[k] = dot({factor_.row(k), c}, v_) / beta_;
    const double y_dot_q = v_norm_sq / beta_;
    const double gamma = 1.0 / (1.0 + y_dot_q);

    // One pass over W for both W^T y and W^T q.
    std::fill(p_.begin(), p_.end(), 0.0);
    std::fill(wq_.begin(), wq_.end(), 0.0);
    for (std::size_t k = 0; k < c; ++k) {
        const double* row = w_.row(k);
        const double yk = y_[k];
        const double qk = q_[k];
        for (std::size_t j = 0; j < d; ++j) {
            p_[j] += row[j] * yk;
            wq_[j] += row[j] * qk;
        }
    }

    // p = gamma * (x - W^T y)
    double p_norm_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        p_[j] = gamma * (x[j] - p_[j]);
        p_norm_sq += p_[j] * p_[j];
    }

    // Factor update realizing Z <- Z/beta - gamma q q^T:
    // G <- (G - alpha (G v) v^T) / sqrt(beta) with G v = beta q and
    // (1 - alpha ||v||^2)^2 = beta / (beta + ||v||^2).
    const double alpha =
        v_norm_sq > 0.0
            ? (1.0 - std::sqrt(beta_ / (beta_ + v_norm_sq))) / v_norm_sq
            : 0.0;
    const double inv_sqrt_beta = 1.0 / std::sqrt(beta_);
    for (std::size_t k = 0; k < c; ++k) {
        double* row = factor_.row(k);
        const double coef = alpha * beta_ * q_[k];
        for (std::size_t l = 0; l < c; ++l) row[l] = (row[l] - coef * v_[l]) * inv_sqrt_beta;
    }

    const double q_norm_sq = dot(q_, q_);
    const double tau0 =
        q_norm_sq > 0.0
            ? (1.0 / q_norm_sq) * (1.0 / std::sqrt(1.0 + p_norm_sq * q_norm_sq) - 1.0)
            : 0.0;

    // p' = tau0 W^T q + (1 + tau0 ||q||^2) p, folded into p_; then
    // W <- W + q p'^T, which restores exact row orthonormality.
    const double scale = 1.0 + tau0 * q_norm_sq;
    for (std::size_t j = 0; j < d; ++j) p_[j] = tau0 * wq_[j] + scale * p_[j];
    for (std::size_t k = 0; k < c; ++k) {
        double* row = w_.row(k);
        const double qk = q_[k];
        for (std::size_t j = 0; j < d; ++j) row[j] += qk * p_[j];
    }

    ++updates_;
    if (reorth_every_ != 0 && updates_ % reorth_every_ == 0) orthonormalize_rows(w_);
    return y_;
}

Mat OpastTracker::auxiliary() const {
    const std::size_t c = subspace_dim();
    Mat z(c, c);
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t l = k; l < c; ++l) {
            const double val = dot({factor_.row(k), c}, {factor_.row(l), c});
            z(k, l) = val;
            z(l, k) = val;
        }
    }
    return z;
}

std::size_t OpastTracker::state_bytes() const {
    return sizeof(double) * (w_.size() + factor_.size() + y_.capacity() + q_.capacity() +
                             v_.capacity() + p_.capacity() + wq_.capacity());
}

}  // namespace udsk
