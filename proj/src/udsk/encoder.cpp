#include "udsk/encoder.hpp"

#include "udsk/error.hpp"
#include "udsk/unifdiag.hpp"

namespace udsk {

StreamingEncoder::StreamingEncoder(const EncoderConfig& config)
    : config_(config),
      mean_(config.dim, 0.0),
      opast_(config.dim, config.code_bits, config.seed, config.beta,
             config.reorthonormalize_every),
      cov_(config.code_bits),
      centered_(config.dim),
      rotated_(config.code_bits) {
    switch (config_.rotation.kind) {
        case RotationKind::random_fixed:
            rotation_ = random_orthogonal(config_.code_bits, config_.rotation.seed);
            break;
        case RotationKind::unif_diag:
        case RotationKind::identity:
            rotation_ = Mat::identity(config_.code_bits);
            break;
    }
}

bool StreamingEncoder::refresh_due() const {
    if (config_.rotation.kind != RotationKind::unif_diag) return false;
    if (count_ <= config_.refresh_warmup) return true;
    if (config_.refresh_interval == 0) return false;
    return (count_ - config_.refresh_warmup) % config_.refresh_interval == 0;
}

BinaryCode StreamingEncoder::update_and_hash(std::span<const double> x) {
    if (x.size() != config_.dim) fail(Status::dimension_mismatch, "sample dimension mismatch");
    if (!all_finite(x)) fail(Status::non_finite_input, "sample has non-finite entries");

    // The first sample seeds the mean, so it is centered to exactly zero;
    // afterwards samples are centered against the mean of their predecessors.
    if (count_ == 0) mean_.assign(x.begin(), x.end());
    for (std::size_t j = 0; j < config_.dim; ++j) centered_[j] = x[j] - mean_[j];

    const Vec& y = opast_.update(centered_);

    // Code from the pre-update rotation and projection.
    for (std::size_t k = 0; k < config_.code_bits; ++k)
        rotated_[k] = dot({rotation_.row(k), config_.code_bits}, y);
    BinaryCode code = BinaryCode::from_signs_of(rotated_);

    ++count_;
    const double inv_count = 1.0 / static_cast<double>(count_);
    for (std::size_t j = 0; j < config_.dim; ++j) mean_[j] += (x[j] - mean_[j]) * inv_count;
    projected_cov_update(cov_, y, config_.beta);
    if (refresh_due()) rotation_ = refresh_rotation(cov_, config_.tol);

    return code;
}

BinaryCode StreamingEncoder::hash_only(std::span<const double> x) const {
    if (count_ == 0) fail(Status::empty_encoder, "hash_only before any update");
    if (x.size() != config_.dim) fail(Status::dimension_mismatch, "sample dimension mismatch");
    if (!all_finite(x)) fail(Status::non_finite_input, "sample has non-finite entries");

    Vec centered(config_.dim);
    for (std::size_t j = 0; j < config_.dim; ++j) centered[j] = x[j] - mean_[j];
    const Vec projected = matvec(opast_.projection(), centered);
    const Vec rotated = matvec(rotation_, projected);
    return BinaryCode::from_signs_of(rotated);
}

void StreamingEncoder::refresh_rotation_now() {
    if (config_.rotation.kind != RotationKind::unif_diag) return;
    rotation_ = refresh_rotation(cov_, config_.tol);
}

std::size_t StreamingEncoder::state_bytes() const {
    return sizeof(double) * (mean_.capacity() + cov_.sigma.size() + rotation_.size() +
                             centered_.capacity() + rotated_.capacity()) +
           opast_.state_bytes();
}

}  // namespace udsk
