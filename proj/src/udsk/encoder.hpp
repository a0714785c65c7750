#pragma once

#include "udsk/binary_code.hpp"
#include "udsk/linalg.hpp"
#include "udsk/opast.hpp"
#include "udsk/rotation.hpp"

#include <cstdint>
#include <span>

namespace udsk {

struct EncoderConfig {
    std::size_t dim = 0;
    std::size_t code_bits = 0;
    RotationStrategy rotation;
    std::uint64_t seed = 0;      // seeds the initial subspace basis
    double beta = 1.0;           // forgetting factor; 1 = growing window
    double tol = 0.0;            // uniformization tolerance; <= 0 selects the default
    std::size_t refresh_warmup = 1000;   // refresh every sample up to this count
    std::size_t refresh_interval = 10;   // then every this many samples
    std::size_t reorthonormalize_every = 10000;
};

/// The full streaming pipeline: center, project onto the tracked principal
/// subspace, rotate, take signs, pack. Each sample is seen exactly once and
/// its code is emitted from the state as of before that sample; state is
/// O(dim * bits + bits^2) regardless of stream length.
class StreamingEncoder {
public:
    explicit StreamingEncoder(const EncoderConfig& config);

    /// Consumes one stream sample: emits its code, then updates the running
    /// mean, the subspace, the projected covariance, and (on schedule) the
    /// rotation.
    BinaryCode update_and_hash(std::span<const double> x);

    /// Encodes with frozen state; requires at least one consumed sample.
    BinaryCode hash_only(std::span<const double> x) const;

    /// Recomputes the rotation from the current projected covariance now
    /// (no-op for the fixed-rotation strategies).
    void refresh_rotation_now();

    std::size_t dim() const { return config_.dim; }
    std::size_t code_bits() const { return config_.code_bits; }
    std::uint64_t count() const { return count_; }
    const EncoderConfig& config() const { return config_; }

    const Vec& mean() const { return mean_; }
    const Mat& rotation() const { return rotation_; }
    const Mat& projection() const { return opast_.projection(); }
    const ProjectedCovariance& covariance() const { return cov_; }

    /// Heap footprint of the encoder state, for memory-stability checks.
    std::size_t state_bytes() const;

private:
    bool refresh_due() const;

    EncoderConfig config_;
    Vec mean_;
    std::uint64_t count_ = 0;
    OpastTracker opast_;
    ProjectedCovariance cov_;
    Mat rotation_;
    Vec centered_, rotated_;  // scratch
};

}  // namespace udsk
