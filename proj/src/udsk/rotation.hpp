#pragma once

#include "udsk/linalg.hpp"

#include <cstdint>

namespace udsk {

/// How the encoder's c x c rotation is chosen.
enum class RotationKind {
    unif_diag,     // re-learned from the projected covariance at refresh points
    random_fixed,  // one seeded random rotation, never changed
    identity,      // no rotation; raw principal directions
};

struct RotationStrategy {
    RotationKind kind = RotationKind::unif_diag;
    std::uint64_t seed = 0;  // used by random_fixed only
};

const char* rotation_kind_name(RotationKind kind);

/// Seeded random orthogonal matrix: Gram-Schmidt QR of a Gaussian matrix.
/// The positive-diagonal convention this produces is the Haar-uniform one.
Mat random_orthogonal(std::size_t n, std::uint64_t seed);

}  // namespace udsk
