#include "udsk/rotation.hpp"

#include "udsk/error.hpp"
#include "udsk/rng.hpp"

namespace udsk {

const char* rotation_kind_name(RotationKind kind) {
    switch (kind) {
        case RotationKind::unif_diag: return "unifdiag";
        case RotationKind::random_fixed: return "randrot";
        case RotationKind::identity: return "identity";
    }
    return "unknown";
}

Mat random_orthogonal(std::size_t n, std::uint64_t seed) {
    if (n == 0) fail(Status::bad_dimensions, "dimension must be positive");
    Rng rng(seed);
    Mat q(n, n);
    for (std::size_t k = 0; k < q.size(); ++k) q.data()[k] = rng.gaussian();
    // Orthonormalizing the rows of a Gaussian matrix is QR with a positive
    // diagonal, so no sign fix is needed for Haar uniformity.
    orthonormalize_rows(q);
    orthonormalize_rows(q);
    return q;
}

}  // namespace udsk
