#include "udsk/synthetic.hpp"

#include "udsk/error.hpp"

#include <cmath>

namespace udsk {

SyntheticStream::SyntheticStream(const SyntheticSpec& spec) : spec_(spec), rng_(spec.seed) {
    if (spec.dim == 0) fail(Status::bad_spec, "dim must be positive");
    if (spec.intrinsic_rank == 0 || spec.intrinsic_rank > spec.dim)
        fail(Status::bad_spec, "need 1 <= intrinsic_rank <= dim");
    if (!(spec.decay > 0.0 && spec.decay <= 1.0)) fail(Status::bad_spec, "decay must be in (0, 1]");
    if (spec.noise < 0.0) fail(Status::bad_spec, "noise must be non-negative");
    if (spec.clusters == 0) fail(Status::bad_spec, "need at least one cluster");
    if (spec.cluster_spread < 0.0) fail(Status::bad_spec, "cluster_spread must be non-negative");

    const std::size_t r = spec.intrinsic_rank;
    basis_ = Mat(r, spec.dim);
    for (std::size_t k = 0; k < basis_.size(); ++k) basis_.data()[k] = rng_.gaussian();
    orthonormalize_rows(basis_);
    orthonormalize_rows(basis_);

    axis_stddev_.resize(r);
    for (std::size_t i = 0; i < r; ++i)
        axis_stddev_[i] = std::pow(spec.decay, 0.5 * static_cast<double>(i));

    // Cluster centers live in the subspace, scaled like the axes so the
    // overall variance profile keeps its shape.
    centers_ = Mat(spec.clusters, r);
    if (spec.clusters > 1 || spec.cluster_spread > 0.0) {
        for (std::size_t k = 0; k < spec.clusters; ++k)
            for (std::size_t i = 0; i < r; ++i)
                centers_(k, i) = spec.cluster_spread * axis_stddev_[i] * rng_.gaussian();
    }

    coeff_.resize(r);
}

bool SyntheticStream::next(Vec& out) {
    if (emitted_ >= spec_.count) return false;
    ++emitted_;

    const std::size_t r = spec_.intrinsic_rank;
    const std::size_t cluster =
        spec_.clusters > 1 ? static_cast<std::size_t>(rng_.uniform_index(spec_.clusters)) : 0;
    for (std::size_t i = 0; i < r; ++i)
        coeff_[i] = centers_(cluster, i) + axis_stddev_[i] * rng_.gaussian();

    out.assign(spec_.dim, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        const double ci = coeff_[i];
        const double* axis = basis_.row(i);
        for (std::size_t j = 0; j < spec_.dim; ++j) out[j] += ci * axis[j];
    }
    if (spec_.noise > 0.0) {
        for (std::size_t j = 0; j < spec_.dim; ++j) out[j] += spec_.noise * rng_.gaussian();
    }
    return true;
}

std::unique_ptr<SyntheticStream> make_synthetic_stream(const SyntheticSpec& spec) {
    return std::make_unique<SyntheticStream>(spec);
}

}  // namespace udsk
