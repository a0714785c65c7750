#pragma once

#include "udsk/io.hpp"
#include "udsk/linalg.hpp"
#include "udsk/rng.hpp"

#include <cstdint>
#include <memory>

namespace udsk {

/// A seeded mixture of Gaussians living in a random rank-r subspace with a
/// geometric variance profile, plus isotropic noise. The population
/// covariance is known in closed form, which makes these streams usable as
/// oracles.
struct SyntheticSpec {
    std::size_t dim = 0;
    std::size_t intrinsic_rank = 0;
    double decay = 1.0;           // eigenvalue ratio between consecutive directions, in (0, 1]
    std::size_t count = 0;        // stream length
    double noise = 0.0;           // isotropic noise standard deviation
    std::uint64_t seed = 0;
    std::size_t clusters = 1;
    double cluster_spread = 3.0;  // center std dev relative to each axis std dev
};

class SyntheticStream : public VectorStream {
public:
    explicit SyntheticStream(const SyntheticSpec& spec);

    bool next(Vec& out) override;
    std::size_t dim() const override { return spec_.dim; }
    std::optional<std::uint64_t> size_hint() const override { return spec_.count; }

    const SyntheticSpec& spec() const { return spec_; }

    /// Subspace axis standard deviations, sqrt(decay^(i-1)).
    const Vec& axis_stddev() const { return axis_stddev_; }
    /// The rank x dim orthonormal basis the data lives in.
    const Mat& basis() const { return basis_; }

private:
    SyntheticSpec spec_;
    Rng rng_;
    Mat basis_;              // rank x dim, orthonormal rows
    Vec axis_stddev_;        // per-axis standard deviations
    Mat centers_;            // clusters x rank, subspace coordinates
    std::uint64_t emitted_ = 0;
    Vec coeff_;              // scratch
};

std::unique_ptr<SyntheticStream> make_synthetic_stream(const SyntheticSpec& spec);

}  // namespace udsk
