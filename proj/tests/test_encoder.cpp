#include "udsk/encoder.hpp"

#include "support/oracles.hpp"
#include "udsk/error.hpp"
#include "udsk/rng.hpp"
#include "udsk/synthetic.hpp"
#include "udsk/unifdiag.hpp"

#include <doctest.h>

#include <cmath>

using udsk::BinaryCode;
using udsk::EncoderConfig;
using udsk::Mat;
using udsk::StreamingEncoder;
using udsk::Vec;

namespace {

EncoderConfig small_config(udsk::RotationKind kind = udsk::RotationKind::unif_diag) {
    EncoderConfig config;
    config.dim = 16;
    config.code_bits = 4;
    config.rotation.kind = kind;
    config.rotation.seed = 11;
    config.seed = 3;
    return config;
}

bool all_ones(const BinaryCode& code) {
    for (std::uint32_t k = 0; k < code.length(); ++k)
        if (!code.bit(k)) return false;
    return true;
}

}  // namespace

TEST_CASE("first sample centers to zero and hashes to the all-ones code") {
    for (const auto kind : {udsk::RotationKind::unif_diag, udsk::RotationKind::random_fixed,
                            udsk::RotationKind::identity}) {
        StreamingEncoder enc(small_config(kind));
        udsk::Rng rng(1);
        const BinaryCode code = enc.update_and_hash(oracle::random_vector(16, rng));
        CHECK(all_ones(code));
        CHECK(enc.count() == 1);
    }
}

TEST_CASE("deterministic: same stream and config give identical codes") {
    udsk::Rng rng(9);
    std::vector<Vec> stream;
    for (int t = 0; t < 200; ++t) stream.push_back(oracle::random_vector(16, rng));

    StreamingEncoder a(small_config());
    StreamingEncoder b(small_config());
    for (const Vec& x : stream) {
        const BinaryCode ca = a.update_and_hash(x);
        const BinaryCode cb = b.update_and_hash(x);
        CHECK(ca == cb);
    }
    CHECK(a.mean() == b.mean());
    CHECK(a.rotation() == b.rotation());
}

TEST_CASE("hash_only: frozen, idempotent, mean hashes to all-ones") {
    StreamingEncoder enc(small_config());
    udsk::Rng rng(2);
    for (int t = 0; t < 50; ++t) (void)enc.update_and_hash(oracle::random_vector(16, rng));

    const Vec probe = oracle::random_vector(16, rng);
    const std::uint64_t count_before = enc.count();
    const BinaryCode first = enc.hash_only(probe);
    const BinaryCode second = enc.hash_only(probe);
    CHECK(first == second);
    CHECK(enc.count() == count_before);

    CHECK(all_ones(enc.hash_only(enc.mean())));
}

TEST_CASE("hash_only: requires a non-empty encoder") {
    StreamingEncoder enc(small_config());
    Vec x(16, 0.0);
    try {
        (void)enc.hash_only(x);
        CHECK(false);
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::empty_encoder);
    }
}

TEST_CASE("hash_only: agrees with a long-double reimplementation") {
    StreamingEncoder enc(small_config());
    udsk::Rng rng(4);
    for (int t = 0; t < 300; ++t) (void)enc.update_and_hash(oracle::random_vector(16, rng));

    const Mat& w = enc.projection();
    const Mat& r = enc.rotation();
    const Vec& mean = enc.mean();
    for (int trial = 0; trial < 200; ++trial) {
        const Vec x = oracle::random_vector(16, rng);
        std::vector<long double> centered(16);
        for (std::size_t j = 0; j < 16; ++j)
            centered[j] = static_cast<long double>(x[j]) - static_cast<long double>(mean[j]);
        std::vector<long double> projected(4, 0.0L);
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t j = 0; j < 16; ++j)
                projected[k] += static_cast<long double>(w(k, j)) * centered[j];
        BinaryCode expected(4);
        for (std::size_t m = 0; m < 4; ++m) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < 4; ++k)
                acc += static_cast<long double>(r(m, k)) * projected[k];
            expected.set_bit(static_cast<std::uint32_t>(m), acc >= 0.0L);
        }
        CHECK(enc.hash_only(x) == expected);
    }
}

TEST_CASE("rotated projection balances the per-direction variances") {
    udsk::SyntheticSpec spec;
    spec.dim = 64;
    spec.intrinsic_rank = 32;
    spec.decay = 0.7;
    spec.noise = 0.05;
    spec.count = 5000;
    spec.seed = 31;
    spec.clusters = 1;
    spec.cluster_spread = 0.0;
    udsk::SyntheticStream stream(spec);

    EncoderConfig config;
    config.dim = 64;
    config.code_bits = 16;
    config.seed = 12;
    StreamingEncoder enc(config);
    Vec x;
    while (stream.next(x)) (void)enc.update_and_hash(x);
    enc.refresh_rotation_now();  // make the final state a refresh point

    const Mat& sigma = enc.covariance().sigma;
    const Mat balanced = udsk::conjugate(enc.rotation(), sigma);
    double lo = balanced(0, 0), hi = balanced(0, 0);
    for (std::size_t l = 1; l < 16; ++l) {
        lo = std::min(lo, balanced(l, l));
        hi = std::max(hi, balanced(l, l));
    }
    const double tau = enc.covariance().tau();
    const double tol = udsk::default_uniformization_tol(tau);
    CHECK(hi / lo <= 1.0 + 10.0 * tol / tau);

    // The raw projected covariance is strongly anisotropic by construction.
    double raw_lo = sigma(0, 0), raw_hi = sigma(0, 0);
    for (std::size_t l = 1; l < 16; ++l) {
        raw_lo = std::min(raw_lo, sigma(l, l));
        raw_hi = std::max(raw_hi, sigma(l, l));
    }
    CHECK(raw_hi / raw_lo >= 2.0);

    // Rows of R W stay orthonormal at refresh points.
    const Mat w_tilde = udsk::matmul(enc.rotation(), enc.projection());
    CHECK(udsk::row_orthonormality_error(w_tilde) <= 1e-8);
}

TEST_CASE("state size does not grow with the stream") {
    StreamingEncoder enc(small_config());
    udsk::Rng rng(8);
    (void)enc.update_and_hash(oracle::random_vector(16, rng));
    const std::size_t bytes_early = enc.state_bytes();
    for (int t = 0; t < 5000; ++t) (void)enc.update_and_hash(oracle::random_vector(16, rng));
    CHECK(enc.state_bytes() == bytes_early);
}

TEST_CASE("encoder input validation") {
    StreamingEncoder enc(small_config());
    Vec wrong(5, 0.0);
    CHECK_THROWS_AS((void)enc.update_and_hash(wrong), udsk::Error);
    Vec bad(16, 0.0);
    bad[7] = std::nan("");
    try {
        (void)enc.update_and_hash(bad);
        CHECK(false);
    } catch (const udsk::Error& e) {
        CHECK(e.status() == udsk::Status::non_finite_input);
    }
    CHECK(enc.count() == 0);  // rejected samples are not consumed
}

TEST_CASE("encoder config validation") {
    EncoderConfig config = small_config();
    config.code_bits = 16;  // must stay below dim
    CHECK_THROWS_AS(StreamingEncoder{config}, udsk::Error);
}
