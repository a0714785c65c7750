#include "udsk.h"

#include "udsk/binary_code.hpp"
#include "udsk/encoder.hpp"
#include "udsk/error.hpp"
#include "udsk/eval.hpp"
#include "udsk/io.hpp"
#include "udsk/rotation.hpp"
#include "udsk/synthetic.hpp"
#include "udsk/unifdiag.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>

using udsk::Status;

namespace {

udsk_status to_c_status(Status s) {
    return static_cast<udsk_status>(static_cast<int>(s));
}

/// Runs a callable, translating exceptions into status codes.
template <typename Fn>
udsk_status guarded(Fn&& fn) {
    try {
        fn();
        return UDSK_OK;
    } catch (const udsk::Error& e) {
        return to_c_status(e.status());
    } catch (const std::bad_alloc&) {
        return UDSK_ERR_UNKNOWN;
    } catch (const std::exception&) {
        return UDSK_ERR_UNKNOWN;
    }
}

void copy_matrix(const udsk::Mat& m, double* out) {
    std::memcpy(out, m.data(), m.size() * sizeof(double));
}

}  // namespace

struct udsk_encoder {
    udsk::StreamingEncoder impl;
};

struct udsk_stream {
    std::unique_ptr<udsk::VectorStream> impl;
    udsk::Vec pending;  // record already read but not yet delivered
    bool has_pending = false;
};

struct udsk_fvecs_writer {
    udsk::FvecsWriter impl;
};

struct udsk_code_writer {
    udsk::CodesWriter impl;
};

struct udsk_ground_truth {
    udsk::GroundTruth impl;
};

extern "C" {

const char* udsk_status_name(udsk_status status) {
    if (status == UDSK_ERR_UNKNOWN) return "unknown error";
    return udsk::status_name(static_cast<Status>(static_cast<int>(status)));
}

const char* udsk_version(void) { return "0.1.0"; }

void udsk_free(void* ptr) { std::free(ptr); }

/* encoder ----------------------------------------------------------- */

void udsk_encoder_config_init(udsk_encoder_config* config) {
    if (!config) return;
    config->dim = 0;
    config->code_bits = 0;
    config->rotation = UDSK_ROTATION_UNIFDIAG;
    config->rotation_seed = 0;
    config->seed = 0;
    config->beta = 1.0;
    config->tol = 0.0;
    config->refresh_warmup = 1000;
    config->refresh_interval = 10;
    config->reorthonormalize_every = 10000;
}

udsk_status udsk_encoder_create(const udsk_encoder_config* config, udsk_encoder** encoder_out) {
    if (!config || !encoder_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        udsk::EncoderConfig cfg;
        cfg.dim = config->dim;
        cfg.code_bits = config->code_bits;
        switch (config->rotation) {
            case UDSK_ROTATION_UNIFDIAG: cfg.rotation.kind = udsk::RotationKind::unif_diag; break;
            case UDSK_ROTATION_RANDOM_FIXED:
                cfg.rotation.kind = udsk::RotationKind::random_fixed;
                break;
            case UDSK_ROTATION_IDENTITY: cfg.rotation.kind = udsk::RotationKind::identity; break;
            default: udsk::fail(Status::bad_spec, "unknown rotation kind");
        }
        cfg.rotation.seed = config->rotation_seed;
        cfg.seed = config->seed;
        cfg.beta = config->beta;
        cfg.tol = config->tol;
        cfg.refresh_warmup = config->refresh_warmup;
        cfg.refresh_interval = config->refresh_interval;
        cfg.reorthonormalize_every = config->reorthonormalize_every;
        *encoder_out = new udsk_encoder{udsk::StreamingEncoder(cfg)};
    });
}

udsk_status udsk_encoder_clone(const udsk_encoder* encoder, udsk_encoder** clone_out) {
    if (!encoder || !clone_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { *clone_out = new udsk_encoder{encoder->impl}; });
}

void udsk_encoder_destroy(udsk_encoder* encoder) { delete encoder; }

udsk_status udsk_encoder_push(udsk_encoder* encoder, const double* x, size_t dim,
                              uint64_t* code_out) {
    if (!encoder || !x) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const udsk::BinaryCode code = encoder->impl.update_and_hash({x, dim});
        if (code_out)
            std::memcpy(code_out, code.words().data(), code.word_count() * sizeof(uint64_t));
    });
}

udsk_status udsk_encoder_hash(const udsk_encoder* encoder, const double* x, size_t dim,
                              uint64_t* code_out) {
    if (!encoder || !x || !code_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const udsk::BinaryCode code = encoder->impl.hash_only({x, dim});
        std::memcpy(code_out, code.words().data(), code.word_count() * sizeof(uint64_t));
    });
}

udsk_status udsk_encoder_refresh_rotation(udsk_encoder* encoder) {
    if (!encoder) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { encoder->impl.refresh_rotation_now(); });
}

size_t udsk_encoder_dim(const udsk_encoder* encoder) { return encoder ? encoder->impl.dim() : 0; }

size_t udsk_encoder_code_bits(const udsk_encoder* encoder) {
    return encoder ? encoder->impl.code_bits() : 0;
}

size_t udsk_encoder_code_words(const udsk_encoder* encoder) {
    return encoder ? (encoder->impl.code_bits() + 63) / 64 : 0;
}

uint64_t udsk_encoder_count(const udsk_encoder* encoder) {
    return encoder ? encoder->impl.count() : 0;
}

size_t udsk_encoder_state_bytes(const udsk_encoder* encoder) {
    return encoder ? encoder->impl.state_bytes() : 0;
}

udsk_status udsk_encoder_mean(const udsk_encoder* encoder, double* out) {
    if (!encoder || !out) return UDSK_ERR_NULL_ARGUMENT;
    std::memcpy(out, encoder->impl.mean().data(), encoder->impl.dim() * sizeof(double));
    return UDSK_OK;
}

udsk_status udsk_encoder_rotation(const udsk_encoder* encoder, double* out) {
    if (!encoder || !out) return UDSK_ERR_NULL_ARGUMENT;
    copy_matrix(encoder->impl.rotation(), out);
    return UDSK_OK;
}

udsk_status udsk_encoder_covariance(const udsk_encoder* encoder, double* out) {
    if (!encoder || !out) return UDSK_ERR_NULL_ARGUMENT;
    copy_matrix(encoder->impl.covariance().sigma, out);
    return UDSK_OK;
}

udsk_status udsk_encoder_projection(const udsk_encoder* encoder, double* out) {
    if (!encoder || !out) return UDSK_ERR_NULL_ARGUMENT;
    copy_matrix(encoder->impl.projection(), out);
    return UDSK_OK;
}

/* codes ------------------------------------------------------------- */

udsk_status udsk_hamming(const uint64_t* a, const uint64_t* b, uint32_t bits,
                         uint32_t* distance_out) {
    if (!a || !b || !distance_out) return UDSK_ERR_NULL_ARGUMENT;
    const size_t words = (bits + 63) / 64;
    return guarded(
        [&] { *distance_out = udsk::hamming_distance_words({a, words}, {b, words}); });
}

udsk_status udsk_pack_signs(const double* signs, uint32_t bits, uint64_t* words_out) {
    if (!signs || !words_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const udsk::BinaryCode code = udsk::BinaryCode::pack({signs, bits});
        std::memcpy(words_out, code.words().data(), code.word_count() * sizeof(uint64_t));
    });
}

udsk_status udsk_unpack_signs(const uint64_t* words, uint32_t bits, double* signs_out) {
    if (!words || !signs_out) return UDSK_ERR_NULL_ARGUMENT;
    for (uint32_t k = 0; k < bits; ++k)
        signs_out[k] = ((words[k / 64] >> (k % 64)) & 1u) ? 1.0 : -1.0;
    return UDSK_OK;
}

/* rotations --------------------------------------------------------- */

udsk_status udsk_random_orthogonal(size_t n, uint64_t seed, double* out) {
    if (!out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { copy_matrix(udsk::random_orthogonal(n, seed), out); });
}

udsk_status udsk_uniformize_diagonal(const double* sigma, size_t n, double tol,
                                     double* rotation_out, double* rotated_out,
                                     size_t* rotations_used_out, double* residual_out) {
    if (!sigma) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        udsk::Mat input(n, n);
        std::memcpy(input.data(), sigma, n * n * sizeof(double));
        const udsk::UniformizationResult result = udsk::uniformize_diagonal(input, tol);
        if (rotation_out) copy_matrix(result.rotation, rotation_out);
        if (rotated_out) copy_matrix(result.rotated, rotated_out);
        if (rotations_used_out) *rotations_used_out = result.rotations_used;
        if (residual_out) *residual_out = result.residual;
    });
}

/* vector streams ----------------------------------------------------- */

udsk_status udsk_stream_open_fvecs(const char* path, udsk_stream** stream_out) {
    if (!path || !stream_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { *stream_out = new udsk_stream{udsk::open_fvecs(path), {}, false}; });
}

udsk_status udsk_stream_open_csv(const char* path, udsk_stream** stream_out) {
    if (!path || !stream_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { *stream_out = new udsk_stream{udsk::open_csv(path), {}, false}; });
}

void udsk_synthetic_spec_init(udsk_synthetic_spec* spec) {
    if (!spec) return;
    spec->dim = 0;
    spec->intrinsic_rank = 0;
    spec->decay = 1.0;
    spec->count = 0;
    spec->noise = 0.0;
    spec->seed = 0;
    spec->clusters = 1;
    spec->cluster_spread = 3.0;
}

udsk_status udsk_stream_open_synthetic(const udsk_synthetic_spec* spec,
                                       udsk_stream** stream_out) {
    if (!spec || !stream_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        udsk::SyntheticSpec s;
        s.dim = spec->dim;
        s.intrinsic_rank = spec->intrinsic_rank;
        s.decay = spec->decay;
        s.count = spec->count;
        s.noise = spec->noise;
        s.seed = spec->seed;
        s.clusters = spec->clusters;
        s.cluster_spread = spec->cluster_spread;
        *stream_out = new udsk_stream{udsk::make_synthetic_stream(s), {}, false};
    });
}

udsk_status udsk_stream_next(udsk_stream* stream, double* out, size_t capacity, int* has_value) {
    if (!stream || !out || !has_value) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        if (!stream->has_pending) {
            if (!stream->impl->next(stream->pending)) {
                *has_value = 0;
                return;
            }
            stream->has_pending = true;
        }
        // A too-small buffer keeps the record pending for the retry.
        if (stream->pending.size() > capacity)
            udsk::fail(Status::size_mismatch, "output buffer too small");
        std::memcpy(out, stream->pending.data(), stream->pending.size() * sizeof(double));
        stream->has_pending = false;
        *has_value = 1;
    });
}

size_t udsk_stream_dim(const udsk_stream* stream) { return stream ? stream->impl->dim() : 0; }

uint64_t udsk_stream_size_hint(const udsk_stream* stream) {
    if (!stream) return 0;
    return stream->impl->size_hint().value_or(0);
}

void udsk_stream_close(udsk_stream* stream) { delete stream; }

/* files -------------------------------------------------------------- */

udsk_status udsk_fvecs_writer_open(const char* path, udsk_fvecs_writer** writer_out) {
    if (!path || !writer_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { *writer_out = new udsk_fvecs_writer{udsk::FvecsWriter(path)}; });
}

udsk_status udsk_fvecs_writer_append(udsk_fvecs_writer* writer, const float* v, size_t dim) {
    if (!writer || !v) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] { writer->impl.append(std::span<const float>(v, dim)); });
}

udsk_status udsk_fvecs_writer_close(udsk_fvecs_writer* writer) {
    if (!writer) return UDSK_ERR_NULL_ARGUMENT;
    const udsk_status status = guarded([&] { writer->impl.close(); });
    delete writer;
    return status;
}

udsk_status udsk_code_writer_open(const char* path, uint32_t code_bits,
                                  udsk_code_writer** writer_out) {
    if (!path || !writer_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded(
        [&] { *writer_out = new udsk_code_writer{udsk::CodesWriter(path, code_bits)}; });
}

udsk_status udsk_code_writer_append(udsk_code_writer* writer, const uint64_t* words) {
    if (!writer || !words) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        writer->impl.append_words({words, writer->impl.words_per_code()});
    });
}

udsk_status udsk_code_writer_close(udsk_code_writer* writer) {
    if (!writer) return UDSK_ERR_NULL_ARGUMENT;
    const udsk_status status = guarded([&] { writer->impl.close(); });
    delete writer;
    return status;
}

udsk_status udsk_code_file_read(const char* path, uint32_t* bits_out, uint64_t* count_out,
                                uint64_t** words_out) {
    if (!path || !bits_out || !count_out || !words_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const udsk::CodesFile file = udsk::read_codes(path);
        const size_t words_per_code = (file.code_bits + 63) / 64;
        const size_t total = file.codes.size() * words_per_code;
        uint64_t* block = static_cast<uint64_t*>(std::malloc(std::max<size_t>(total, 1) * 8));
        if (!block) udsk::fail(Status::io_failure, "allocation failed");
        for (size_t r = 0; r < file.codes.size(); ++r)
            std::memcpy(block + r * words_per_code, file.codes[r].words().data(),
                        words_per_code * sizeof(uint64_t));
        *bits_out = file.code_bits;
        *count_out = file.codes.size();
        *words_out = block;
    });
}

/* evaluation ---------------------------------------------------------- */

udsk_status udsk_ground_truth_build(const double* train, size_t n, size_t dim,
                                    const double* queries, size_t q, size_t k,
                                    const int64_t* self_ids, int average_over_train,
                                    udsk_ground_truth** gt_out) {
    if (!train || !queries || !gt_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        udsk::Mat train_m(n, dim);
        std::memcpy(train_m.data(), train, n * dim * sizeof(double));
        udsk::Mat query_m(q, dim);
        std::memcpy(query_m.data(), queries, q * dim * sizeof(double));
        std::span<const int64_t> ids;
        if (self_ids) ids = {self_ids, q};
        *gt_out = new udsk_ground_truth{udsk::build_ground_truth(
            train_m, query_m, k, ids,
            average_over_train ? udsk::ThresholdPopulation::train
                               : udsk::ThresholdPopulation::queries)};
    });
}

double udsk_ground_truth_threshold(const udsk_ground_truth* gt) {
    return gt ? gt->impl.threshold : 0.0;
}

size_t udsk_ground_truth_neighbor_count(const udsk_ground_truth* gt, size_t query) {
    if (!gt || query >= gt->impl.neighbor_sets.size()) return 0;
    return gt->impl.neighbor_sets[query].size();
}

void udsk_ground_truth_destroy(udsk_ground_truth* gt) { delete gt; }

udsk_status udsk_evaluate(const udsk_ground_truth* gt, const uint64_t* train_codes, size_t n,
                          const uint64_t* query_codes, size_t q, uint32_t bits, double* map_out,
                          double* per_query_ap, size_t* scored_out) {
    if (!gt || !train_codes || !query_codes || !map_out) return UDSK_ERR_NULL_ARGUMENT;
    return guarded([&] {
        const size_t words_per_code = (bits + 63) / 64;
        const auto unpack = [&](const uint64_t* packed, size_t count) {
            std::vector<udsk::BinaryCode> codes;
            codes.reserve(count);
            for (size_t r = 0; r < count; ++r) {
                udsk::BinaryCode code(bits);
                for (uint32_t b = 0; b < bits; ++b) {
                    const uint64_t word = packed[r * words_per_code + b / 64];
                    if ((word >> (b % 64)) & 1u) code.set_bit(b, true);
                }
                codes.push_back(std::move(code));
            }
            return codes;
        };
        const auto train_vec = unpack(train_codes, n);
        const auto query_vec = unpack(query_codes, q);
        const udsk::EvalReport report = udsk::evaluate(train_vec, query_vec, gt->impl);
        *map_out = report.map;
        if (per_query_ap)
            std::memcpy(per_query_ap, report.per_query_ap.data(), q * sizeof(double));
        if (scored_out) *scored_out = report.n_queries;
    });
}

}  // extern "C"
