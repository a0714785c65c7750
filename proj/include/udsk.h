/*
 * udsk -- streaming binary sketches for similarity search.
 *
 * C API over the core library: a one-pass encoder turning a stream of
 * d-dimensional vectors into c-bit binary codes that preserve Euclidean
 * neighborhoods, plus the evaluation and file-format primitives around it.
 *
 * Conventions:
 *   - every fallible call returns udsk_status; UDSK_OK is 0
 *   - objects are opaque handles created/destroyed by matching calls
 *   - matrices are row-major double buffers owned by the caller
 *   - packed codes are ceil(bits/64) uint64 words, bit k of a code at
 *     bit (k % 64) of word (k / 64)
 */

#ifndef UDSK_H
#define UDSK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UDSK_API __declspec(dllexport)
#else
#define UDSK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum udsk_status {
    UDSK_OK = 0,
    UDSK_ERR_NULL_ARGUMENT = 1,
    UDSK_ERR_BAD_DIMENSIONS = 2,
    UDSK_ERR_DIMENSION_MISMATCH = 3,
    UDSK_ERR_NON_FINITE_INPUT = 4,
    UDSK_ERR_INDEX_OUT_OF_RANGE = 5,
    UDSK_ERR_NOT_SYMMETRIC = 6,
    UDSK_ERR_ADMISSIBILITY_VIOLATED = 7,
    UDSK_ERR_DEGENERATE_PLANE = 8,
    UDSK_ERR_LENGTH_MISMATCH = 9,
    UDSK_ERR_BAD_SIGN_VALUE = 10,
    UDSK_ERR_EMPTY_ENCODER = 11,
    UDSK_ERR_TOO_FEW_POINTS = 12,
    UDSK_ERR_SIZE_MISMATCH = 13,
    UDSK_ERR_IO = 14,
    UDSK_ERR_TRUNCATED_RECORD = 15,
    UDSK_ERR_INCONSISTENT_DIMENSION = 16,
    UDSK_ERR_NEGATIVE_DIMENSION = 17,
    UDSK_ERR_BAD_SPEC = 18,
    UDSK_ERR_UNKNOWN = 99
} udsk_status;

UDSK_API const char* udsk_status_name(udsk_status status);
UDSK_API const char* udsk_version(void);
UDSK_API void udsk_free(void* ptr);

/* ------------------------------------------------------------------ */
/* encoder                                                             */
/* ------------------------------------------------------------------ */

typedef enum udsk_rotation_kind {
    UDSK_ROTATION_UNIFDIAG = 0,
    UDSK_ROTATION_RANDOM_FIXED = 1,
    UDSK_ROTATION_IDENTITY = 2
} udsk_rotation_kind;

typedef struct udsk_encoder_config {
    size_t dim;
    size_t code_bits;
    udsk_rotation_kind rotation;
    uint64_t rotation_seed;       /* random_fixed only */
    uint64_t seed;                /* seeds the initial subspace basis */
    double beta;                  /* forgetting factor in (0, 1] */
    double tol;                   /* uniformization tolerance; <= 0 = default */
    size_t refresh_warmup;        /* refresh every sample up to this many */
    size_t refresh_interval;      /* then every this many samples */
    size_t reorthonormalize_every;
} udsk_encoder_config;

/* Fills defaults (beta 1, warmup 1000, interval 10, reorth 10000). */
UDSK_API void udsk_encoder_config_init(udsk_encoder_config* config);

typedef struct udsk_encoder udsk_encoder;

UDSK_API udsk_status udsk_encoder_create(const udsk_encoder_config* config,
                                         udsk_encoder** encoder_out);
UDSK_API udsk_status udsk_encoder_clone(const udsk_encoder* encoder, udsk_encoder** clone_out);
UDSK_API void udsk_encoder_destroy(udsk_encoder* encoder);

/* Consumes one stream sample and emits its code (code_out may be NULL).
 * code_out must hold udsk_encoder_code_words(encoder) words. */
UDSK_API udsk_status udsk_encoder_push(udsk_encoder* encoder, const double* x, size_t dim,
                                       uint64_t* code_out);

/* Encodes with frozen state; valid once at least one sample was pushed. */
UDSK_API udsk_status udsk_encoder_hash(const udsk_encoder* encoder, const double* x, size_t dim,
                                       uint64_t* code_out);

/* Recomputes the rotation from the tracked projected covariance now. */
UDSK_API udsk_status udsk_encoder_refresh_rotation(udsk_encoder* encoder);

UDSK_API size_t udsk_encoder_dim(const udsk_encoder* encoder);
UDSK_API size_t udsk_encoder_code_bits(const udsk_encoder* encoder);
UDSK_API size_t udsk_encoder_code_words(const udsk_encoder* encoder);
UDSK_API uint64_t udsk_encoder_count(const udsk_encoder* encoder);
UDSK_API size_t udsk_encoder_state_bytes(const udsk_encoder* encoder);

/* Copy-out state accessors; buffers are caller-owned with the given sizes. */
UDSK_API udsk_status udsk_encoder_mean(const udsk_encoder* encoder, double* out /* dim */);
UDSK_API udsk_status udsk_encoder_rotation(const udsk_encoder* encoder,
                                           double* out /* bits x bits */);
UDSK_API udsk_status udsk_encoder_covariance(const udsk_encoder* encoder,
                                             double* out /* bits x bits */);
UDSK_API udsk_status udsk_encoder_projection(const udsk_encoder* encoder,
                                             double* out /* bits x dim */);

/* ------------------------------------------------------------------ */
/* codes                                                               */
/* ------------------------------------------------------------------ */

UDSK_API udsk_status udsk_hamming(const uint64_t* a, const uint64_t* b, uint32_t bits,
                                  uint32_t* distance_out);

/* signs are exactly +1.0 / -1.0; words_out holds ceil(bits/64) words. */
UDSK_API udsk_status udsk_pack_signs(const double* signs, uint32_t bits, uint64_t* words_out);
UDSK_API udsk_status udsk_unpack_signs(const uint64_t* words, uint32_t bits, double* signs_out);

/* ------------------------------------------------------------------ */
/* rotations                                                           */
/* ------------------------------------------------------------------ */

/* Seeded Haar-ish random orthogonal matrix into out (n x n). */
UDSK_API udsk_status udsk_random_orthogonal(size_t n, uint64_t seed, double* out);

/* Rotates symmetric sigma (n x n) so its diagonal becomes uniformly
 * trace/n, in at most n-1 plane rotations. Outputs may be NULL when not
 * wanted. rotated == R sigma R^T. tol <= 0 selects the default. */
UDSK_API udsk_status udsk_uniformize_diagonal(const double* sigma, size_t n, double tol,
                                              double* rotation_out /* n x n */,
                                              double* rotated_out /* n x n */,
                                              size_t* rotations_used_out,
                                              double* residual_out);

/* ------------------------------------------------------------------ */
/* vector streams                                                      */
/* ------------------------------------------------------------------ */

typedef struct udsk_stream udsk_stream;

UDSK_API udsk_status udsk_stream_open_fvecs(const char* path, udsk_stream** stream_out);
UDSK_API udsk_status udsk_stream_open_csv(const char* path, udsk_stream** stream_out);

typedef struct udsk_synthetic_spec {
    size_t dim;
    size_t intrinsic_rank;
    double decay;          /* geometric eigenvalue ratio in (0, 1] */
    uint64_t count;        /* stream length */
    double noise;          /* isotropic noise standard deviation */
    uint64_t seed;
    size_t clusters;
    double cluster_spread; /* cluster center std dev relative to the axes */
} udsk_synthetic_spec;

UDSK_API void udsk_synthetic_spec_init(udsk_synthetic_spec* spec);
UDSK_API udsk_status udsk_stream_open_synthetic(const udsk_synthetic_spec* spec,
                                                udsk_stream** stream_out);

/* Reads the next vector into out (capacity floats). *has_value becomes 0 at
 * end of stream. Fails with UDSK_ERR_SIZE_MISMATCH when capacity is too
 * small for the record. */
UDSK_API udsk_status udsk_stream_next(udsk_stream* stream, double* out, size_t capacity,
                                      int* has_value);
UDSK_API size_t udsk_stream_dim(const udsk_stream* stream);
/* Known stream length, or 0 when the source does not announce one. */
UDSK_API uint64_t udsk_stream_size_hint(const udsk_stream* stream);
UDSK_API void udsk_stream_close(udsk_stream* stream);

/* ------------------------------------------------------------------ */
/* files                                                               */
/* ------------------------------------------------------------------ */

typedef struct udsk_fvecs_writer udsk_fvecs_writer;

UDSK_API udsk_status udsk_fvecs_writer_open(const char* path, udsk_fvecs_writer** writer_out);
UDSK_API udsk_status udsk_fvecs_writer_append(udsk_fvecs_writer* writer, const float* v,
                                              size_t dim);
/* Flushes, closes and frees the writer (also on failure). */
UDSK_API udsk_status udsk_fvecs_writer_close(udsk_fvecs_writer* writer);

typedef struct udsk_code_writer udsk_code_writer;

UDSK_API udsk_status udsk_code_writer_open(const char* path, uint32_t code_bits,
                                           udsk_code_writer** writer_out);
UDSK_API udsk_status udsk_code_writer_append(udsk_code_writer* writer, const uint64_t* words);
/* Patches the header count, closes and frees the writer. */
UDSK_API udsk_status udsk_code_writer_close(udsk_code_writer* writer);

/* Loads a whole code file; *words_out is one malloc'd block of
 * count * ceil(bits/64) words, released with udsk_free. */
UDSK_API udsk_status udsk_code_file_read(const char* path, uint32_t* bits_out,
                                         uint64_t* count_out, uint64_t** words_out);

/* ------------------------------------------------------------------ */
/* evaluation                                                          */
/* ------------------------------------------------------------------ */

typedef struct udsk_ground_truth udsk_ground_truth;

/* Euclidean ground truth: the threshold is the mean distance to the k-th
 * nearest training point (over queries, or over training points when
 * average_over_train is nonzero); a query's neighbors are the training
 * points within the threshold. self_ids (optional, length q, -1 = none)
 * exclude a query's own training index. */
UDSK_API udsk_status udsk_ground_truth_build(const double* train, size_t n, size_t dim,
                                             const double* queries, size_t q, size_t k,
                                             const int64_t* self_ids, int average_over_train,
                                             udsk_ground_truth** gt_out);
UDSK_API double udsk_ground_truth_threshold(const udsk_ground_truth* gt);
UDSK_API size_t udsk_ground_truth_neighbor_count(const udsk_ground_truth* gt, size_t query);
UDSK_API void udsk_ground_truth_destroy(udsk_ground_truth* gt);

/* Hamming-ranked retrieval quality. Codes are packed words, one code per
 * row. per_query_ap may be NULL; queries without true neighbors score 0
 * there and are excluded from the mean (scored_out tells how many count). */
UDSK_API udsk_status udsk_evaluate(const udsk_ground_truth* gt, const uint64_t* train_codes,
                                   size_t n, const uint64_t* query_codes, size_t q,
                                   uint32_t bits, double* map_out, double* per_query_ap,
                                   size_t* scored_out);

#ifdef __cplusplus
}
#endif

#endif /* UDSK_H */
