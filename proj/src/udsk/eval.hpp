#pragma once

#include "udsk/binary_code.hpp"
#include "udsk/linalg.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace udsk {

/// Which population the k-th nearest neighbor distance is averaged over to
/// form the threshold.
enum class ThresholdPopulation { queries, train };

/// Euclidean neighbor sets induced by thresholding at the average distance
/// to the k-th nearest neighbor.
struct GroundTruth {
    double threshold = 0.0;
    std::size_t train_size = 0;
    std::vector<std::vector<std::uint32_t>> neighbor_sets;  // per query, ascending indices
};

/// Builds ground truth from row-major train (n x d) and query (q x d) data.
/// self_ids, when nonempty, gives for each query its own index in train
/// (-1 for none); that training point is excluded from the query's k-NN
/// distance and neighbor set.
GroundTruth build_ground_truth(const Mat& train, const Mat& queries, std::size_t k,
                               std::span<const std::int64_t> self_ids = {},
                               ThresholdPopulation population = ThresholdPopulation::queries);

/// AP of a ranked 0/1 relevance list: mean over relevant positions of the
/// precision at that position. No relevant items gives 0.
double average_precision(std::span<const std::uint8_t> relevance);

struct EvalReport {
    double map = 0.0;
    std::vector<double> per_query_ap;  // one entry per query; unscored queries hold 0
    std::size_t n_queries = 0;         // queries scored (nonempty neighbor set)
    std::size_t n_skipped = 0;         // queries excluded for having no true neighbor
    std::uint32_t code_bits = 0;
    std::string method;
    std::string timestamp;
};

/// Ranks training codes by Hamming distance to each query code (ties by
/// ascending training index) and scores the ranking against the ground
/// truth. The mean skips queries with no true neighbors.
EvalReport evaluate(std::span<const BinaryCode> train_codes,
                    std::span<const BinaryCode> query_codes, const GroundTruth& gt,
                    const std::string& method = {});

/// "method,code_bits,n_queries,map"
std::string report_csv_row(const EvalReport& report);

}  // namespace udsk
