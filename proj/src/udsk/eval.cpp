#include "udsk/eval.hpp"

#include "udsk/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numeric>

namespace udsk {

namespace {

double squared_distance(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

/// Distance to the k-th nearest point of `points`, excluding index `skip`
/// (pass a value >= n to keep everything).
double kth_neighbor_distance(const Mat& points, const double* target, std::size_t k,
                             std::size_t skip, std::vector<double>& scratch) {
    scratch.clear();
    for (std::size_t j = 0; j < points.rows(); ++j) {
        if (j == skip) continue;
        scratch.push_back(squared_distance(target, points.row(j), points.cols()));
    }
    if (scratch.size() < k) fail(Status::too_few_points, "need more than k candidate points");
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end());
    return std::sqrt(scratch[k - 1]);
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

GroundTruth build_ground_truth(const Mat& train, const Mat& queries, std::size_t k,
                               std::span<const std::int64_t> self_ids,
                               ThresholdPopulation population) {
    const std::size_t n = train.rows();
    const std::size_t q = queries.rows();
    const std::size_t d = train.cols();
    if (queries.cols() != d) fail(Status::dimension_mismatch, "train/query dimensions differ");
    if (k == 0) fail(Status::bad_spec, "neighbor rank k must be positive");
    if (n <= k) fail(Status::too_few_points, "need more than k training points");
    if (!self_ids.empty() && self_ids.size() != q)
        fail(Status::size_mismatch, "self_ids length must equal the query count");
    if (!all_finite({train.data(), train.size()}) ||
        !all_finite({queries.data(), queries.size()}))
        fail(Status::non_finite_input, "data has non-finite entries");

    const auto self_of = [&](std::size_t qi) -> std::size_t {
        if (self_ids.empty() || self_ids[qi] < 0) return n;  // out of range = keep all
        return static_cast<std::size_t>(self_ids[qi]);
    };

    std::vector<double> scratch;
    scratch.reserve(n);

    GroundTruth gt;
    gt.train_size = n;

    double acc = 0.0;
    if (population == ThresholdPopulation::queries) {
        for (std::size_t qi = 0; qi < q; ++qi)
            acc += kth_neighbor_distance(train, queries.row(qi), k, self_of(qi), scratch);
        gt.threshold = q > 0 ? acc / static_cast<double>(q) : 0.0;
    } else {
        for (std::size_t t = 0; t < n; ++t)
            acc += kth_neighbor_distance(train, train.row(t), k, t, scratch);
        gt.threshold = acc / static_cast<double>(n);
    }

    gt.neighbor_sets.resize(q);
    for (std::size_t qi = 0; qi < q; ++qi) {
        const std::size_t skip = self_of(qi);
        auto& set = gt.neighbor_sets[qi];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == skip) continue;
            if (std::sqrt(squared_distance(queries.row(qi), train.row(j), d)) <= gt.threshold)
                set.push_back(static_cast<std::uint32_t>(j));
        }
    }
    return gt;
}

double average_precision(std::span<const std::uint8_t> relevance) {
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t pos = 0; pos < relevance.size(); ++pos) {
        if (relevance[pos]) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
        }
    }
    return hits > 0 ? sum / static_cast<double>(hits) : 0.0;
}

EvalReport evaluate(std::span<const BinaryCode> train_codes,
                    std::span<const BinaryCode> query_codes, const GroundTruth& gt,
                    const std::string& method) {
    const std::size_t n = train_codes.size();
    const std::size_t q = query_codes.size();
    if (n != gt.train_size) fail(Status::size_mismatch, "train codes vs ground truth size");
    if (q != gt.neighbor_sets.size()) fail(Status::size_mismatch, "query codes vs ground truth size");
    const std::uint32_t bits = n > 0 ? train_codes[0].length() : 0;
    for (const auto& code : train_codes)
        if (code.length() != bits) fail(Status::size_mismatch, "train code lengths differ");
    for (const auto& code : query_codes)
        if (code.length() != bits) fail(Status::size_mismatch, "query code lengths differ");

    EvalReport report;
    report.code_bits = bits;
    report.method = method;
    report.timestamp = utc_timestamp();
    report.per_query_ap.assign(q, 0.0);

    // (distance << 32) | index sorts by distance with ties broken by
    // ascending training index.
    std::vector<std::uint64_t> order(n);
    std::vector<std::uint8_t> relevant(n);
    std::vector<std::uint8_t> relevance(n);

    double total = 0.0;
    for (std::size_t qi = 0; qi < q; ++qi) {
        if (gt.neighbor_sets[qi].empty()) {
            ++report.n_skipped;
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint64_t dist = hamming_distance(query_codes[qi], train_codes[j]);
            order[j] = (dist << 32) | j;
        }
        std::sort(order.begin(), order.end());

        std::fill(relevant.begin(), relevant.end(), 0);
        for (std::uint32_t idx : gt.neighbor_sets[qi]) relevant[idx] = 1;
        for (std::size_t pos = 0; pos < n; ++pos)
            relevance[pos] = relevant[order[pos] & 0xffffffffu];

        const double ap = average_precision(relevance);
        report.per_query_ap[qi] = ap;
        total += ap;
        ++report.n_queries;
    }
    report.map = report.n_queries > 0 ? total / static_cast<double>(report.n_queries) : 0.0;
    return report;
}

std::string report_csv_row(const EvalReport& report) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",%u,%zu,%.17g", report.code_bits, report.n_queries,
                  report.map);
    return report.method + buf;
}

}  // namespace udsk
