// udsk command-line front end: encode vector streams into binary sketch
// files, score retrieval quality against Euclidean ground truth, and
// benchmark per-update cost. Talks to the library through the C API only.

#include "udsk.h"

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

void check(udsk_status status, const std::string& context) {
    if (status != UDSK_OK)
        throw std::runtime_error(context + ": " + udsk_status_name(status));
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct StreamHandle {
    udsk_stream* ptr = nullptr;
    ~StreamHandle() {
        if (ptr) udsk_stream_close(ptr);
    }
};

struct EncoderHandle {
    udsk_encoder* ptr = nullptr;
    ~EncoderHandle() {
        if (ptr) udsk_encoder_destroy(ptr);
    }
};

struct GroundTruthHandle {
    udsk_ground_truth* ptr = nullptr;
    ~GroundTruthHandle() {
        if (ptr) udsk_ground_truth_destroy(ptr);
    }
};

struct SourceOptions {
    std::string input;      // fvecs/csv path
    std::string format;     // "", "fvecs", "csv"
    std::string synthetic;  // k=v spec string
    std::uint64_t seed = 0;
};

udsk_synthetic_spec parse_synthetic_spec(const std::string& text, std::uint64_t default_seed) {
    udsk_synthetic_spec spec;
    udsk_synthetic_spec_init(&spec);
    spec.seed = default_seed;

    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("synthetic spec entry '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "d") spec.dim = std::stoull(value);
            else if (key == "r") spec.intrinsic_rank = std::stoull(value);
            else if (key == "n") spec.count = std::stoull(value);
            else if (key == "decay") spec.decay = std::stod(value);
            else if (key == "noise") spec.noise = std::stod(value);
            else if (key == "clusters") spec.clusters = std::stoull(value);
            else if (key == "spread") spec.cluster_spread = std::stod(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else throw std::runtime_error("unknown synthetic spec key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("cannot parse synthetic spec value '" + item + "'");
        }
    }
    if (spec.intrinsic_rank == 0) spec.intrinsic_rank = spec.dim;
    return spec;
}

void open_source(const SourceOptions& source, StreamHandle& stream) {
    if (!source.synthetic.empty()) {
        const udsk_synthetic_spec spec = parse_synthetic_spec(source.synthetic, source.seed);
        check(udsk_stream_open_synthetic(&spec, &stream.ptr), "opening synthetic stream");
        return;
    }
    if (source.input.empty()) throw std::runtime_error("need --input or --synthetic");
    std::string format = source.format;
    if (format.empty()) {
        const auto dot = source.input.rfind('.');
        const std::string ext = dot == std::string::npos ? "" : source.input.substr(dot + 1);
        format = ext == "csv" ? "csv" : "fvecs";
    }
    if (format == "fvecs")
        check(udsk_stream_open_fvecs(source.input.c_str(), &stream.ptr), "opening fvecs input");
    else if (format == "csv")
        check(udsk_stream_open_csv(source.input.c_str(), &stream.ptr), "opening csv input");
    else
        throw std::runtime_error("unknown input format '" + format + "'");
}

struct EncoderOptions {
    std::size_t bits = 32;
    std::string strategy = "unifdiag";
    double beta = 1.0;
    double tol = 0.0;
    std::size_t refresh = 10;
    std::size_t refresh_warmup = 1000;
    std::uint64_t seed = 0;
};

udsk_encoder_config make_encoder_config(const EncoderOptions& opts, std::size_t dim,
                                        std::uint64_t seed) {
    udsk_encoder_config config;
    udsk_encoder_config_init(&config);
    config.dim = dim;
    config.code_bits = opts.bits;
    if (opts.strategy == "unifdiag") config.rotation = UDSK_ROTATION_UNIFDIAG;
    else if (opts.strategy == "randrot") config.rotation = UDSK_ROTATION_RANDOM_FIXED;
    else if (opts.strategy == "identity") config.rotation = UDSK_ROTATION_IDENTITY;
    else throw std::runtime_error("unknown strategy '" + opts.strategy + "'");
    config.seed = seed;
    config.rotation_seed = seed ^ 0x5851f42d4c957f2dull;
    config.beta = opts.beta;
    config.tol = opts.tol;
    config.refresh_interval = opts.refresh;
    config.refresh_warmup = opts.refresh_warmup;
    return config;
}

/// "pow2" -> 1, 2, 4, ..., n; "final" -> n; otherwise a comma list. Pass
/// n = 0 (unknown length) to keep explicit entries unclamped.
std::vector<std::uint64_t> checkpoint_schedule(const std::string& spec, std::uint64_t n) {
    std::vector<std::uint64_t> points;
    if (spec == "pow2") {
        for (std::uint64_t t = 1; t < n; t *= 2) points.push_back(t);
        if (n > 0) points.push_back(n);
    } else if (spec == "final") {
        if (n > 0) points.push_back(n);
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const std::uint64_t t = std::stoull(item);
            if (t >= 1 && (n == 0 || t <= n)) points.push_back(t);
        }
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
    }
    return points;
}

/// Row-major in-memory dataset.
struct Dataset {
    std::size_t dim = 0;
    std::size_t count = 0;
    std::vector<double> data;

    const double* row(std::size_t i) const { return data.data() + i * dim; }
};

Dataset load_dataset(const SourceOptions& source) {
    StreamHandle stream;
    open_source(source, stream);

    Dataset ds;
    const std::uint64_t hint = udsk_stream_size_hint(stream.ptr);
    std::vector<double> buf(1);
    for (;;) {
        std::size_t dim = udsk_stream_dim(stream.ptr);
        if (dim == 0) dim = buf.size();  // unknown until the first record
        if (buf.size() < dim) buf.resize(dim);
        int has_value = 0;
        udsk_status status = udsk_stream_next(stream.ptr, buf.data(), buf.size(), &has_value);
        if (status == UDSK_ERR_SIZE_MISMATCH) {
            buf.resize(udsk_stream_dim(stream.ptr));
            status = udsk_stream_next(stream.ptr, buf.data(), buf.size(), &has_value);
        }
        check(status, "reading input");
        if (!has_value) break;
        const std::size_t dim_now = udsk_stream_dim(stream.ptr);
        if (ds.dim == 0) {
            ds.dim = dim_now;
            if (hint > 0) ds.data.reserve(hint * ds.dim);
        }
        ds.data.insert(ds.data.end(), buf.begin(), buf.begin() + ds.dim);
        ++ds.count;
    }
    if (ds.count == 0) throw std::runtime_error("input stream is empty");
    return ds;
}

class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }

    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

/* ------------------------------------------------------------------ */
/* encode                                                              */
/* ------------------------------------------------------------------ */

struct EncodeOptions {
    SourceOptions source;
    EncoderOptions encoder;
    std::string out;
    std::string state_out;
    std::string checkpoints = "none";
};

void write_state_snapshot(const std::string& path, const udsk_encoder* enc) {
    const std::size_t dim = udsk_encoder_dim(enc);
    const std::size_t bits = udsk_encoder_code_bits(enc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");

    const auto put_u64 = [&](std::uint64_t v) {
        char buf[8];
        for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
        out.write(buf, 8);
    };
    const auto put_f64 = [&](double v) {
        std::uint64_t bits_v;
        static_assert(sizeof(bits_v) == sizeof(v));
        std::memcpy(&bits_v, &v, 8);
        put_u64(bits_v);
    };
    const auto put_block = [&](const std::vector<double>& block) {
        for (double v : block) put_f64(v);
    };

    out.write("UDSS", 4);
    put_u64(1);  // version
    put_u64(dim);
    put_u64(bits);
    put_u64(udsk_encoder_count(enc));

    std::vector<double> block(dim);
    check(udsk_encoder_mean(enc, block.data()), "reading encoder mean");
    put_block(block);
    block.resize(bits * dim);
    check(udsk_encoder_projection(enc, block.data()), "reading encoder projection");
    put_block(block);
    block.resize(bits * bits);
    check(udsk_encoder_covariance(enc, block.data()), "reading encoder covariance");
    put_block(block);
    check(udsk_encoder_rotation(enc, block.data()), "reading encoder rotation");
    put_block(block);
    out.flush();
    if (!out) throw std::runtime_error("writing " + path + " failed");
}

int cmd_encode(const EncodeOptions& opts) {
    StreamHandle stream;
    open_source(opts.source, stream);

    EncoderHandle encoder;
    udsk_code_writer* writer = nullptr;
    std::vector<double> x;
    std::vector<std::uint64_t> code;
    std::uint64_t emitted = 0;

    const std::uint64_t hint = udsk_stream_size_hint(stream.ptr);
    std::vector<std::uint64_t> snapshots;
    if (opts.checkpoints != "none" && !opts.state_out.empty()) {
        if (hint == 0 && opts.checkpoints == "pow2")
            std::fprintf(stderr,
                         "warning: stream length unknown; pow2 snapshot schedule is empty "
                         "(pass explicit --checkpoints t1,t2,...)\n");
        snapshots = checkpoint_schedule(opts.checkpoints, hint);
    }
    std::size_t next_snapshot = 0;

    const auto start = std::chrono::steady_clock::now();
    for (;;) {
        if (x.empty()) x.resize(std::max<std::size_t>(udsk_stream_dim(stream.ptr), 1));
        int has_value = 0;
        udsk_status status = udsk_stream_next(stream.ptr, x.data(), x.size(), &has_value);
        if (status == UDSK_ERR_SIZE_MISMATCH) {
            x.resize(udsk_stream_dim(stream.ptr));
            status = udsk_stream_next(stream.ptr, x.data(), x.size(), &has_value);
        }
        check(status, "reading input");
        if (!has_value) break;

        if (!encoder.ptr) {
            const std::size_t dim = udsk_stream_dim(stream.ptr);
            x.resize(dim);
            const udsk_encoder_config config =
                make_encoder_config(opts.encoder, dim, opts.encoder.seed);
            check(udsk_encoder_create(&config, &encoder.ptr), "creating encoder");
            code.resize(udsk_encoder_code_words(encoder.ptr));
            check(udsk_code_writer_open(opts.out.c_str(),
                                        static_cast<std::uint32_t>(opts.encoder.bits), &writer),
                  "opening code file");
        }
        check(udsk_encoder_push(encoder.ptr, x.data(), x.size(), code.data()),
              "encoding sample");
        check(udsk_code_writer_append(writer, code.data()), "writing code");
        ++emitted;

        if (next_snapshot < snapshots.size() && emitted == snapshots[next_snapshot]) {
            write_state_snapshot(opts.state_out + ".t" + std::to_string(emitted) + ".udss",
                                 encoder.ptr);
            ++next_snapshot;
        }
    }
    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();

    if (writer) check(udsk_code_writer_close(writer), "closing code file");
    if (emitted == 0) throw std::runtime_error("input stream is empty");
    if (!opts.state_out.empty()) write_state_snapshot(opts.state_out, encoder.ptr);

    std::fprintf(stderr, "encoded %" PRIu64 " vectors in %.3f s (%.0f vectors/s)\n", emitted,
                 elapsed, elapsed > 0 ? static_cast<double>(emitted) / elapsed : 0.0);
    return 0;
}

/* ------------------------------------------------------------------ */
/* eval                                                                */
/* ------------------------------------------------------------------ */

struct EvalOptions {
    SourceOptions source;
    EncoderOptions encoder;
    std::size_t queries = 1000;
    std::size_t gt_k = 50;
    std::string gt_average = "queries";
    std::string checkpoints = "pow2";
    std::size_t partitions = 1;
    std::string out = "-";
    std::string per_query_ap;
};

int cmd_eval(const EvalOptions& opts) {
    const Dataset ds = load_dataset(opts.source);
    if (opts.queries >= ds.count)
        throw std::runtime_error("query count must be smaller than the dataset");
    const std::size_t n_train = ds.count - opts.queries;

    CsvSink sink(opts.out);
    sink.out() << "checkpoint_t,method,code_bits,n_queries,map\n";

    std::unique_ptr<CsvSink> ap_sink;
    if (!opts.per_query_ap.empty()) {
        ap_sink = std::make_unique<CsvSink>(opts.per_query_ap);
        ap_sink->out() << "partition,checkpoint_t,query,ap\n";
    }

    const std::size_t words = (opts.encoder.bits + 63) / 64;

    for (std::size_t partition = 0; partition < opts.partitions; ++partition) {
        const std::uint64_t seed_p = opts.encoder.seed + partition;

        // Seeded partial Fisher-Yates: the first `queries` entries of the
        // permutation become the query set.
        std::vector<std::uint32_t> perm(ds.count);
        std::iota(perm.begin(), perm.end(), 0u);
        std::uint64_t mix = seed_p ^ 0xd1b54a32d192ed03ull;
        for (std::size_t i = 0; i < opts.queries; ++i) {
            const std::size_t j = i + splitmix64(mix) % (ds.count - i);
            std::swap(perm[i], perm[j]);
        }
        std::vector<std::uint32_t> query_ids(perm.begin(), perm.begin() + opts.queries);
        std::vector<std::uint32_t> train_ids(perm.begin() + opts.queries, perm.end());
        std::sort(query_ids.begin(), query_ids.end());
        std::sort(train_ids.begin(), train_ids.end());

        std::vector<double> train(n_train * ds.dim);
        for (std::size_t i = 0; i < n_train; ++i)
            std::copy_n(ds.row(train_ids[i]), ds.dim, train.data() + i * ds.dim);
        std::vector<double> queries(opts.queries * ds.dim);
        for (std::size_t i = 0; i < opts.queries; ++i)
            std::copy_n(ds.row(query_ids[i]), ds.dim, queries.data() + i * ds.dim);

        GroundTruthHandle gt;
        check(udsk_ground_truth_build(train.data(), n_train, ds.dim, queries.data(),
                                      opts.queries, opts.gt_k, nullptr,
                                      opts.gt_average == "train" ? 1 : 0, &gt.ptr),
              "building ground truth");

        const udsk_encoder_config config =
            make_encoder_config(opts.encoder, ds.dim, seed_p);
        EncoderHandle encoder;
        check(udsk_encoder_create(&config, &encoder.ptr), "creating encoder");

        const std::vector<std::uint64_t> schedule =
            checkpoint_schedule(opts.checkpoints, n_train);
        std::size_t next_checkpoint = 0;

        std::vector<std::uint64_t> train_codes(n_train * words);
        std::vector<std::uint64_t> query_codes(opts.queries * words);
        std::vector<double> per_ap(opts.queries);

        for (std::size_t t = 0; t < n_train; ++t) {
            check(udsk_encoder_push(encoder.ptr, train.data() + t * ds.dim, ds.dim, nullptr),
                  "encoding sample");
            if (next_checkpoint >= schedule.size() || t + 1 != schedule[next_checkpoint])
                continue;
            ++next_checkpoint;

            EncoderHandle frozen;
            check(udsk_encoder_clone(encoder.ptr, &frozen.ptr), "cloning encoder");
            for (std::size_t i = 0; i < n_train; ++i)
                check(udsk_encoder_hash(frozen.ptr, train.data() + i * ds.dim, ds.dim,
                                        train_codes.data() + i * words),
                      "hashing train vector");
            for (std::size_t i = 0; i < opts.queries; ++i)
                check(udsk_encoder_hash(frozen.ptr, queries.data() + i * ds.dim, ds.dim,
                                        query_codes.data() + i * words),
                      "hashing query vector");

            double map = 0.0;
            std::size_t scored = 0;
            check(udsk_evaluate(gt.ptr, train_codes.data(), n_train, query_codes.data(),
                                opts.queries, static_cast<std::uint32_t>(opts.encoder.bits),
                                &map, per_ap.data(), &scored),
                  "evaluating codes");

            sink.out() << (t + 1) << ',' << opts.encoder.strategy << ',' << opts.encoder.bits
                       << ',' << scored << ',' << map << '\n';
            if (ap_sink) {
                for (std::size_t i = 0; i < opts.queries; ++i)
                    ap_sink->out() << partition << ',' << (t + 1) << ',' << i << ','
                                   << per_ap[i] << '\n';
            }
        }
    }
    sink.out().flush();
    return 0;
}

/* ------------------------------------------------------------------ */
/* bench                                                               */
/* ------------------------------------------------------------------ */

struct BenchOptions {
    std::string dims = "256,1024,4096";
    std::string bits = "8,32";
    std::size_t reps = 200;
    std::uint64_t seed = 0;
    std::string out = "-";
};

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    if (out.empty()) throw std::runtime_error("empty size list");
    return out;
}

int cmd_bench(const BenchOptions& opts) {
    CsvSink sink(opts.out);
    sink.out() << "d,c,ns_per_update\n";

    for (const std::size_t d : parse_size_list(opts.dims)) {
        for (const std::size_t c : parse_size_list(opts.bits)) {
            if (c >= d) continue;

            // A pool of realistic inputs, generated outside the timed loop.
            udsk_synthetic_spec spec;
            udsk_synthetic_spec_init(&spec);
            spec.dim = d;
            spec.intrinsic_rank = std::min<std::size_t>(d, 16);
            spec.decay = 0.9;
            spec.noise = 0.1;
            spec.count = 64;
            spec.seed = opts.seed + d * 131 + c;
            StreamHandle pool_stream;
            check(udsk_stream_open_synthetic(&spec, &pool_stream.ptr), "opening synthetic pool");
            std::vector<double> pool(spec.count * d);
            for (std::size_t i = 0; i < spec.count; ++i) {
                int has_value = 0;
                check(udsk_stream_next(pool_stream.ptr, pool.data() + i * d, d, &has_value),
                      "generating bench input");
            }

            EncoderOptions enc_opts;
            enc_opts.bits = c;
            enc_opts.seed = opts.seed;
            const udsk_encoder_config config = make_encoder_config(enc_opts, d, opts.seed);
            EncoderHandle encoder;
            check(udsk_encoder_create(&config, &encoder.ptr), "creating encoder");

            const std::size_t warmup = 32;
            for (std::size_t i = 0; i < warmup; ++i)
                check(udsk_encoder_push(encoder.ptr, pool.data() + (i % spec.count) * d, d,
                                        nullptr),
                      "bench warmup");

            // Best of three timed rounds.
            double best_ns = 0.0;
            for (int round = 0; round < 3; ++round) {
                const auto start = std::chrono::steady_clock::now();
                for (std::size_t i = 0; i < opts.reps; ++i)
                    check(udsk_encoder_push(encoder.ptr,
                                            pool.data() + (i % spec.count) * d, d, nullptr),
                          "bench update");
                const double ns = std::chrono::duration<double, std::nano>(
                                      std::chrono::steady_clock::now() - start)
                                      .count() /
                                  static_cast<double>(opts.reps);
                if (round == 0 || ns < best_ns) best_ns = ns;
            }
            sink.out() << d << ',' << c << ',' << best_ns << '\n';
        }
    }
    sink.out().flush();
    return 0;
}

void add_source_flags(CLI::App* cmd, SourceOptions& source) {
    cmd->add_option("--input", source.input, "fvecs or csv input file");
    cmd->add_option("--format", source.format, "input format: fvecs|csv (default: by extension)");
    cmd->add_option("--synthetic", source.synthetic,
                    "synthetic stream spec, e.g. d=64,r=16,n=10000,decay=0.9,noise=0.1,"
                    "clusters=4,spread=3");
}

void add_encoder_flags(CLI::App* cmd, EncoderOptions& enc) {
    cmd->add_option("--bits", enc.bits, "code length in bits")->check(CLI::PositiveNumber);
    cmd->add_option("--strategy", enc.strategy, "rotation strategy: unifdiag|randrot|identity");
    cmd->add_option("--beta", enc.beta, "forgetting factor in (0,1]");
    cmd->add_option("--tol", enc.tol, "uniformization tolerance (<=0: default)");
    cmd->add_option("--refresh", enc.refresh, "rotation refresh interval after warmup");
    cmd->add_option("--refresh-warmup", enc.refresh_warmup,
                    "refresh every sample up to this count");
    cmd->add_option("--seed", enc.seed, "seed for all randomness");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"udsk: streaming binary sketches for similarity search"};
    app.require_subcommand(1);

    EncodeOptions encode_opts;
    CLI::App* encode = app.add_subcommand("encode", "stream vectors into a packed code file");
    add_source_flags(encode, encode_opts.source);
    add_encoder_flags(encode, encode_opts.encoder);
    encode->add_option("--out", encode_opts.out, "output code file")->required();
    encode->add_option("--state-out", encode_opts.state_out, "encoder state snapshot file");
    encode->add_option("--checkpoints", encode_opts.checkpoints,
                       "snapshot schedule: none|pow2|final|t1,t2,... (needs --state-out)");

    EvalOptions eval_opts;
    CLI::App* evalc = app.add_subcommand("eval", "retrieval quality against Euclidean ground truth");
    add_source_flags(evalc, eval_opts.source);
    add_encoder_flags(evalc, eval_opts.encoder);
    evalc->add_option("--queries", eval_opts.queries, "held-out query count");
    evalc->add_option("--gt-k", eval_opts.gt_k, "ground-truth neighbor rank");
    evalc->add_option("--gt-average", eval_opts.gt_average,
                      "threshold averaged over: queries|train");
    evalc->add_option("--checkpoints", eval_opts.checkpoints,
                      "evaluation schedule: pow2|final|t1,t2,...");
    evalc->add_option("--partitions", eval_opts.partitions, "seeded train/query partitions");
    evalc->add_option("--out", eval_opts.out, "CSV output ('-' = stdout)");
    evalc->add_option("--per-query-ap", eval_opts.per_query_ap, "per-query AP CSV file");

    BenchOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "per-update timing across d and c");
    bench->add_option("--ds", bench_opts.dims, "comma list of input dimensions");
    bench->add_option("--cs", bench_opts.bits, "comma list of code lengths");
    bench->add_option("--reps", bench_opts.reps, "updates per timed round");
    bench->add_option("--seed", bench_opts.seed, "seed");
    bench->add_option("--out", bench_opts.out, "CSV output ('-' = stdout)");

    CLI11_PARSE(app, argc, argv);

    eval_opts.source.seed = eval_opts.encoder.seed;
    encode_opts.source.seed = encode_opts.encoder.seed;

    try {
        if (encode->parsed()) return cmd_encode(encode_opts);
        if (evalc->parsed()) return cmd_eval(eval_opts);
        if (bench->parsed()) return cmd_bench(bench_opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
