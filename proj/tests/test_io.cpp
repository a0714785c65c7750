#include "udsk/io.hpp"

#include "support/oracles.hpp"
#include "udsk/error.hpp"
#include "udsk/rng.hpp"
#include "udsk/synthetic.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using udsk::Mat;
using udsk::Vec;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() /
                ("udsk_test_" + std::to_string(::getpid()) + "_" + name))
                   .string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

void write_bytes(const std::string& path, std::initializer_list<unsigned char> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (unsigned char b : bytes) out.put(static_cast<char>(b));
}

}  // namespace

TEST_CASE("fvecs: empty file is an empty stream") {
    TempFile tmp("empty.fvecs");
    write_bytes(tmp.path, {});
    udsk::FvecsReader reader(tmp.path);
    Vec v;
    CHECK(!reader.next(v));
    CHECK(reader.dim() == 0);
}

TEST_CASE("fvecs: byte-level layout of a single record") {
    TempFile tmp("one.fvecs");
    write_bytes(tmp.path, {0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3f});
    udsk::FvecsReader reader(tmp.path);
    Vec v;
    REQUIRE(reader.next(v));
    CHECK(v == Vec{1.0});
    CHECK(reader.dim() == 1);
    CHECK(!reader.next(v));
}

TEST_CASE("fvecs: write/read round trip is bit exact") {
    TempFile tmp("roundtrip.fvecs");
    udsk::Rng rng(15);
    std::vector<std::vector<float>> vectors(100, std::vector<float>(12));
    for (auto& v : vectors)
        for (auto& x : v) x = static_cast<float>(rng.gaussian());

    {
        udsk::FvecsWriter writer(tmp.path);
        for (const auto& v : vectors) writer.append(std::span<const float>(v));
        writer.close();
    }
    udsk::FvecsReader reader(tmp.path);
    std::vector<float> record;
    for (const auto& expected : vectors) {
        REQUIRE(reader.next_floats(record));
        CHECK(record == expected);  // exact float equality
    }
    CHECK(!reader.next_floats(record));
}

TEST_CASE("fvecs: error paths") {
    TempFile truncated_header("trunc1.fvecs");
    write_bytes(truncated_header.path, {0x02, 0x00});
    TempFile truncated_body("trunc2.fvecs");
    write_bytes(truncated_body.path, {0x02, 0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3f});
    TempFile negative("negative.fvecs");
    write_bytes(negative.path, {0xff, 0xff, 0xff, 0xff});
    TempFile ragged("ragged.fvecs");
    write_bytes(ragged.path, {0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3f,
                              0x02, 0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3f,
                              0x00, 0x00, 0x80, 0x3f});

    const auto status_of = [](const std::string& path) {
        udsk::FvecsReader reader(path);
        Vec v;
        try {
            while (reader.next(v)) {
            }
        } catch (const udsk::Error& e) {
            return e.status();
        }
        return udsk::Status::ok;
    };
    CHECK(status_of(truncated_header.path) == udsk::Status::truncated_record);
    CHECK(status_of(truncated_body.path) == udsk::Status::truncated_record);
    CHECK(status_of(negative.path) == udsk::Status::negative_dimension);
    CHECK(status_of(ragged.path) == udsk::Status::inconsistent_dimension);

    CHECK_THROWS_AS(udsk::FvecsReader("/nonexistent/file.fvecs"), udsk::Error);

    TempFile w("zero.fvecs");
    udsk::FvecsWriter writer(w.path);
    CHECK_THROWS_AS(writer.append(std::span<const float>{}), udsk::Error);
}

TEST_CASE("csv: rows and ragged detection") {
    TempFile tmp("data.csv");
    {
        std::ofstream out(tmp.path);
        out << "1.5,2,-3\n\n0.25,1e3,4\n";
    }
    udsk::CsvReader reader(tmp.path);
    Vec v;
    REQUIRE(reader.next(v));
    CHECK(v == Vec{1.5, 2.0, -3.0});
    REQUIRE(reader.next(v));
    CHECK(v == Vec{0.25, 1000.0, 4.0});
    CHECK(!reader.next(v));

    TempFile bad("ragged.csv");
    {
        std::ofstream out(bad.path);
        out << "1,2\n3\n";
    }
    udsk::CsvReader ragged(bad.path);
    REQUIRE(ragged.next(v));
    CHECK_THROWS_AS((void)ragged.next(v), udsk::Error);
}

TEST_CASE("codes file: header layout and round trip") {
    TempFile tmp("codes.udsk");
    udsk::Rng rng(21);
    std::vector<udsk::BinaryCode> codes;
    for (int i = 0; i < 10; ++i) {
        udsk::BinaryCode code(65);
        for (std::uint32_t k = 0; k < 65; ++k) code.set_bit(k, rng.next_u64() & 1);
        codes.push_back(code);
    }
    {
        udsk::CodesWriter writer(tmp.path, 65);
        for (const auto& code : codes) writer.append(code);
        writer.close();
    }

    // Header bytes: magic, version 1, bits 65, count 10, little-endian.
    std::ifstream in(tmp.path, std::ios::binary);
    unsigned char header[20];
    REQUIRE(in.read(reinterpret_cast<char*>(header), 20));
    CHECK(header[0] == 'U');
    CHECK(header[1] == 'D');
    CHECK(header[2] == 'S');
    CHECK(header[3] == 'K');
    CHECK(header[4] == 1);
    CHECK(header[8] == 65);
    CHECK(header[12] == 10);
    std::filesystem::path p(tmp.path);
    CHECK(std::filesystem::file_size(p) == 20 + 10 * 2 * 8);

    const udsk::CodesFile file = udsk::read_codes(tmp.path);
    CHECK(file.code_bits == 65);
    REQUIRE(file.codes.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(file.codes[i] == codes[i]);
}

TEST_CASE("codes file: corrupt inputs") {
    TempFile bad_magic("badmagic.udsk");
    write_bytes(bad_magic.path, {'X', 'X', 'X', 'X', 1, 0, 0, 0, 8, 0, 0, 0,
                                 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS((void)udsk::read_codes(bad_magic.path), udsk::Error);

    TempFile short_file("short.udsk");
    write_bytes(short_file.path, {'U', 'D', 'S', 'K', 1, 0, 0, 0, 8, 0, 0, 0,
                                  2, 0, 0, 0, 0, 0, 0, 0, /* one byte of codes */ 5});
    CHECK_THROWS_AS((void)udsk::read_codes(short_file.path), udsk::Error);
}

TEST_CASE("synthetic: noiseless full-variance stream stays in the subspace") {
    udsk::SyntheticSpec spec;
    spec.dim = 8;
    spec.intrinsic_rank = 2;
    spec.decay = 1.0;
    spec.noise = 0.0;
    spec.count = 2000;
    spec.seed = 5;
    spec.clusters = 1;
    spec.cluster_spread = 0.0;
    udsk::SyntheticStream stream(spec);
    const Mat data = udsk::read_all(stream);
    REQUIRE(data.rows() == 2000);

    const auto eig = oracle::jacobi_eigh(oracle::sample_covariance(data));
    CHECK(eig.values[0] > 0.5);
    CHECK(eig.values[1] > 0.5);
    for (std::size_t i = 2; i < 8; ++i) CHECK(std::abs(eig.values[i]) < 1e-12);
}

TEST_CASE("synthetic: eigenvalue profile matches the spec") {
    udsk::SyntheticSpec spec;
    spec.dim = 8;
    spec.intrinsic_rank = 4;
    spec.decay = 0.5;
    spec.noise = 0.0;
    spec.count = 100000;
    spec.seed = 10;
    spec.clusters = 1;
    spec.cluster_spread = 0.0;
    udsk::SyntheticStream stream(spec);
    const Mat data = udsk::read_all(stream);

    const auto eig = oracle::jacobi_eigh(oracle::sample_covariance(data));
    const double expected[] = {1.0, 0.5, 0.25, 0.125};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(eig.values[i] - expected[i]) <= 0.05 * expected[i]);
}

TEST_CASE("synthetic: deterministic per seed, validated spec") {
    udsk::SyntheticSpec spec;
    spec.dim = 6;
    spec.intrinsic_rank = 3;
    spec.count = 50;
    spec.seed = 77;
    spec.clusters = 3;
    udsk::SyntheticStream a(spec);
    udsk::SyntheticStream b(spec);
    Vec va, vb;
    while (a.next(va)) {
        REQUIRE(b.next(vb));
        CHECK(va == vb);
    }
    CHECK(!b.next(vb));
    CHECK(a.size_hint() == 50);

    udsk::SyntheticSpec bad = spec;
    bad.intrinsic_rank = 9;
    CHECK_THROWS_AS(udsk::SyntheticStream{bad}, udsk::Error);
    bad = spec;
    bad.decay = 0.0;
    CHECK_THROWS_AS(udsk::SyntheticStream{bad}, udsk::Error);
    bad = spec;
    bad.clusters = 0;
    CHECK_THROWS_AS(udsk::SyntheticStream{bad}, udsk::Error);
    bad = spec;
    bad.noise = -1.0;
    CHECK_THROWS_AS(udsk::SyntheticStream{bad}, udsk::Error);
}
