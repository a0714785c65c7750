#pragma once

#include "udsk/binary_code.hpp"
#include "udsk/linalg.hpp"

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace udsk {

/// A one-pass source of fixed-dimension vectors. Readers hold one record at
/// a time; the order of yielded vectors is deterministic.
class VectorStream {
public:
    virtual ~VectorStream() = default;

    /// Fills `out` with the next vector; returns false at end of stream.
    virtual bool next(Vec& out) = 0;

    /// Vector dimension; 0 when not yet known (file streams before the
    /// first record).
    virtual std::size_t dim() const = 0;

    virtual std::optional<std::uint64_t> size_hint() const { return std::nullopt; }
};

/// TEXMEX fvecs: per record a 4-byte little-endian signed dimension followed
/// by that many 4-byte little-endian IEEE-754 single floats.
class FvecsReader : public VectorStream {
public:
    explicit FvecsReader(const std::string& path);

    bool next(Vec& out) override;
    bool next_floats(std::vector<float>& out);
    std::size_t dim() const override { return dim_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t dim_ = 0;
    std::vector<float> record_;
};

class FvecsWriter {
public:
    explicit FvecsWriter(const std::string& path);
    ~FvecsWriter();

    void append(std::span<const float> v);
    void append(std::span<const double> v);  // narrowing convenience
    void close();

private:
    std::ofstream out_;
    std::string path_;
};

/// Headerless comma-separated float rows.
class CsvReader : public VectorStream {
public:
    explicit CsvReader(const std::string& path);

    bool next(Vec& out) override;
    std::size_t dim() const override { return dim_; }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t dim_ = 0;
    std::string line_;
};

/// Packed code file: magic "UDSK", u32 version, u32 code bits, u64 count,
/// all little-endian, then ceil(bits/64) u64 words per code.
class CodesWriter {
public:
    CodesWriter(const std::string& path, std::uint32_t code_bits);
    ~CodesWriter();

    void append(const BinaryCode& code);
    void append_words(std::span<const std::uint64_t> words);

    /// Patches the header count and closes the file.
    void close();

    std::uint64_t count() const { return count_; }
    std::uint32_t code_bits() const { return code_bits_; }
    std::size_t words_per_code() const { return (code_bits_ + 63) / 64; }

private:
    std::fstream out_;
    std::string path_;
    std::uint32_t code_bits_;
    std::uint64_t count_ = 0;
    bool open_ = true;
};

struct CodesFile {
    std::uint32_t code_bits = 0;
    std::vector<BinaryCode> codes;
};

CodesFile read_codes(const std::string& path);

/// Drains a stream into a row-major matrix.
Mat read_all(VectorStream& stream);

std::unique_ptr<VectorStream> open_fvecs(const std::string& path);
std::unique_ptr<VectorStream> open_csv(const std::string& path);

}  // namespace udsk
