#include "udsk/io.hpp"

#include "udsk/error.hpp"

#include <bit>
#include <cstring>
#include <sstream>

namespace udsk {

namespace {

constexpr char kCodesMagic[4] = {'U', 'D', 'S', 'K'};
constexpr std::uint32_t kCodesVersion = 1;

void put_u32le(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int k = 0; k < 4; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(buf, 4);
}

void put_u64le(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(buf, 8);
}

bool get_u32le(std::istream& in, std::uint32_t& v) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) return false;
    v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(buf[k]) << (8 * k);
    return true;
}

bool get_u64le(std::istream& in, std::uint64_t& v) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
    v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    return true;
}

}  // namespace

FvecsReader::FvecsReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
    if (!in_) fail(Status::io_failure, "cannot open " + path);
}

bool FvecsReader::next_floats(std::vector<float>& out) {
    std::uint32_t raw_dim = 0;
    in_.peek();
    if (in_.eof()) return false;
    if (!get_u32le(in_, raw_dim)) {
        if (in_.gcount() == 0 && in_.eof()) return false;
        fail(Status::truncated_record, path_ + ": record header cut short");
    }
    const std::int32_t signed_dim = static_cast<std::int32_t>(raw_dim);
    if (signed_dim <= 0)
        fail(Status::negative_dimension,
             path_ + ": record dimension " + std::to_string(signed_dim));
    const std::size_t d = static_cast<std::size_t>(signed_dim);
    if (dim_ == 0) dim_ = d;
    else if (d != dim_)
        fail(Status::inconsistent_dimension,
             path_ + ": record dimension " + std::to_string(d) + " != " + std::to_string(dim_));

    out.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::uint32_t bits = 0;
        if (!get_u32le(in_, bits)) fail(Status::truncated_record, path_ + ": record cut short");
        out[j] = std::bit_cast<float>(bits);
    }
    return true;
}

bool FvecsReader::next(Vec& out) {
    if (!next_floats(record_)) return false;
    out.assign(record_.begin(), record_.end());
    return true;
}

FvecsWriter::FvecsWriter(const std::string& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) fail(Status::io_failure, "cannot open " + path + " for writing");
}

FvecsWriter::~FvecsWriter() {
    if (out_.is_open()) out_.close();
}

void FvecsWriter::append(std::span<const float> v) {
    if (v.empty()) fail(Status::negative_dimension, path_ + ": cannot write a 0-d vector");
    put_u32le(out_, static_cast<std::uint32_t>(v.size()));
    for (float x : v) put_u32le(out_, std::bit_cast<std::uint32_t>(x));
    if (!out_) fail(Status::io_failure, "write to " + path_ + " failed");
}

void FvecsWriter::append(std::span<const double> v) {
    std::vector<float> narrow(v.begin(), v.end());
    append(std::span<const float>(narrow));
}

void FvecsWriter::close() {
    out_.flush();
    out_.close();
    if (out_.fail()) fail(Status::io_failure, "closing " + path_ + " failed");
}

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
    if (!in_) fail(Status::io_failure, "cannot open " + path);
}

bool CsvReader::next(Vec& out) {
    while (std::getline(in_, line_)) {
        if (line_.empty()) continue;
        out.clear();
        std::stringstream row(line_);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                fail(Status::io_failure, path_ + ": cannot parse '" + cell + "'");
            }
        }
        if (out.empty()) fail(Status::io_failure, path_ + ": empty row");
        if (dim_ == 0) dim_ = out.size();
        else if (out.size() != dim_)
            fail(Status::inconsistent_dimension, path_ + ": ragged row");
        return true;
    }
    return false;
}

CodesWriter::CodesWriter(const std::string& path, std::uint32_t code_bits)
    : out_(path, std::ios::binary | std::ios::in | std::ios::out | std::ios::trunc),
      path_(path),
      code_bits_(code_bits) {
    if (!out_) fail(Status::io_failure, "cannot open " + path + " for writing");
    if (code_bits == 0) fail(Status::bad_dimensions, "code bits must be positive");
    out_.write(kCodesMagic, 4);
    put_u32le(out_, kCodesVersion);
    put_u32le(out_, code_bits_);
    put_u64le(out_, 0);  // count, patched on close
}

CodesWriter::~CodesWriter() {
    if (open_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void CodesWriter::append(const BinaryCode& code) {
    if (code.length() != code_bits_) fail(Status::length_mismatch, "code length mismatch");
    append_words(code.words());
}

void CodesWriter::append_words(std::span<const std::uint64_t> words) {
    const std::size_t expected = (code_bits_ + 63) / 64;
    if (words.size() != expected) fail(Status::length_mismatch, "word count mismatch");
    for (std::uint64_t w : words) put_u64le(out_, w);
    if (!out_) fail(Status::io_failure, "write to " + path_ + " failed");
    ++count_;
}

void CodesWriter::close() {
    if (!open_) return;
    open_ = false;
    out_.seekp(12);  // magic + version + bits
    put_u64le(out_, count_);
    out_.flush();
    out_.close();
    if (out_.fail()) fail(Status::io_failure, "closing " + path_ + " failed");
}

CodesFile read_codes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Status::io_failure, "cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kCodesMagic, 4) != 0)
        fail(Status::io_failure, path + ": not a code file");
    std::uint32_t version = 0;
    std::uint32_t bits = 0;
    std::uint64_t count = 0;
    if (!get_u32le(in, version) || !get_u32le(in, bits) || !get_u64le(in, count))
        fail(Status::truncated_record, path + ": header cut short");
    if (version != kCodesVersion)
        fail(Status::io_failure, path + ": unsupported version " + std::to_string(version));
    if (bits == 0) fail(Status::io_failure, path + ": zero code bits");

    CodesFile file;
    file.code_bits = bits;
    file.codes.reserve(count);
    const std::size_t words_per_code = (bits + 63) / 64;
    for (std::uint64_t r = 0; r < count; ++r) {
        BinaryCode code(bits);
        for (std::size_t w = 0; w < words_per_code; ++w) {
            std::uint64_t word = 0;
            if (!get_u64le(in, word)) fail(Status::truncated_record, path + ": codes cut short");
            for (std::uint32_t b = 0; b < 64; ++b) {
                const std::uint32_t k = static_cast<std::uint32_t>(w * 64 + b);
                if (k < bits && ((word >> b) & 1u)) code.set_bit(k, true);
            }
        }
        file.codes.push_back(std::move(code));
    }
    return file;
}

Mat read_all(VectorStream& stream) {
    std::vector<Vec> rows;
    Vec v;
    while (stream.next(v)) rows.push_back(v);
    if (rows.empty()) return Mat();
    Mat out(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != out.cols())
            fail(Status::inconsistent_dimension, "stream yielded ragged rows");
        std::copy(rows[i].begin(), rows[i].end(), out.row(i));
    }
    return out;
}

std::unique_ptr<VectorStream> open_fvecs(const std::string& path) {
    return std::make_unique<FvecsReader>(path);
}

std::unique_ptr<VectorStream> open_csv(const std::string& path) {
    return std::make_unique<CsvReader>(path);
}

}  // namespace udsk
