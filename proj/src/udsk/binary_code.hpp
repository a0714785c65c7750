#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace udsk {

/// A c-bit code packed into 64-bit words, little-endian within each word:
/// component k lives at bit (k % 64) of word (k / 64). +1 maps to a set bit,
/// -1 to a clear bit. Bits past the length are always zero.
class BinaryCode {
public:
    BinaryCode() = default;
    explicit BinaryCode(std::uint32_t length)
        : length_(length), words_((length + 63) / 64, 0) {}

    /// Packs a vector whose entries must be exactly +1 or -1.
    static BinaryCode pack(std::span<const double> signs);

    /// Packs sign(v) componentwise with sign(0) = +1 (negative zero included).
    static BinaryCode from_signs_of(std::span<const double> v);

    /// The +/-1 vector this code encodes.
    std::vector<double> unpack() const;

    std::uint32_t length() const { return length_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }

    bool bit(std::uint32_t k) const { return (words_[k / 64] >> (k % 64)) & 1u; }
    void set_bit(std::uint32_t k, bool value) {
        const std::uint64_t mask = std::uint64_t(1) << (k % 64);
        if (value) words_[k / 64] |= mask;
        else words_[k / 64] &= ~mask;
    }

    bool operator==(const BinaryCode& other) const = default;

private:
    std::uint32_t length_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing bits. Lengths must match.
std::uint32_t hamming_distance(const BinaryCode& a, const BinaryCode& b);

/// Same, over raw packed words (the C API and code files carry these).
std::uint32_t hamming_distance_words(std::span<const std::uint64_t> a,
                                     std::span<const std::uint64_t> b);

}  // namespace udsk
