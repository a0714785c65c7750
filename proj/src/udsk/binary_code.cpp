#include "udsk/binary_code.hpp"

#include "udsk/error.hpp"

#include <bit>
#include <string>

namespace udsk {

BinaryCode BinaryCode::pack(std::span<const double> signs) {
    BinaryCode code(static_cast<std::uint32_t>(signs.size()));
    for (std::uint32_t k = 0; k < signs.size(); ++k) {
        if (signs[k] == 1.0) code.set_bit(k, true);
        else if (signs[k] != -1.0)
            fail(Status::bad_sign_value,
                 "component " + std::to_string(k) + " is " + std::to_string(signs[k]));
    }
    return code;
}

BinaryCode BinaryCode::from_signs_of(std::span<const double> v) {
    BinaryCode code(static_cast<std::uint32_t>(v.size()));
    for (std::uint32_t k = 0; k < v.size(); ++k) {
        if (v[k] >= 0.0) code.set_bit(k, true);  // >= catches -0.0 as well
    }
    return code;
}

std::vector<double> BinaryCode::unpack() const {
    std::vector<double> signs(length_);
    for (std::uint32_t k = 0; k < length_; ++k) signs[k] = bit(k) ? 1.0 : -1.0;
    return signs;
}

std::uint32_t hamming_distance(const BinaryCode& a, const BinaryCode& b) {
    if (a.length() != b.length()) fail(Status::length_mismatch, "code lengths differ");
    return hamming_distance_words(a.words(), b.words());
}

std::uint32_t hamming_distance_words(std::span<const std::uint64_t> a,
                                     std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) fail(Status::length_mismatch, "word counts differ");
    std::uint32_t count = 0;
    for (std::size_t w = 0; w < a.size(); ++w) count += std::popcount(a[w] ^ b[w]);
    return count;
}

}  // namespace udsk
