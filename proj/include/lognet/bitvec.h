#ifndef LOGNET_BITVEC_H_
#define LOGNET_BITVEC_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lognet {

// Fixed-length packed bit vector. Bits beyond size() are always zero, so
// word-wise comparisons and popcounts are exact.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  static BitVector from_bits(std::span<const std::uint8_t> bits);
  // Parses a string of '0'/'1' characters, first character is bit 0.
  static BitVector from_string(const std::string& bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value);
  bool at(std::size_t i) const;  // bounds-checked get

  std::size_t count() const;
  std::span<const Word> words() const { return words_; }
  std::span<Word> mutable_words() { return words_; }

  // Clears the unused high bits of the last word.
  void trim();

  BitVector operator~() const;
  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Number of positions where a and b differ. Throws std::invalid_argument on
// length mismatch.
std::size_t hamming(const BitVector& a, const BitVector& b);

// Keeps only the positions listed in `indices`, in order.
BitVector select(const BitVector& v, std::span<const std::size_t> indices);

}  // namespace lognet

#endif  // LOGNET_BITVEC_H_
