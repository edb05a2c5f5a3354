#include "lognet/bitvec.h"

#include <stdexcept>

namespace lognet {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_((size + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
  trim();
}

BitVector BitVector::from_bits(std::span<const std::uint8_t> bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::invalid_argument("bit value must be 0 or 1");
    v.set(i, bits[i] != 0);
  }
  return v;
}

BitVector BitVector::from_string(const std::string& bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    v.set(i, bits[i] == '1');
  }
  return v;
}

void BitVector::set(std::size_t i, bool value) {
  const Word mask = Word{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

bool BitVector::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  return get(i);
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

void BitVector::trim() {
  const std::size_t tail = size_ % kWordBits;
  if (tail != 0 && !words_.empty()) words_.back() &= (Word{1} << tail) - 1;
}

BitVector BitVector::operator~() const {
  BitVector out = *this;
  for (Word& w : out.words_) w = ~w;
  out.trim();
  return out;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit vector length mismatch");
  std::size_t total = 0;
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i)
    total += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return total;
}

BitVector select(const BitVector& v, std::span<const std::size_t> indices) {
  BitVector out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) out.set(i, v.at(indices[i]));
  return out;
}

}  // namespace lognet
