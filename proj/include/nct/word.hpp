#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "nct/ring.hpp"

namespace nct {

/// Word in letters 1..15 of length at most 15, packed into 64 bits.
/// The packed order is length first, then lexicographic.
class Word {
 public:
  static constexpr int kMaxLength = 15;
  static constexpr int kMaxLetter = 15;

  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(const std::vector<int>& letters);
  static Word letter(int k);

  int size() const { return static_cast<int>(bits_ >> 60); }
  bool empty() const { return size() == 0; }
  int operator[](int i) const { return static_cast<int>((bits_ >> (56 - 4 * i)) & 0xFu); }

  void push_back(int letter);
  Word concat(const Word& other) const;
  Word prefix(int length) const;
  Word suffix(int from) const;
  Word without(int position) const;
  /// Replaces the letter at `position` by `w`.
  Word splice(int position, const Word& w) const;

  std::vector<int> letters() const;
  std::string str() const;
  std::uint64_t key() const { return bits_; }

  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

 private:
  static constexpr std::uint64_t kLetterMask = (std::uint64_t{1} << 60) - 1;
  std::uint64_t letter_bits() const { return bits_ & kLetterMask; }
  static Word from_bits(int size, std::uint64_t letter_bits);

  std::uint64_t bits_ = 0;
};

/// Finite Q-linear combination of words.
using LinearWords = std::map<Word, Rational>;

void add_to(LinearWords& target, const Word& w, const Rational& c);
void add_to(LinearWords& target, const LinearWords& source, const Rational& scale = 1);
LinearWords multiply(const LinearWords& a, const LinearWords& b, int max_length = Word::kMaxLength);

/// Exterior monomial dx_S encoded as a bit set; bit i-1 stands for dx_i.
using WedgeMask = std::uint32_t;

int wedge_degree(WedgeMask s);
/// Sign of dx_S ^ dx_T relative to dx_{S u T}; 0 when S and T overlap.
int wedge_sign(WedgeMask s, WedgeMask t);
std::vector<int> wedge_indices(WedgeMask s);
WedgeMask wedge_from_indices(const std::vector<int>& indices);

}  // namespace nct
