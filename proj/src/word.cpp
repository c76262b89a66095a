#include "nct/word.hpp"

#include <bit>
#include <stdexcept>

namespace nct {

Word::Word(std::initializer_list<int> letters) {
  for (int k : letters) push_back(k);
}

Word::Word(const std::vector<int>& letters) {
  for (int k : letters) push_back(k);
}

Word Word::letter(int k) { return Word{k}; }

Word Word::from_bits(int size, std::uint64_t letter_bits) {
  Word w;
  w.bits_ = (static_cast<std::uint64_t>(size) << 60) | (letter_bits & kLetterMask);
  return w;
}

void Word::push_back(int letter) {
  if (letter < 1 || letter > kMaxLetter) throw std::out_of_range("letter " + std::to_string(letter) + " out of range");
  int n = size();
  if (n >= kMaxLength) throw std::length_error("word longer than " + std::to_string(kMaxLength));
  bits_ = from_bits(n + 1, letter_bits() | (static_cast<std::uint64_t>(letter) << (56 - 4 * n))).bits_;
}

Word Word::concat(const Word& other) const {
  int a = size();
  int b = other.size();
  if (a + b > kMaxLength) throw std::length_error("word longer than " + std::to_string(kMaxLength));
  if (b == 0) return *this;
  return from_bits(a + b, letter_bits() | (other.letter_bits() >> (4 * a)));
}

Word Word::prefix(int length) const {
  if (length <= 0) return Word();
  if (length >= size()) return *this;
  std::uint64_t keep = kLetterMask & ~((std::uint64_t{1} << (60 - 4 * length)) - 1);
  return from_bits(length, letter_bits() & keep);
}

Word Word::suffix(int from) const {
  int n = size();
  if (from <= 0) return *this;
  if (from >= n) return Word();
  return from_bits(n - from, letter_bits() << (4 * from));
}

Word Word::without(int position) const { return prefix(position).concat(suffix(position + 1)); }

Word Word::splice(int position, const Word& w) const {
  return prefix(position).concat(w).concat(suffix(position + 1));
}

std::vector<int> Word::letters() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) out.push_back((*this)[i]);
  return out;
}

std::string Word::str() const {
  std::string out;
  for (int i = 0; i < size(); ++i) {
    int k = (*this)[i];
    if (k < 10)
      out.push_back(static_cast<char>('0' + k));
    else
      out += "(" + std::to_string(k) + ")";
  }
  return out;
}

void add_to(LinearWords& target, const Word& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = target.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) target.erase(it);
  }
}

void add_to(LinearWords& target, const LinearWords& source, const Rational& scale) {
  for (const auto& [w, c] : source) add_to(target, w, c * scale);
}

LinearWords multiply(const LinearWords& a, const LinearWords& b, int max_length) {
  LinearWords out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b)
      if (wa.size() + wb.size() <= max_length) add_to(out, wa.concat(wb), ca * cb);
  return out;
}

int wedge_degree(WedgeMask s) { return std::popcount(s); }

int wedge_sign(WedgeMask s, WedgeMask t) {
  if (s & t) return 0;
  int swaps = 0;
  for (WedgeMask rest = t; rest; rest &= rest - 1) {
    int bit = std::countr_zero(rest);
    swaps += std::popcount(s >> (bit + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

std::vector<int> wedge_indices(WedgeMask s) {
  std::vector<int> out;
  for (WedgeMask rest = s; rest; rest &= rest - 1) out.push_back(std::countr_zero(rest) + 1);
  return out;
}

WedgeMask wedge_from_indices(const std::vector<int>& indices) {
  WedgeMask s = 0;
  for (int i : indices) {
    if (i < 1 || i > 31) throw std::out_of_range("wedge index out of range");
    WedgeMask bit = WedgeMask{1} << (i - 1);
    if (s & bit) throw std::invalid_argument("repeated wedge index " + std::to_string(i));
    s |= bit;
  }
  return s;
}

}  // namespace nct
