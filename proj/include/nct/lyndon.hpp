#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nct/word.hpp"

namespace nct {

struct LyndonWord {
  Word word;
  /// Standard factorization (u, v); empty for single letters.
  std::optional<std::pair<Word, Word>> factorization;
};

bool is_lyndon(const Word& w);
/// All Lyndon words over letters 1..n of length <= max_length, ordered by (length, lex).
std::vector<LyndonWord> enumerate_lyndon(int n, int max_length);
/// w = uv with v the longest proper Lyndon suffix.
std::pair<Word, Word> standard_factorization(const Word& w);
/// Expansion of the standard bracketing P_w as a combination of words.
LinearWords bracketing(const Word& lyndon);

/// Ordered PBW monomial e1^a1 ... en^an [w1] ... [wk] with w1 <= ... <= wk Lyndon of length >= 2.
struct PbwMonomial {
  std::vector<int> letter_exponents;
  std::vector<Word> brackets;

  int degree() const;
  std::string str() const;
  LinearWords expand() const;

  auto operator<=>(const PbwMonomial&) const = default;
  bool operator==(const PbwMonomial&) const = default;
};

using PbwCombination = std::map<PbwMonomial, Rational>;

/// Straightening engine for the Lyndon PBW basis of T(V) in n letters up to a length bound.
/// Not thread-safe: it memoizes brackets and normal forms.
class PbwBasis {
 public:
  PbwBasis(int n, int max_length);

  int letters() const { return n_; }
  int max_length() const { return max_length_; }
  const std::vector<Word>& lie_basis() const { return basis_; }
  int index_of(const Word& lyndon) const;

  /// Coordinates of a Lie element in the Lyndon bracket basis.
  std::vector<std::pair<int, Rational>> lie_coordinates(LinearWords lie_element) const;
  PbwCombination normal_form(const Word& w);
  PbwCombination normal_form(const LinearWords& x);

 private:
  using Sequence = std::vector<int>;
  using SequenceCombination = std::map<Sequence, Rational>;

  const std::vector<std::pair<int, Rational>>& bracket(int a, int b);
  const SequenceCombination& straighten(const Sequence& seq);
  PbwMonomial to_monomial(const Sequence& sorted) const;

  int n_;
  int max_length_;
  std::vector<Word> basis_;
  std::map<Word, int> index_;
  std::vector<LinearWords> expansion_;
  std::map<std::pair<int, int>, std::vector<std::pair<int, Rational>>> bracket_cache_;
  std::map<Sequence, SequenceCombination> normal_cache_;
};

PbwCombination pbw_normal_form(const LinearWords& x, int n, int max_length);

}  // namespace nct
