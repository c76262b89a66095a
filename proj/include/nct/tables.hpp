#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nct/lyndon.hpp"
#include "nct/word.hpp"

namespace nct {

/// Precomputed PBW decompositions and homotopy images for one (n, d).
/// Instances are immutable once built and shared through chart_tables().
///
/// Two PBW coordinate systems are kept. The ordered one writes a word as a sum of
/// e1^a1...en^an * M with M a product of Lyndon brackets. The symmetric one uses the
/// symmetrization map S(Lie(V)) -> T(V), which intertwines tau with d_y (x) id and
/// commutes with GL(V); the homotopy is the Euler contraction in those coordinates.
class ChartTables {
 public:
  struct PbwTerm {
    Monomial letters;  // exponents of the ordered letter part
    int bracket_id;
    Rational coeff;
  };
  struct FormTerm {
    WedgeMask wedge;
    Word word;
    Rational coeff;
  };

  ChartTables(int n, int d);

  int letters() const { return n_; }
  int truncation() const { return d_; }

  const std::vector<PbwTerm>& decomposition(const Word& w) const;
  const std::vector<Word>& bracket_factors(int id) const { return brackets_[static_cast<std::size_t>(id)]; }
  const LinearWords& bracket_expansion(int id) const { return bracket_expansions_[static_cast<std::size_t>(id)]; }
  int bracket_id(const std::vector<Word>& factors) const;
  /// Ordered word e1^a1 ... en^an.
  static Word ordered_word(const Monomial& a, int n);

  /// Symmetric PBW coordinates of a word of length <= d - 1.
  const std::vector<PbwTerm>& symmetric_decomposition(const Word& w) const;
  /// Symmetrization of the multiset {letters} u {bracket factors}.
  static LinearWords symmetrize(const Monomial& letters, const std::vector<Word>& brackets, int n);

  /// Image of dx_S (x) w under the homotopy; empty when S is empty or |w| = d.
  const std::vector<FormTerm>& homotopy(WedgeMask s, const Word& w) const;

 private:
  int intern_bracket(const std::vector<Word>& factors);
  void build_symmetric(int degree, const std::vector<Word>& lie_basis);
  std::vector<FormTerm> compute_homotopy(WedgeMask s, const Word& w);

  int n_;
  int d_;
  std::map<Word, std::vector<PbwTerm>> pbw_;
  std::vector<std::vector<Word>> brackets_;
  std::vector<LinearWords> bracket_expansions_;
  std::map<std::vector<Word>, int> bracket_index_;
  std::map<Word, std::vector<PbwTerm>> symmetric_;
  std::map<std::pair<Monomial, int>, LinearWords> symmetrized_;
  std::map<std::pair<WedgeMask, Word>, std::vector<FormTerm>> homotopy_;
};

const ChartTables& chart_tables(int n, int d);

}  // namespace nct
