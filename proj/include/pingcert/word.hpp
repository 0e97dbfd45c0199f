#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pingcert/matrix.hpp"

namespace pingcert {

// Finite generating set. Flags are computed exactly on construction.
class GeneratorSet {
 public:
  // Throws InvalidInput on an empty list or mixed dimensions.
  explicit GeneratorSet(std::vector<Matrix> matrices);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return mats_.size(); }
  const Matrix& operator[](std::size_t i) const { return mats_[i]; }
  const std::vector<Matrix>& matrices() const { return mats_; }
  bool symmetric() const { return symmetric_; }
  bool contains_identity() const { return identity_.has_value(); }
  std::optional<std::size_t> identity_index() const { return identity_; }
  // Index of the generator equal to the inverse of generator i, if any.
  std::optional<std::size_t> inverse_index(std::size_t i) const { return inverse_[i]; }

  // Same set with every matrix replaced by h g h^-1.
  GeneratorSet conjugated(const Matrix& h) const;

 private:
  std::size_t dim_ = 0;
  std::vector<Matrix> mats_;
  std::vector<std::optional<std::size_t>> inverse_;
  std::optional<std::size_t> identity_;
  bool symmetric_ = false;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;
GeneratorSetPtr make_generator_set(std::vector<Matrix> matrices);

struct Letter {
  std::size_t gen = 0;
  bool inverse = false;
  auto operator<=>(const Letter&) const = default;
};

// A word over the generators together with its exact value. Words are kept
// normalized: identity letters dropped, inverse letters replaced by the
// inverse generator when the set contains it, and freely reduced.
class Word {
 public:
  explicit Word(GeneratorSetPtr set);  // empty word
  Word(GeneratorSetPtr set, std::vector<Letter> letters);
  // Signed 1-based indices: +k is generator k-1, -k its inverse.
  static Word from_signed(GeneratorSetPtr set, const std::vector<long>& indices);

  const GeneratorSetPtr& generators() const { return set_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  const Matrix& matrix() const { return value_; }
  std::vector<long> signed_indices() const;
  // True when every letter is a generator (no formal inverses): the word lies in Sigma^length.
  bool positive() const;

  Word operator*(const Word& other) const;
  Word inverse() const;
  Word power(long n) const;

  std::string to_string() const;
  // Shortlex order.
  bool operator<(const Word& other) const;
  bool operator==(const Word& other) const { return letters_ == other.letters_; }

 private:
  GeneratorSetPtr set_;
  std::vector<Letter> letters_;
  Matrix value_;
};

std::vector<Letter> normalize_letters(const GeneratorSet& set, std::vector<Letter> letters);

}  // namespace pingcert
