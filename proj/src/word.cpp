#include "pingcert/word.hpp"

#include "pingcert/errors.hpp"

namespace pingcert {

GeneratorSet::GeneratorSet(std::vector<Matrix> matrices) : mats_(std::move(matrices)) {
  if (mats_.empty()) throw InvalidInput("generating set is empty");
  dim_ = mats_.front().dim();
  for (const auto& m : mats_)
    if (m.dim() != dim_) throw InvalidInput("generators have different dimensions");
  inverse_.assign(mats_.size(), std::nullopt);
  symmetric_ = true;
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    if (!identity_ && mats_[i].is_identity()) identity_ = i;
    Matrix inv = mats_[i].inverse();
    for (std::size_t j = 0; j < mats_.size(); ++j)
      if (mats_[j] == inv) {
        inverse_[i] = j;
        break;
      }
    if (!inverse_[i]) symmetric_ = false;
  }
}

GeneratorSet GeneratorSet::conjugated(const Matrix& h) const {
  Matrix hi = h.inverse();
  std::vector<Matrix> out;
  out.reserve(mats_.size());
  for (const auto& m : mats_) out.push_back(h * m * hi);
  return GeneratorSet(std::move(out));
}

std::vector<Letter> normalize_letters(const GeneratorSet& set, std::vector<Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter l : letters) {
    if (l.gen >= set.size()) throw InvalidInput("word letter out of range");
    if (set.identity_index() && set[l.gen].is_identity()) continue;
    if (l.inverse) {
      if (auto j = set.inverse_index(l.gen)) l = {*j, false};
    }
    if (!out.empty()) {
      const Letter& p = out.back();
      bool cancels = (p.gen == l.gen && p.inverse != l.inverse) ||
                     (!p.inverse && !l.inverse && set.inverse_index(p.gen) == l.gen);
      if (cancels) {
        out.pop_back();
        continue;
      }
    }
    out.push_back(l);
  }
  return out;
}

GeneratorSetPtr make_generator_set(std::vector<Matrix> matrices) {
  return std::make_shared<const GeneratorSet>(std::move(matrices));
}

Word::Word(GeneratorSetPtr set) : set_(std::move(set)), value_(Matrix::identity(set_->dim())) {}

Word::Word(GeneratorSetPtr set, std::vector<Letter> letters)
    : set_(std::move(set)), letters_(normalize_letters(*set_, std::move(letters))), value_(Matrix::identity(set_->dim())) {
  for (const Letter& l : letters_) value_ = value_ * (l.inverse ? (*set_)[l.gen].inverse() : (*set_)[l.gen]);
}

Word Word::from_signed(GeneratorSetPtr set, const std::vector<long>& indices) {
  std::vector<Letter> letters;
  for (long k : indices) {
    if (k == 0) throw InvalidInput("word index 0 is not allowed");
    std::size_t g = static_cast<std::size_t>(k > 0 ? k : -k) - 1;
    letters.push_back({g, k < 0});
  }
  return Word(std::move(set), std::move(letters));
}

std::vector<long> Word::signed_indices() const {
  std::vector<long> out;
  for (const Letter& l : letters_) {
    long k = static_cast<long>(l.gen) + 1;
    out.push_back(l.inverse ? -k : k);
  }
  return out;
}

bool Word::positive() const {
  for (const Letter& l : letters_)
    if (l.inverse) return false;
  return true;
}

Word Word::operator*(const Word& other) const {
  std::vector<Letter> l = letters_;
  l.insert(l.end(), other.letters_.begin(), other.letters_.end());
  return Word(set_, std::move(l));
}

Word Word::inverse() const {
  std::vector<Letter> l;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) l.push_back({it->gen, !it->inverse});
  return Word(set_, std::move(l));
}

Word Word::power(long n) const {
  Word base = n < 0 ? inverse() : *this;
  Word out(set_);
  for (long k = 0; k < (n < 0 ? -n : n); ++k) out = out * base;
  return out;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (std::size_t k = 0; k < letters_.size(); ++k) {
    if (k) s += ' ';
    s += 'g' + std::to_string(letters_[k].gen + 1);
    if (letters_[k].inverse) s += "^-1";
  }
  return s;
}

bool Word::operator<(const Word& other) const {
  if (letters_.size() != other.letters_.size()) return letters_.size() < other.letters_.size();
  return letters_ < other.letters_;
}

}  // namespace pingcert
