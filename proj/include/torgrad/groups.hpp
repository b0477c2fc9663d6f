#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace torgrad {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RelatorViolation : std::runtime_error {
  std::string relator;
  explicit RelatorViolation(const std::string& r)
      : std::runtime_error("relator does not map to the identity: " + r), relator(r) {}
};

struct OrderCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Letter {
  int gen = 0;
  int sign = 1;
  auto operator<=>(const Letter&) const = default;
};

class Word {
 public:
  Word() = default;
  static Word gen(int g, int sign = 1) { return Word({{g, sign}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word operator*(const Word& o) const;
  Word inverse() const;
  Word power(int k) const;
  auto operator<=>(const Word&) const = default;

  friend Word reduce_word(const std::vector<Letter>& raw);

 private:
  explicit Word(std::vector<Letter> l) : letters_(std::move(l)) {}
  std::vector<Letter> letters_;
};

Word reduce_word(const std::vector<Letter>& raw);

// Letters a..z, "-1" suffix for inverses; "", "1" and "e" denote the empty word.
Word parse_word(const std::string& s, int generators = 26);
std::string format_word(const Word& w);

class GroupRingElt {
 public:
  GroupRingElt() = default;
  explicit GroupRingElt(int64_t p) : p_(p) {}
  static GroupRingElt one(int64_t p = 0) { return term(Word(), 1, p); }
  static GroupRingElt term(const Word& w, int64_t c, int64_t p = 0);

  const std::map<Word, int64_t>& terms() const { return terms_; }
  int64_t modulus() const { return p_; }
  bool is_zero() const { return terms_.empty(); }
  int64_t coeff(const Word& w) const;
  int64_t l1() const;

  void add(const Word& w, int64_t c);
  GroupRingElt operator+(const GroupRingElt& o) const;
  GroupRingElt operator-(const GroupRingElt& o) const;
  GroupRingElt operator-() const;
  GroupRingElt scaled(int64_t c) const;
  bool operator==(const GroupRingElt& o) const { return terms_ == o.terms_; }

 private:
  std::map<Word, int64_t> terms_;
  int64_t p_ = 0;
};

GroupRingElt ring_mul(const GroupRingElt& x, const GroupRingElt& y);
inline GroupRingElt operator*(const GroupRingElt& x, const GroupRingElt& y) { return ring_mul(x, y); }
std::string format_elt(const GroupRingElt& x);

GroupRingElt fox_derivative(const Word& w, int g);

struct FinitePresentation {
  int generators = 0;
  std::vector<Word> relators;
};

FinitePresentation presentation_free(int d);
FinitePresentation presentation_Z();
FinitePresentation presentation_surface(int genus);
FinitePresentation presentation_Zd(int d);

size_t order_cap();

// Elements are indexed 0..order-1 with 0 the identity.
class FiniteQuotient {
 public:
  using Code = std::vector<int>;
  using Combine = std::function<Code(const Code&, const Code&)>;
  using Invert = std::function<Code(const Code&)>;

  FiniteQuotient(std::vector<Code> gen_codes, Code identity, Combine combine, Invert invert,
                 std::string kind, std::string description = "");

  int order() const { return static_cast<int>(codes_.size()); }
  int identity() const { return 0; }
  int num_generators() const { return static_cast<int>(gens_.size()); }
  const std::vector<int>& generator_images() const { return gens_; }
  int mul(int a, int b) const;
  int inv(int a) const { return inv_[a]; }
  int pow(int a, long k) const;
  int evaluate(const Word& w) const;
  const Code& code(int a) const { return codes_[a]; }
  int index_of(const Code& c) const;
  const std::string& kind() const { return kind_; }
  const std::string& description() const { return description_; }

  // Exhaustive for order <= 64, sampled otherwise.
  bool check_axioms(uint64_t seed = 1, int samples = 20000) const;
  void verify_relators(const FinitePresentation& pres) const;

 private:
  std::vector<Code> codes_;
  std::map<Code, int> index_;
  std::vector<int> gens_;
  std::vector<int> inv_;
  std::vector<int> table_;
  Combine combine_;
  std::string kind_, description_;
};

using QuotientPtr = std::shared_ptr<const FiniteQuotient>;

QuotientPtr abelian_quotient(int d, const std::vector<int>& moduli);
// images[g] is the vector in the product of cyclic groups that generator g maps to.
QuotientPtr abelian_quotient_images(const std::vector<int>& moduli,
                                    const std::vector<std::vector<int>>& images);
// One-line notation, 0-based or 1-based points.
QuotientPtr permutation_quotient(const FinitePresentation& pres,
                                 const std::vector<std::vector<int>>& images);

// Map from the elements of big to those of small sending generator images to generator images.
std::optional<std::vector<int>> connecting_map(const FiniteQuotient& big, const FiniteQuotient& small);

struct QuotientChain {
  std::vector<QuotientPtr> quotients;
  std::vector<std::optional<std::vector<int>>> maps;  // maps[k]: quotients[k+1] -> quotients[k]
};

QuotientChain make_chain(std::vector<QuotientPtr> qs);

}  // namespace torgrad
