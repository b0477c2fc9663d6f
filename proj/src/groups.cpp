#include "torgrad/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <random>

#include "torgrad/coeff.hpp"

namespace torgrad {

Word reduce_word(const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (const Letter& l : raw) {
    if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(std::move(out));
}

Word Word::operator*(const Word& o) const {
  std::vector<Letter> raw = letters_;
  raw.insert(raw.end(), o.letters_.begin(), o.letters_.end());
  return reduce_word(raw);
}

Word Word::inverse() const {
  std::vector<Letter> raw(letters_.rbegin(), letters_.rend());
  for (auto& l : raw) l.sign = -l.sign;
  return Word(std::move(raw));
}

Word Word::power(int k) const {
  Word base = k < 0 ? inverse() : *this, r;
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}

Word parse_word(const std::string& s, int generators) {
  std::vector<Letter> raw;
  if (s.empty() || s == "1" || s == "e") return Word();
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*') continue;
    if (c < 'a' || c > 'z') throw ConfigError("bad letter in word '" + s + "'");
    int g = c - 'a';
    if (g >= generators) throw ConfigError("generator out of range in word '" + s + "'");
    int sign = 1;
    if (i + 2 < s.size() + 1 && s.compare(i + 1, 2, "-1") == 0) {
      sign = -1;
      i += 2;
    }
    raw.push_back({g, sign});
  }
  return reduce_word(raw);
}

std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& l : w.letters()) {
    s += static_cast<char>('a' + l.gen);
    if (l.sign < 0) s += "-1";
  }
  return s;
}

GroupRingElt GroupRingElt::term(const Word& w, int64_t c, int64_t p) {
  GroupRingElt x(p);
  x.add(w, c);
  return x;
}

int64_t GroupRingElt::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

int64_t GroupRingElt::l1() const {
  int64_t s = 0;
  for (const auto& [w, c] : terms_) s = cadd(s, cabs(c, p_));
  return s;
}

void GroupRingElt::add(const Word& w, int64_t c) {
  int64_t v = cnorm(cadd(coeff(w), c, p_), p_);
  if (v == 0)
    terms_.erase(w);
  else
    terms_[w] = v;
}

GroupRingElt GroupRingElt::operator+(const GroupRingElt& o) const {
  GroupRingElt r = *this;
  if (!r.p_) r.p_ = o.p_;
  for (const auto& [w, c] : o.terms_) r.add(w, c);
  return r;
}

GroupRingElt GroupRingElt::operator-() const { return scaled(-1); }

GroupRingElt GroupRingElt::operator-(const GroupRingElt& o) const { return *this + (-o); }

GroupRingElt GroupRingElt::scaled(int64_t c) const {
  GroupRingElt r(p_);
  for (const auto& [w, v] : terms_) r.add(w, cmul(v, c, p_));
  return r;
}

GroupRingElt ring_mul(const GroupRingElt& x, const GroupRingElt& y) {
  int64_t p = x.modulus() ? x.modulus() : y.modulus();
  GroupRingElt r(p);
  for (const auto& [u, a] : x.terms())
    for (const auto& [v, b] : y.terms()) r.add(u * v, cmul(a, b, p));
  return r;
}

std::string format_elt(const GroupRingElt& x) {
  if (x.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    int64_t a = c;
    if (!first) s += a < 0 ? " - " : " + ";
    else if (a < 0) s += "-";
    first = false;
    int64_t m = a < 0 ? -a : a;
    if (w.empty())
      s += std::to_string(m);
    else {
      if (m != 1) s += std::to_string(m) + "*";
      s += format_word(w);
    }
  }
  return s;
}

GroupRingElt fox_derivative(const Word& w, int g) {
  // d(x1...xn) = sum_k x1...x(k-1) d(xk)
  GroupRingElt r;
  std::vector<Letter> prefix;
  for (const Letter& l : w.letters()) {
    if (l.gen == g) {
      Word pre = reduce_word(prefix);
      if (l.sign > 0)
        r.add(pre, 1);
      else
        r.add(pre * Word::gen(g, -1), -1);
    }
    prefix.push_back(l);
  }
  return r;
}

FinitePresentation presentation_free(int d) { return {d, {}}; }

FinitePresentation presentation_Z() { return {1, {}}; }

FinitePresentation presentation_surface(int genus) {
  std::vector<Letter> raw;
  for (int i = 0; i < genus; ++i) {
    int a = 2 * i, b = 2 * i + 1;
    raw.insert(raw.end(), {{a, 1}, {b, 1}, {a, -1}, {b, -1}});
  }
  return {2 * genus, {reduce_word(raw)}};
}

FinitePresentation presentation_Zd(int d) {
  FinitePresentation p{d, {}};
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) p.relators.push_back(reduce_word({{i, 1}, {j, 1}, {i, -1}, {j, -1}}));
  return p;
}

size_t order_cap() {
  if (const char* e = std::getenv("TORGRAD_ORDER_CAP")) {
    long v = std::strtol(e, nullptr, 10);
    if (v > 0) return static_cast<size_t>(v);
  }
  return 10000;
}

namespace {
constexpr int kTableLimit = 2048;
}

FiniteQuotient::FiniteQuotient(std::vector<Code> gen_codes, Code identity, Combine combine,
                               Invert invert, std::string kind, std::string description)
    : combine_(std::move(combine)), kind_(std::move(kind)), description_(std::move(description)) {
  size_t cap = order_cap();
  codes_.push_back(identity);
  index_[identity] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (const Code& g : gen_codes) {
      Code c = combine_(codes_[a], g);
      if (index_.count(c)) continue;
      if (codes_.size() >= cap)
        throw OrderCapExceeded("quotient order exceeds cap " + std::to_string(cap));
      index_[c] = static_cast<int>(codes_.size());
      codes_.push_back(c);
      queue.push_back(static_cast<int>(codes_.size()) - 1);
    }
  }
  for (const Code& g : gen_codes) gens_.push_back(index_.at(g));
  int n = order();
  inv_.resize(n);
  for (int a = 0; a < n; ++a) inv_[a] = index_.at(invert(codes_[a]));
  if (n <= kTableLimit) {
    table_.resize(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) table_[static_cast<size_t>(a) * n + b] = index_.at(combine_(codes_[a], codes_[b]));
  }
}

int FiniteQuotient::mul(int a, int b) const {
  if (!table_.empty()) return table_[static_cast<size_t>(a) * order() + b];
  return index_.at(combine_(codes_[a], codes_[b]));
}

int FiniteQuotient::pow(int a, long k) const {
  int base = k < 0 ? inv(a) : a, r = 0;
  for (long e = k < 0 ? -k : k; e; e >>= 1) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
  }
  return r;
}

int FiniteQuotient::evaluate(const Word& w) const {
  int r = 0;
  for (const auto& l : w.letters()) {
    if (l.gen >= num_generators()) throw ConfigError("word uses generator outside the quotient");
    int g = gens_[l.gen];
    r = mul(r, l.sign > 0 ? g : inv(g));
  }
  return r;
}

int FiniteQuotient::index_of(const Code& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

bool FiniteQuotient::check_axioms(uint64_t seed, int samples) const {
  int n = order();
  auto ok = [&](int a, int b, int c) {
    return mul(mul(a, b), c) == mul(a, mul(b, c));
  };
  for (int a = 0; a < n; ++a)
    if (mul(a, inv(a)) != 0 || mul(inv(a), a) != 0 || mul(a, 0) != a || mul(0, a) != a) return false;
  if (n <= 64) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (!ok(a, b, c)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int s = 0; s < samples; ++s)
    if (!ok(pick(rng), pick(rng), pick(rng))) return false;
  return true;
}

void FiniteQuotient::verify_relators(const FinitePresentation& pres) const {
  if (pres.generators != num_generators())
    throw ConfigError("presentation has " + std::to_string(pres.generators) + " generators, quotient has " +
                      std::to_string(num_generators()));
  for (const Word& r : pres.relators)
    if (evaluate(r) != 0) throw RelatorViolation(format_word(r));
}

QuotientPtr abelian_quotient_images(const std::vector<int>& moduli,
                                    const std::vector<std::vector<int>>& images) {
  for (int m : moduli)
    if (m < 1) throw ConfigError("abelian moduli must be positive");
  std::vector<FiniteQuotient::Code> gens;
  for (const auto& img : images) {
    if (img.size() != moduli.size()) throw ConfigError("abelian image has wrong length");
    FiniteQuotient::Code c(img.size());
    for (size_t k = 0; k < img.size(); ++k) c[k] = ((img[k] % moduli[k]) + moduli[k]) % moduli[k];
    gens.push_back(c);
  }
  auto combine = [moduli](const FiniteQuotient::Code& a, const FiniteQuotient::Code& b) {
    FiniteQuotient::Code c(a.size());
    for (size_t k = 0; k < a.size(); ++k) c[k] = (a[k] + b[k]) % moduli[k];
    return c;
  };
  auto invert = [moduli](const FiniteQuotient::Code& a) {
    FiniteQuotient::Code c(a.size());
    for (size_t k = 0; k < a.size(); ++k) c[k] = (moduli[k] - a[k]) % moduli[k];
    return c;
  };
  std::string desc = "Z/";
  for (size_t k = 0; k < moduli.size(); ++k) desc += (k ? " x Z/" : "") + std::to_string(moduli[k]);
  return std::make_shared<FiniteQuotient>(gens, FiniteQuotient::Code(moduli.size(), 0), combine, invert,
                                          "abelian", desc);
}

QuotientPtr abelian_quotient(int d, const std::vector<int>& moduli) {
  if (static_cast<int>(moduli.size()) != d) throw ConfigError("need one modulus per generator");
  for (int m : moduli)
    if (m < 2) throw ConfigError("abelian moduli must be at least 2");
  std::vector<std::vector<int>> images(d, std::vector<int>(d, 0));
  for (int k = 0; k < d; ++k) images[k][k] = 1;
  return abelian_quotient_images(moduli, images);
}

QuotientPtr permutation_quotient(const FinitePresentation& pres,
                                 const std::vector<std::vector<int>>& images) {
  if (static_cast<int>(images.size()) != pres.generators)
    throw ConfigError("need one permutation per generator");
  size_t m = images.empty() ? 0 : images[0].size();
  bool one_based = false;
  for (const auto& img : images) {
    if (img.size() != m) throw ConfigError("permutations of different degrees");
    for (int v : img)
      if (static_cast<size_t>(v) == m) one_based = true;
  }
  std::vector<FiniteQuotient::Code> gens;
  for (const auto& img : images) {
    FiniteQuotient::Code c(m);
    std::vector<char> seen(m, 0);
    for (size_t x = 0; x < m; ++x) {
      int v = img[x] - (one_based ? 1 : 0);
      if (v < 0 || static_cast<size_t>(v) >= m || seen[v]) throw ConfigError("image is not a permutation");
      seen[v] = 1;
      c[x] = v;
    }
    gens.push_back(c);
  }
  // (a b)(x) = a(b(x)): the right factor acts first.
  auto combine = [](const FiniteQuotient::Code& a, const FiniteQuotient::Code& b) {
    FiniteQuotient::Code c(a.size());
    for (size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
    return c;
  };
  auto invert = [](const FiniteQuotient::Code& a) {
    FiniteQuotient::Code c(a.size());
    for (size_t x = 0; x < a.size(); ++x) c[a[x]] = static_cast<int>(x);
    return c;
  };
  FiniteQuotient::Code id(m);
  std::iota(id.begin(), id.end(), 0);
  auto q = std::make_shared<FiniteQuotient>(gens, id, combine, invert, "permutation",
                                            "S_" + std::to_string(m) + " subgroup");
  q->verify_relators(pres);
  return q;
}

std::optional<std::vector<int>> connecting_map(const FiniteQuotient& big, const FiniteQuotient& small) {
  if (big.num_generators() != small.num_generators()) return std::nullopt;
  int n = big.order();
  std::vector<int> phi(n, -1);
  phi[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    for (int s = 0; s < big.num_generators(); ++s) {
      int b = big.mul(a, big.generator_images()[s]);
      int img = small.mul(phi[a], small.generator_images()[s]);
      if (phi[b] < 0) {
        phi[b] = img;
        queue.push_back(b);
      } else if (phi[b] != img) {
        return std::nullopt;
      }
    }
  }
  return phi;
}

QuotientChain make_chain(std::vector<QuotientPtr> qs) {
  std::stable_sort(qs.begin(), qs.end(), [](const QuotientPtr& a, const QuotientPtr& b) {
    return a->order() < b->order();
  });
  for (size_t k = 1; k < qs.size(); ++k)
    if (qs[k]->order() == qs[k - 1]->order()) throw ConfigError("quotient chain orders must strictly increase");
  QuotientChain c;
  c.quotients = qs;
  for (size_t k = 1; k < qs.size(); ++k) c.maps.push_back(connecting_map(*qs[k], *qs[k - 1]));
  return c;
}

}  // namespace torgrad
