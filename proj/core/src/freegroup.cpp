#include "outlift/freegroup.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace outlift {

namespace {

void check_letter(Letter l, int rank) {
  if (l.index < 1 || l.index > rank)
    throw std::invalid_argument("letter index " + std::to_string(l.index) +
                                " outside 1.." + std::to_string(rank));
  if (l.sign != 1 && l.sign != -1)
    throw std::invalid_argument("letter sign must be +1 or -1");
}

void check_rank(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
}

// Push a letter onto a reduced stack, cancelling against the top.
void push_reduced(std::vector<Letter>& stack, Letter l) {
  if (!stack.empty() && stack.back().index == l.index && stack.back().sign == -l.sign)
    stack.pop_back();
  else
    stack.push_back(l);
}

}  // namespace

Word Word::single(Letter l) {
  Word w;
  w.letters_.push_back(l);
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    w.letters_.push_back({it->index, -it->sign});
  return w;
}

Word operator*(const Word& lhs, const Word& rhs) {
  Word w;
  w.letters_ = lhs.letters_;
  for (Letter l : rhs.letters_) push_reduced(w.letters_, l);
  return w;
}

Word reduce(std::span<const Letter> raw, int rank) {
  check_rank(rank);
  Word w;
  w.letters_.reserve(raw.size());
  for (Letter l : raw) {
    check_letter(l, rank);
    push_reduced(w.letters_, l);
  }
  return w;
}

Word reduce(std::initializer_list<Letter> raw, int rank) {
  return reduce(std::span<const Letter>(raw.begin(), raw.size()), rank);
}

bool is_reduced(std::span<const Letter> letters) {
  for (std::size_t k = 1; k < letters.size(); ++k)
    if (letters[k].index == letters[k - 1].index && letters[k].sign == -letters[k - 1].sign)
      return false;
  return true;
}

std::string to_text(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ' ';
    const Letter& l = w.letters()[k];
    out += 'a';
    out += std::to_string(l.index);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

std::string to_compact(const Word& w) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ' ';
    const Letter& l = w.letters()[k];
    out += std::to_string(l.sign * l.index);
  }
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> toks;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && s[k] == ' ') ++k;
    std::size_t start = k;
    while (k < s.size() && s[k] != ' ') ++k;
    if (k > start) toks.push_back(s.substr(start, k - start));
  }
  return toks;
}

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

Word parse_text(std::string_view s, int rank) {
  check_rank(rank);
  auto toks = split_ws(s);
  if (toks.size() == 1 && toks[0] == "1") return Word{};
  std::vector<Letter> letters;
  for (std::string_view t : toks) {
    if (t.size() < 2 || t[0] != 'a')
      throw std::invalid_argument("malformed letter token: '" + std::string(t) + "'");
    int sign = 1;
    std::string_view body = t.substr(1);
    if (auto pos = body.find('^'); pos != std::string_view::npos) {
      if (body.substr(pos) != "^-1")
        throw std::invalid_argument("malformed exponent in token: '" + std::string(t) + "'");
      sign = -1;
      body = body.substr(0, pos);
    }
    letters.push_back({parse_int(body, "generator index"), sign});
  }
  return reduce(letters, rank);
}

Word parse_compact(std::string_view s, int rank) {
  check_rank(rank);
  std::vector<Letter> letters;
  for (std::string_view t : split_ws(s)) {
    int v = parse_int(t, "compact letter");
    if (v == 0) throw std::invalid_argument("compact letter may not be 0");
    letters.push_back({std::abs(v), v > 0 ? 1 : -1});
  }
  return reduce(letters, rank);
}

NielsenGen NielsenGen::right_mult(int i, int j, bool inv) {
  if (i == j) throw std::invalid_argument("R(i,j) needs i != j");
  if (i < 1 || j < 1) throw std::invalid_argument("generator indices are 1-based");
  return {Kind::RightMult, i, j, inv};
}

NielsenGen NielsenGen::invert(int j) {
  if (j < 1) throw std::invalid_argument("generator indices are 1-based");
  return {Kind::Invert, 0, j, false};
}

NielsenGen NielsenGen::inverted() const {
  NielsenGen g = *this;
  if (kind == Kind::RightMult) g.inverse = !inverse;
  return g;  // I(j)^2 = id
}

NielsenAuto identity_auto(int rank) {
  check_rank(rank);
  NielsenAuto f;
  f.rank = rank;
  f.images.reserve(rank);
  for (int k = 1; k <= rank; ++k) f.images.push_back(Word::single({k, 1}));
  return f;
}

NielsenAuto nielsen_generator(int rank, const NielsenGen& g) {
  NielsenAuto f = identity_auto(rank);
  f.factorization.push_back(g);
  switch (g.kind) {
    case NielsenGen::Kind::RightMult: {
      if (g.i > rank || g.j > rank)
        throw std::invalid_argument("Nielsen generator index exceeds rank");
      Letter mult{g.j, g.inverse ? -1 : 1};
      f.images[g.i - 1] = Word::single({g.i, 1}) * Word::single(mult);
      break;
    }
    case NielsenGen::Kind::Invert: {
      if (g.j > rank)
        throw std::invalid_argument("Nielsen generator index exceeds rank");
      f.images[g.j - 1] = Word::single({g.j, -1});
      break;
    }
  }
  return f;
}

NielsenAuto from_factorization(int rank, std::span<const NielsenGen> gens) {
  NielsenAuto f = identity_auto(rank);
  for (auto it = gens.rbegin(); it != gens.rend(); ++it)
    f = compose(nielsen_generator(rank, *it), f);
  f.factorization.assign(gens.begin(), gens.end());
  return f;
}

Word apply(const NielsenAuto& f, const Word& w) {
  Word out;
  for (Letter l : w.letters()) {
    if (l.index > f.rank)
      throw std::invalid_argument("word mentions a_" + std::to_string(l.index) +
                                  " but automorphism has rank " + std::to_string(f.rank));
    const Word& im = f.images[l.index - 1];
    out = out * (l.sign > 0 ? im : im.inverse());
  }
  return out;
}

NielsenAuto compose(const NielsenAuto& f, const NielsenAuto& g) {
  if (f.rank != g.rank) throw std::invalid_argument("rank mismatch in compose");
  NielsenAuto h;
  h.rank = f.rank;
  h.images.reserve(f.rank);
  for (const Word& im : g.images) h.images.push_back(apply(f, im));
  h.factorization = f.factorization;
  h.factorization.insert(h.factorization.end(), g.factorization.begin(),
                         g.factorization.end());
  return h;
}

NielsenAuto inverse(const NielsenAuto& f) {
  std::vector<NielsenGen> rev;
  rev.reserve(f.factorization.size());
  for (auto it = f.factorization.rbegin(); it != f.factorization.rend(); ++it)
    rev.push_back(it->inverted());
  if (f.factorization.empty() && !is_identity(f))
    throw std::invalid_argument("cannot invert: no factorization recorded");
  return from_factorization(f.rank, rev);
}

bool is_identity(const NielsenAuto& f) {
  for (int k = 1; k <= f.rank; ++k) {
    const Word& im = f.images[k - 1];
    if (im.size() != 1 || im.letters()[0] != Letter{k, 1}) return false;
  }
  return true;
}

void validate(const NielsenAuto& f) {
  check_rank(f.rank);
  if (static_cast<int>(f.images.size()) != f.rank)
    throw std::invalid_argument("image count does not match rank");
  for (const Word& im : f.images) {
    if (!is_reduced(im.letters()))
      throw std::invalid_argument("unreduced image word");
    for (Letter l : im.letters()) check_letter(l, f.rank);
  }
  if (!f.factorization.empty()) {
    NielsenAuto g = from_factorization(f.rank, f.factorization);
    if (g.images != f.images)
      throw std::invalid_argument("factorization does not reproduce images");
  }
}

Mod2Matrix Mod2Matrix::identity(int n) {
  Mod2Matrix m;
  m.n = n;
  m.bits.assign(static_cast<std::size_t>(n) * n, 0);
  for (int k = 0; k < n; ++k) m.at(k, k) = 1;
  return m;
}

Mod2Matrix operator*(const Mod2Matrix& a, const Mod2Matrix& b) {
  if (a.n != b.n) throw std::invalid_argument("size mismatch in Mod2Matrix product");
  Mod2Matrix c;
  c.n = a.n;
  c.bits.assign(static_cast<std::size_t>(a.n) * a.n, 0);
  for (int r = 0; r < a.n; ++r)
    for (int k = 0; k < a.n; ++k)
      if (a.at(r, k))
        for (int col = 0; col < a.n; ++col) c.at(r, col) ^= b.at(k, col);
  return c;
}

Mod2Matrix abelianize_mod2(const NielsenAuto& f) {
  Mod2Matrix m;
  m.n = f.rank;
  m.bits.assign(static_cast<std::size_t>(f.rank) * f.rank, 0);
  for (int c = 0; c < f.rank; ++c)
    for (Letter l : f.images[c].letters()) m.at(l.index - 1, c) ^= 1;
  return m;
}

std::vector<std::uint8_t> mat_vec(const Mod2Matrix& m, std::span<const std::uint8_t> v) {
  if (static_cast<int>(v.size()) != m.n)
    throw std::invalid_argument("size mismatch in Mod2Matrix mat_vec");
  std::vector<std::uint8_t> out(v.size(), 0);
  for (int r = 0; r < m.n; ++r) {
    std::uint8_t acc = 0;
    for (int c = 0; c < m.n; ++c) acc ^= static_cast<std::uint8_t>(m.at(r, c) & v[c]);
    out[r] = acc;
  }
  return out;
}

}  // namespace outlift
