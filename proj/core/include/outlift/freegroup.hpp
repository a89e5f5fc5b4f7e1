#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace outlift {

// A generator symbol a_k (sign +1) or its inverse a_k^{-1} (sign -1).
// Indices are 1-based.
struct Letter {
  int index = 1;
  int sign = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
};

inline Letter inverse(Letter l) { return {l.index, -l.sign}; }

// Freely reduced word in a_1..a_n.  Every construction path reduces, so the
// invariant "no a a^{-1} adjacency" holds structurally.
class Word {
 public:
  Word() = default;
  static Word single(Letter l);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word inverse() const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend Word reduce(std::span<const Letter> raw, int rank);
  std::vector<Letter> letters_;
};

// Freely reduce a raw letter sequence.  Throws std::invalid_argument on an
// index outside 1..rank or a sign not in {-1,+1}.
Word reduce(std::span<const Letter> raw, int rank);
Word reduce(std::initializer_list<Letter> raw, int rank);

bool is_reduced(std::span<const Letter> letters);

// --- serialization --------------------------------------------------------
//
// Text form:    "a1 a2^-1"   (empty word renders as "1")
// Compact form: "1 -2"       (empty word renders as "")
//
// Both round-trip exactly: parse(to_text(w)) == w, and rendering a parsed
// canonical string reproduces it byte for byte.

std::string to_text(const Word& w);
std::string to_compact(const Word& w);
Word parse_text(std::string_view s, int rank);
Word parse_compact(std::string_view s, int rank);

// --- Nielsen generators ----------------------------------------------------

// R(i,j): a_i -> a_i a_j, other generators fixed (i != j).
// I(j):   a_j -> a_j^{-1}, other generators fixed.
struct NielsenGen {
  enum class Kind { RightMult, Invert };
  Kind kind = Kind::Invert;
  int i = 0;              // acted generator for RightMult
  int j = 0;              // multiplier for RightMult, acted generator for Invert
  bool inverse = false;   // R(i,j)^{-1}: a_i -> a_i a_j^{-1}; I(j) is its own inverse

  static NielsenGen right_mult(int i, int j, bool inv = false);
  static NielsenGen invert(int j);
  NielsenGen inverted() const;

  friend bool operator==(const NielsenGen&, const NielsenGen&) = default;
};

// Automorphism of F_rank stored by generator images, together with the
// factorization into Nielsen generators that produced it (outermost first).
struct NielsenAuto {
  int rank = 0;
  std::vector<Word> images;                  // images[k-1] = image of a_k
  std::vector<NielsenGen> factorization;
};

NielsenAuto identity_auto(int rank);
NielsenAuto nielsen_generator(int rank, const NielsenGen& g);
NielsenAuto from_factorization(int rank, std::span<const NielsenGen> gens);

// Image of w, freely reduced.  Throws std::invalid_argument if w mentions a
// generator beyond f.rank.
Word apply(const NielsenAuto& f, const Word& w);

// compose(f, g) acts as w -> f(g(w)).
NielsenAuto compose(const NielsenAuto& f, const NielsenAuto& g);
NielsenAuto inverse(const NielsenAuto& f);

bool is_identity(const NielsenAuto& f);

// Structural checks: image count matches rank, images reduced and in range,
// factorization (when present) reproduces the images.
void validate(const NielsenAuto& f);

// --- abelianization mod 2 ---------------------------------------------------

// Dense n x n matrix over Z/2, row-major.
struct Mod2Matrix {
  int n = 0;
  std::vector<std::uint8_t> bits;

  static Mod2Matrix identity(int n);
  std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * n + c]; }
  std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * n + c]; }

  friend Mod2Matrix operator*(const Mod2Matrix& a, const Mod2Matrix& b);
  friend bool operator==(const Mod2Matrix&, const Mod2Matrix&) = default;
};

// Column c holds the mod-2 exponent sums of f(a_{c+1}); entry (r,c) is the
// parity of the total exponent of a_{r+1} in that image.  Functorial:
// abelianize_mod2(compose(f,g)) == abelianize_mod2(f) * abelianize_mod2(g).
Mod2Matrix abelianize_mod2(const NielsenAuto& f);

std::vector<std::uint8_t> mat_vec(const Mod2Matrix& m, std::span<const std::uint8_t> v);

}  // namespace outlift
