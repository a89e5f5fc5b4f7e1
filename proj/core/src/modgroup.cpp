#include "outlift/modgroup.hpp"

#include <stdexcept>

namespace outlift {

MappingClass identity_class(int rank) {
  return {zero_bits(rank), identity_auto(rank)};
}

MappingClass make_class(TwistVector twist, NielsenAuto aut) {
  validate(aut);
  if (static_cast<int>(twist.size()) != aut.rank)
    throw std::invalid_argument("twist length does not match rank");
  for (std::uint8_t b : twist)
    if (b > 1) throw std::invalid_argument("twist entries must be bits");
  return {std::move(twist), std::move(aut)};
}

MappingClass multiply(const MappingClass& a, const MappingClass& b) {
  if (a.aut.rank != b.aut.rank) throw std::invalid_argument("rank mismatch in multiply");
  const TwistVector pushed = mat_vec(abelianize_mod2(a.aut), b.twist);
  TwistVector t(a.twist.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    t[k] = static_cast<std::uint8_t>(a.twist[k] ^ pushed[k]);
  return {std::move(t), compose(a.aut, b.aut)};
}

MappingClass inverse(const MappingClass& a) {
  NielsenAuto inv = inverse(a.aut);
  TwistVector t = mat_vec(abelianize_mod2(inv), a.twist);
  return {std::move(t), std::move(inv)};
}

MappingClass section(const NielsenAuto& f) { return {zero_bits(f.rank), f}; }

MappingClass twist_class(int rank, int i) {
  return {basis_bits(rank, i), identity_auto(rank)};
}

const NielsenAuto& project(const MappingClass& a) { return a.aut; }

bool is_identity(const MappingClass& a) {
  for (std::uint8_t b : a.twist)
    if (b) return false;
  return is_identity(a.aut);
}

bool equal(const MappingClass& a, const MappingClass& b) {
  return a.twist == b.twist && a.aut.rank == b.aut.rank && a.aut.images == b.aut.images;
}

namespace {

std::string render_word_tight(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const Letter& l : w.letters()) {
    s += 'a';
    s += std::to_string(l.index);
    if (l.sign < 0) s += "^-1";
  }
  return s;
}

}  // namespace

std::string render(const MappingClass& a) {
  std::string s = "twist=" + render_bits(a.twist) + " ;";
  for (int k = 1; k <= a.aut.rank; ++k) {
    s += k == 1 ? " " : ", ";
    s += 'a';
    s += std::to_string(k);
    s += "->";
    s += render_word_tight(a.aut.images[k - 1]);
  }
  return s;
}

}  // namespace outlift
