#pragma once

#include <string>

#include "outlift/crosshom.hpp"
#include "outlift/freegroup.hpp"

namespace outlift {

// Element of the mapping class group model (Z/2)^n x| Out-part:
//   (t_a, f_a) (t_b, f_b) = (t_a + Abar(f_a) t_b, f_a . f_b)
// with Abar the mod-2 abelianization acting on twist vectors.
struct MappingClass {
  TwistVector twist;
  NielsenAuto aut;
};

MappingClass identity_class(int rank);
// Validates that the twist length matches the automorphism rank.
MappingClass make_class(TwistVector twist, NielsenAuto aut);

MappingClass multiply(const MappingClass& a, const MappingClass& b);
MappingClass inverse(const MappingClass& a);

// The section s: Out-part -> mapping classes, twist-free lifts.
MappingClass section(const NielsenAuto& f);
// Kernel generator: the sphere twist about sphere i.
MappingClass twist_class(int rank, int i);

const NielsenAuto& project(const MappingClass& a);
bool is_identity(const MappingClass& a);
bool equal(const MappingClass& a, const MappingClass& b);

// e.g. "twist=010 ; a1->a1a2, a2->a2, a3->a3"
std::string render(const MappingClass& a);

}  // namespace outlift
