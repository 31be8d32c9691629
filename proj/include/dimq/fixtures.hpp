#pragma once

#include "dimq/presentation.hpp"

#include <array>
#include <string>

namespace dimq {

// Built-in groups: G on 24 generators x1..x4, y-family (primes encoded as
// trailing 'p'), and the 8-generator quotient Gbar on x1..x4, z1..z4 obtained
// by identifying y-generators and adding commutation relations. w_x is the
// witness word in x-letters, w_z its expression in z-letters inside Gbar.
struct PaperFixture {
  GroupPresentation G;    // 24 generators, 8 relations
  GroupPresentation Gbar; // 8 generators, 13 relations
  WordExpr w_x;           // over G's (and Gbar's) x-letters
  WordExpr w_z;           // over Gbar's alphabet
};

const PaperFixture &paper_fixture();

// One of the eight grouped binomials in the section-1 congruence replay.
// Each binomial pairs two signed degree-3 monomials c*(x_a-1)(x_b-1)(x_c-1),
// factors them through a relation of G, and ends as a product of three
// relation differences whose filtration weights sum to >= 7.
struct BinomialStep {
  std::string name; // "e1".."e8"
  int sign;         // common sign of the two monomials

  // the two monomials: scalar exponents s (coefficient 3^s) and letter
  // triples (0-based x-indices)
  unsigned long coeff_pow[2];
  std::array<unsigned, 3> mono[2];

  // factored shape: (slot0-1)(3^a(x_j-1)+3^b(x_k-1))(slot2-1) with the
  // combined pair sitting at position `combined_pos` of the triple
  unsigned combined_pos; // 0, 1 or 2
  unsigned outer[2];     // the other two letters, in product order
  unsigned pair[2];      // letters j,k of the combined factor, product order
  unsigned long pair_pow[2]; // a, b

  unsigned relation;         // index into G.relations with lhs x_j^3^a x_k^3^b
  unsigned long rhs_pow;     // c in rhs = [y..]^3^c
  unsigned long outer_pow[2]; // split c = outer_pow[0] + outer_pow[1] onto
                              // the outer letters' torsion relations

  // final factors: indices into G.relations whose rhs commutators appear,
  // in product order, with the expected filtration weights
  std::array<unsigned, 3> factor_relation;
  std::array<unsigned, 3> factor_weight;
};

// The (t1)-(t4) rows: scalars 3^9..3^12 against the left-normed commutators
// of w; their degree-3 expansions are the 16 monomials grouped by (e1)-(e8).
struct Section1Fixture {
  std::array<unsigned long, 4> t_coeff_pow;           // 9, 10, 11, 12
  std::array<std::array<unsigned, 3>, 4> t_letters;   // commutator letters
  // torsion exponents of x1..x4 modulo gamma_2: x_i^(3^(2i-2)) in gamma_2
  std::array<unsigned long, 4> torsion_pow;
  std::array<unsigned, 4> torsion_relation; // the defining relations
  std::array<BinomialStep, 8> binomials;
};

const Section1Fixture &section1_fixture();

// Shipped fixture file contents (identical to the built-in objects).
std::string fixture_file_G();
std::string fixture_file_Gbar();
std::string fixture_file_w();
std::string fixture_file_wz();

} // namespace dimq
