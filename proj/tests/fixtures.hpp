#pragma once

#include "filtss/massey.hpp"
#include "filtss/sseq.hpp"

#include <array>

namespace fixtures {

// 1; a, b, c, e, f in degree -1; x, y, w in degree -2; ab = x, bc = y, af = w, de = x, df = y.
// <a, b, c> = {[w]} with zero indeterminacy.
filtss::DGAlgebra triple_fixture(std::uint32_t p);

// 0 -> C_3 -> C_2 -> C_1 -> C_0 -> 0 with random differentials satisfying d^2 = 0
filtss::GradedComplex random_complex(std::uint32_t p, unsigned seed, std::size_t max_dim = 4);

// Random filtered complex: a direct sum of interval complexes (d x = y, level y >= level x)
// conjugated by a random filtration-preserving change of basis. Degrees 0..2, levels 0..3.
filtss::FilteredDGA random_filtered(std::uint32_t p, unsigned seed, std::size_t dim = 12, int max_level = 3);

// a at level 1, degree 0; b at level 0, degree 1; d b = a. The class of a dies one level down.
filtss::FilteredDGA dying_class();

// inverse of a square invertible matrix
filtss::Matrix inverse(const filtss::Matrix& m);

// Multiplicative filtered word algebras; level = word length, weight-truncated.
// x (t=0, w=1), y (t=1, w=3) with dy = x^3: a d_2.
filtss::FilteredDGA cube_fixture(std::uint32_t p, int max_weight = 8);
// x (t=0, w=1), y (t=1, w=4) with dy = x^4: a d_3.
filtss::FilteredDGA fourth_power_fixture(std::uint32_t p, int max_weight = 9);
// cube_fixture plus z (t=2, w=4) with dz = xy - yx: d_1 and d_2 together.
filtss::FilteredDGA mixed_fixture(std::uint32_t p, int max_weight = 8);

// a (n=0, t=1), b (n=2, t=0), d a = b
filtss::FilteredDGA two_cell();

}  // namespace fixtures

namespace fixtures {

// Word algebra on a, b, c, d (weight 1) with e_ab, e_bc, e_cd (weight 2) killing adjacent
// products and g_abc, g_bcd (weight 3) killing the triple-product representatives; all letters
// in degree -1, weight-truncated at 4.
filtss::WordAlgebra quadruple_fixture(std::uint32_t p);

// V_1 = (a b), V_2 = (c; d), V_3 = (x) with e: de = ac + bd and f, g: df = cx, dg = dx.
filtss::WordAlgebra matric_fixture(std::uint32_t p);

// chain of a named basis element
filtss::Chain named(const filtss::DGAlgebra& u, const std::string& name, filtss::Scalar c = 1);

}  // namespace fixtures

namespace fixtures {

// Word algebra on a, b, c, d (weight 1, given degrees) with e_ab, e_bc, e_cd killing adjacent
// products with the bracket signs. killers >= 2 adds g_abc, g_bcd killing the triple-product
// representatives. extra adds a cycle z in the grade of e_ab, and (killers >= 2) h with dh = zbar c.
filtss::WordAlgebra bracket_fixture(std::uint32_t p, std::array<int, 4> degrees, int killers, bool extra);

}  // namespace fixtures

namespace fixtures {

// Graded algebras with zero differential; letters have weight 1 unless noted.
// Lambda(x), x in degree -1.
filtss::WordAlgebra exterior_fixture(std::uint32_t p, int max_weight = 6);
// free on `letters` generators in degree -1
filtss::WordAlgebra free_fixture(std::uint32_t p, int letters, int max_weight);
// F_p<a, b>/(ab), degrees -1
filtss::WordAlgebra monomial_fixture(std::uint32_t p, int max_weight = 6);
// free on a (degree -1) and c (degree -2)
filtss::WordAlgebra low_generator_fixture(std::uint32_t p, int max_weight = 5);
// Free algebra on degree -1 letters a, b, c (weight 1), e, f (weight 2), g (weight 3) with a
// random differential satisfying d^2 = 0 (retrying seeds as needed).
filtss::WordAlgebra random_free_dga(unsigned seed, int max_weight = 4);

}  // namespace fixtures

namespace fixtures {

// The triple fixture filtered so that a, b, c sit at level k, e, f at level k, x, y at level 2k
// and w at level 2k: d e = x and d f = y become d_k, and <a, b, c> = {w} on E_k. With
// `crossing`, u (degree -1, level k - 1) and v (degree -2, level 2k + 1) with d u = v add a
// d_{k+2} in the crossing window of the bracket.
filtss::FilteredDGA moss_fixture(std::uint32_t p, int k, bool crossing);

}  // namespace fixtures

namespace fixtures {

// Random chart of 18 classes: free classes and d_r blocks (r <= 4, size <= 2) given by
// invertible upper triangular matrices.
filtss::AbstractChart random_chart(std::uint32_t p, unsigned seed);

// Layers C, C, D, D, ... with identity maps X_{i+1} -> X_i for even i and zero otherwise.
filtss::LayeredSystem strict_tower(std::uint32_t p, int n, unsigned seed);
// The total differential of s conjugated by a random unipotent block-triangular automorphism;
// the relations still hold and the higher maps are nonzero.
filtss::LayeredSystem gauge(const filtss::LayeredSystem& s, unsigned seed);

}  // namespace fixtures
