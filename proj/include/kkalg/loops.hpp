#pragma once

#include "kkalg/power.hpp"
#include "kkalg/tensor.hpp"

namespace kkalg {

// 0 -> Omega A -> PA -> A -> 0 inside A with one loop generator adjoined:
// PA is the morphisms vanishing at q = 0, the projection evaluates at q = 1,
// and the F-splitting is x -> q*x.  The carrier is loop_power(a, 1).ext.
FSplitExtension loop_extension(AlgebroidPtr a);

// Classifying map of the loop extension: J A -> Omega A, valued in the
// carrier of loop_power(a, 1).
LazyHomomorphism rho(AlgebroidPtr a);

// 0 -> Omega A -> A^{Delta^1} -> A + A -> 0 with s(x, y) = (1-t)x + ty,
// wrapped around path_extension_parts.
FSplitExtension path_extension(AlgebroidPtr a);

// 0 -> R^{X cup_B C} -> R^X + R^C -> R^B -> 0 with splitting (i_*, 0),
// wrapped around pushout_extension_parts.  The legs are power algebroids, so
// only the pushout element protocol applies.
FSplitExtension pushout_extension(AlgebroidPtr a, const FiniteSimplicialSet& x,
                                  const std::vector<std::vector<bool>>& in_b,
                                  const FiniteSimplicialSet& c, const SimplicialMap& f);

// Pullback PB x_B A of based paths along f: pairs (p, x) with p in B with the
// path generator adjoined, p(0) = 0 and p(1) = f(x), algebra componentwise.
// The projection to the second leg is F-split by x -> (q f(x), x) and its
// kernel is Omega B in the first leg.  f must keep the scalar ring fixed.
struct MappingPath {
    AlgHom f;
    AlgebroidPtr a, b;
    AlgebroidPtr bpath; // B with the path generator adjoined
    int pathvar = 0;    // index of the path generator in bpath->scalars

    std::function<bool(const Mor& p, const Mor& x)> member;
    std::function<std::pair<Mor, Mor>(const Mor& x)> split;
    std::function<bool(const Mor& p)> in_loop; // kernel: both endpoint values vanish
    ExactnessCertificate coords;               // indexed by hom pairs of A
};
MappingPath path_algebroid(const AlgHom& f);

// eta(f): J A -> B^{S^1}.  The classifying map of the mapping path extension
// of f lands in Omega B, which becomes the edge value of a circle family.
// Values are FamilyElement over circle_complex(), validated against
// power(B, S^1) before they are returned.
LazyHomomorphism eta(const AlgHom& f);

// Coefficient ring map applied through every layer of a nested element.
NestedElement nested_map_coefficients(const RingMap& rm, const NestedElement& e);

// The two memberships exchanged by the interchange map, both on nested
// elements over the carrier loop_power(b, l).ext:
//   - in_j_of_loop_power: the element lies in J^k(B^{S^l}); pi vanishes at
//     every level and each bottom path term of length m is divisible by the
//     m-th power of the loop window.
//   - in_loop_power_of_j: the element is a boundary-vanishing family of
//     J^k B elements; pi vanishes at every level and every boundary
//     evaluation q_i = 0, 1 of the whole element is zero.
bool in_j_of_loop_power(const LoopPower& lp, int k, const NestedElement& e);
bool in_loop_power_of_j(const LoopPower& lp, int k, const NestedElement& e);

// interchange(b, k, l): J^k(B^{S^l}) -> (J^k B)^{S^l}, built by iterating the
// classifying map of 0 -> (J B)^{S^1} -> (T B)^{S^1} -> B^{S^1} -> 0.  On the
// shared carrier the iterated map keeps every coefficient in place, so the
// evaluator enforces the source membership, re-reads the element as a family
// of J-kernel elements, and enforces the target membership.
LazyHomomorphism interchange(AlgebroidPtr b, int k, int l);

} // namespace kkalg
