#pragma once

#include "kkalg/algebroid.hpp"
#include "kkalg/power.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kkalg {

// Element of the tensor algebroid T A: a finite formal sum of scalar-weighted
// composable paths x1 (x) ... (x) xk of basis morphisms, x1 starting at src
// and xk ending at dst.  Terms are keyed by their path, so the representation
// is canonical.  A path multiplies out with its first entry applied first:
// pi(x1 (x) ... (x) xk) = xk . ... . x1.
struct TensorElement {
    int src = -1;
    int dst = -1;
    std::map<std::vector<std::string>, Poly> terms;

    bool is_zero() const { return terms.empty(); }
    // Largest path length of a term, 0 for the zero element.
    int degree() const;
    bool operator==(const TensorElement& o) const {
        return src == o.src && dst == o.dst && terms == o.terms;
    }
    bool operator!=(const TensorElement& o) const { return !(*this == o); }
};

TensorElement tensor_zero(int src, int dst);
// The degree-one inclusion A -> T A.
TensorElement sigma(AlgebroidPtr a, const Mor& x);
// pi: T A -> A, multiplying every path out in A.
Mor pi(AlgebroidPtr a, const TensorElement& e);
TensorElement tensor_add(AlgebroidPtr a, const TensorElement& u, const TensorElement& v);
TensorElement tensor_sub(AlgebroidPtr a, const TensorElement& u, const TensorElement& v);
TensorElement tensor_scale(AlgebroidPtr a, const Poly& c, const TensorElement& u);
// Concatenation of paths, u first, extended bilinearly.  Under pi this is
// pi(v) . pi(u).
TensorElement tensor_compose(AlgebroidPtr a, const TensorElement& u, const TensorElement& v);
// The terms of path length exactly k.
TensorElement graded_part(const TensorElement& e, int k);

// Tensor element with pi(e) = 0; the vanishing is checked at construction.
struct JElement {
    TensorElement e;
};
JElement make_j_element(AlgebroidPtr a, const TensorElement& e);

// Element of an iterated tensor construction over A: depth 0 is a morphism of
// A, depth 1 a TensorElement, and depth d >= 2 a formal sum of scalar-weighted
// composable chains of depth-(d-1) elements.  Only depths 0 and 1 have a
// canonical form; depth 2 gains one through depth2_canonical below.
struct NestedElement {
    int depth = 0;
    Mor base;            // depth 0 payload
    TensorElement flat;  // depth 1 payload
    std::vector<std::pair<Poly, std::vector<NestedElement>>> chains; // depth >= 2
    int csrc = -1, cdst = -1; // endpoints at depth >= 2, where chains may be empty

    int src() const;
    int dst() const;
};

NestedElement nested_of_mor(const Mor& x);
NestedElement nested_of_tensor(const TensorElement& e);
NestedElement nested_zero(int depth, int src, int dst);
NestedElement nested_add(AlgebroidPtr a, const NestedElement& u, const NestedElement& v);
NestedElement nested_sub(AlgebroidPtr a, const NestedElement& u, const NestedElement& v);
NestedElement nested_scale(AlgebroidPtr a, const Poly& c, const NestedElement& u);
// Concatenation at equal depth, u first.
NestedElement nested_compose(AlgebroidPtr a, const NestedElement& u, const NestedElement& v);
// One application of pi: depth d -> depth d-1, multiplying each chain out one
// level down.
NestedElement nested_pi(AlgebroidPtr a, const NestedElement& e);
// One level up: e becomes the single-entry chain (or path) on e.
NestedElement nested_sigma(AlgebroidPtr a, const NestedElement& e);

// Canonical form of a depth-2 element.  T A splits per degree into the kernel
// basis w_P = P - sigma(pi(P)) over paths P of length >= 2 together with the
// degree-one part sigma(x); expanding every chain entry over that basis and
// multiplying out multilinearly gives a unique form keyed by tuples whose
// members are either a path of length >= 2 (a w_P factor) or a single basis
// name (a sigma factor).
std::map<std::vector<std::vector<std::string>>, Poly> depth2_canonical(AlgebroidPtr a,
                                                                       const NestedElement& e);
// Zero test: structural at depths 0 and 1, canonical at depth 2.  Deeper
// elements have no supported canonical form; testing them throws.
bool nested_is_zero(AlgebroidPtr a, const NestedElement& e);

// Value of a lazily evaluated homomorphism: a morphism of a materialized
// algebroid, a compatible family over a simplicial set, or a nested element
// when the target is itself a tensor construction.
using LazyValue = std::variant<Mor, FamilyElement, NestedElement>;

// Homomorphism out of a tensor construction over `domain`, carried as its
// defining data plus an evaluator on nested elements of the stated depth.
// Equality of two such maps is undecidable in general; the library compares
// them pointwise on supplied elements only.
struct LazyHomomorphism {
    std::string label;
    AlgebroidPtr domain; // inputs are depth-`depth` elements over this base
    int depth = 1;
    AlgebroidPtr target; // materialized target, when there is one
    std::vector<int> object_map;
    std::optional<RingMap> scalar_map;
    std::function<LazyValue(const NestedElement&)> eval;

    // Convenience for depth-1 inputs with morphism-valued targets.
    Mor eval_mor(const TensorElement& e) const;
};

// Restriction of a homomorphism T A -> B along sigma: a moduloid map A -> B,
// carried on the moduloid underlying A.
AlgHom adjunction_G(const LazyHomomorphism& alpha);
// The adjoint extension of a moduloid map beta: A -> B to T A, evaluating on
// a path by composing the images of its entries, first entry first.
LazyHomomorphism adjunction_H(AlgebroidPtr a, const AlgHom& beta);

// Product algebroid A (x) C bundled with the decomposition of its basis names
// and objects into pairs.
struct TensoredContext {
    AlgebroidPtr a;
    AlgebroidPtr c;
    AlgebroidPtr prod;
    std::map<std::string, std::pair<std::string, std::string>> split_name;

    int pair_object(int ia, int ic) const;
    std::pair<int, int> split_object(int o) const;
};
TensoredContext tensored_context(AlgebroidPtr a, AlgebroidPtr c);

// Element of T(A) (x) C: a formal sum of scalar-weighted pairs of an A-path
// and a coefficient basis name of C.
struct TensoredElement {
    int asrc = -1, adst = -1, csrc = -1, cdst = -1;
    std::map<std::pair<std::vector<std::string>, std::string>, Poly> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const TensoredElement& o) const {
        return asrc == o.asrc && adst == o.adst && csrc == o.csrc && cdst == o.cdst &&
               terms == o.terms;
    }
};

// sigma (x) 1 on a morphism of the product algebroid.
TensoredElement tensored_sigma(const TensoredContext& t, const Mor& x);
// pi (x) 1, back into the product algebroid.
Mor tensored_pi(const TensoredContext& t, const TensoredElement& e);
TensoredElement tensored_add(const TensoredContext& t, const TensoredElement& u,
                             const TensoredElement& v);
TensoredElement tensored_sub(const TensoredContext& t, const TensoredElement& u,
                             const TensoredElement& v);
// Concatenation on the path part and composition on the coefficient part,
// u first.
TensoredElement tensored_compose(const TensoredContext& t, const TensoredElement& u,
                                 const TensoredElement& v);
// Classifying map of the tensored extension: J(A (x) C) -> J A (x) C, by the
// adjoint extension of sigma (x) 1.  The input must satisfy pi = 0 and the
// value is checked to land in the ideal, grouping terms on the coefficient
// name and testing pi on each group.
TensoredElement tensored_classifying(const TensoredContext& t, const TensorElement& e);

// F-split short exact sequence 0 -> ideal -> total -> quotient -> 0 on one
// object set: j is an algebra map with a linear section s (j . s = id, s not
// required multiplicative) and i presents ker(j).  The legs appear through
// one of three element protocols, depending on what the total side is:
//   carrier - total and ideal sit inside a materialized algebroid, and the
//             morphism-valued functions below are populated;
//   tensor  - the total side is the tensor algebroid over `base`, optionally
//             tensored with `coeffs`; elements go through sigma/pi and the
//             tensored element operations, and no total is materialized;
//   pushout - the legs are power algebroids held by the builder parts.
// In every case `coords` certifies per-hom-pair exactness and the section
// identity on degree windows by exact linear algebra.
struct FSplitExtension {
    std::string label;
    std::string protocol; // "carrier", "tensor", "pushout"
    ExactnessCertificate coords;
    AlgebroidPtr quotient; // materialized quotient (carrier and tensor cases)

    // carrier protocol
    AlgebroidPtr carrier;
    std::function<bool(const Mor&)> in_total;
    std::function<bool(const Mor&)> in_ideal;
    std::function<Mor(const Mor&)> include_ideal;    // i
    std::function<Mor(const Mor&)> project;          // j
    std::function<Mor(const Mor&)> split;            // s
    std::function<Poly(const Poly&)> carrier_scalar; // quotient ring -> carrier ring

    // tensor protocol
    AlgebroidPtr base;   // the total side is T(base), never materialized
    AlgebroidPtr coeffs; // coefficient algebroid of the tensored variant
    std::shared_ptr<const TensoredContext> tctx; // set alongside coeffs

    // pushout protocol
    std::shared_ptr<const PushoutExtensionParts> pushout;
};

// 0 -> J A -> T A -> A -> 0 with splitting sigma.
FSplitExtension universal_extension(AlgebroidPtr a);

// 0 -> J A (x) C -> T A (x) C -> A (x) C -> 0 with splitting sigma (x) 1.
FSplitExtension j_tensor_extension(AlgebroidPtr a, AlgebroidPtr c);

// gamma: J A -> ideal, the restriction of H(s) to kernel elements.  Requires
// the carrier protocol; every evaluation checks that its input is a kernel
// element and that its value lands in the ideal.
LazyHomomorphism classifying_map(const FSplitExtension& ext);

// Carrier for J^k A: nesting depth plus membership by nested pi-vanishing.
struct JCarrier {
    AlgebroidPtr a;
    int depth = 0;

    bool contains(const NestedElement& e) const;
    void require_member(const NestedElement& e) const;
};
// k is capped at 3; deeper nesting has no supported zero test.
JCarrier iterate_J(AlgebroidPtr a, int k);

} // namespace kkalg
