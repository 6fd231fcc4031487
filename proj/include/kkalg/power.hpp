#pragma once

#include "kkalg/algebroid.hpp"
#include "kkalg/linalg.hpp"
#include "kkalg/simplicial.hpp"

#include <functional>

namespace kkalg {

// Scalars of an algebroid extended by the generators of Z^{Delta^d}: the
// prefix variables stay fixed, t1..td are appended.
PolyRing delta_extension(const PolyRing& prefix, int d);
RingMap extended_face_map(const PolyRing& prefix, int d, int i);       // d -> d-1
RingMap extended_degeneracy_map(const PolyRing& prefix, int d, int i); // d -> d+1

// Element of Hom(a,b) of a power algebroid: one coefficient morphism per
// nondegenerate cell, values[d][i] living over the dimension-d scalars.
struct FamilyElement {
    int src = -1;
    int dst = -1;
    std::vector<std::vector<Mor>> values;

    bool operator==(const FamilyElement& o) const {
        return src == o.src && dst == o.dst && values == o.values;
    }
};

// The algebroid of coefficient families over a finite simplicial set, with
// pointwise composition; face compatibility picks out the actual elements.
struct PowerAlgebroid {
    AlgebroidPtr base;
    FiniteSimplicialSet space;
    std::vector<AlgebroidPtr> level; // level[d] = base with d simplex generators

    FamilyElement zero(int a, int b) const;
    FamilyElement constant_family(const Mor& x) const;
    FamilyElement add(const FamilyElement& u, const FamilyElement& v) const;
    FamilyElement sub(const FamilyElement& u, const FamilyElement& v) const;
    FamilyElement scale_rat(const Rat& c, const FamilyElement& u) const;
    FamilyElement compose(const FamilyElement& y, const FamilyElement& x) const;
    // Value on an arbitrary simplex: degeneracy ring maps applied to the cell value.
    Mor value_of_simplex(const FamilyElement& u, const Simplex& s) const;
    Mor vertex_value(const FamilyElement& u, int vertex) const;
    // Face compatibility on every cell; throws on violation.
    void validate_element(const FamilyElement& u) const;
};

PowerAlgebroid power(AlgebroidPtr a, const FiniteSimplicialSet& x);

// Contravariant functoriality: g: X -> Y induces A^Y -> A^X.
FamilyElement pullback_family(const PowerAlgebroid& px, const PowerAlgebroid& py,
                              const SimplicialMap& g, const FamilyElement& w);

// Coordinates of one hom-module of A^X with coefficient degree <= deg.
struct FamilyCoords {
    struct Slot {
        int dim;
        int cell;
        std::string basis;
        Mono mono;
    };
    const PowerAlgebroid* pw = nullptr;
    int a = 0, b = 0, deg = 0;
    std::vector<Slot> slots;

    int dim() const { return static_cast<int>(slots.size()); }
    std::vector<Rat> to_vec(const FamilyElement& u) const;
    FamilyElement from_vec(const std::vector<Rat>& v) const;
};
FamilyCoords family_coords(const PowerAlgebroid& pw, int a, int b, int deg);
// Rows vanish exactly on face-compatible families.
Mat family_constraints(const FamilyCoords& fc);
// Basis of the face-compatible families (the honest Hom(a,b) up to degree deg).
std::vector<FamilyElement> valid_family_basis(const FamilyCoords& fc);
// Basis of ker(A^X -> A) at the basepoint, up to degree deg.
std::vector<FamilyElement> basepoint_kernel(const PowerAlgebroid& pw, int a, int b, int deg);

// Reduced sphere power Omega^n A in the glued-cube model: one morphism with
// coefficients in the loop generators q1..qn, vanishing on the cube boundary.
struct LoopPower {
    AlgebroidPtr core; // scalars carry no loop generators of their own
    int n = 0;
    AlgebroidPtr ext; // core scalars + q1..qn

    // All 2n boundary evaluations q_i = 0, 1 vanish.
    bool element_valid(const Mor& u) const;
    void require_valid(const Mor& u) const;
    // prod_i q_i (1 - q_i), the window every element is divisible by.
    Poly window() const;
    // Window-multiples basis: window * monomial * basis element, with the
    // monomial of total degree <= deg.
    std::vector<Mor> hom_basis_upto(int a, int b, int deg) const;
};
LoopPower loop_power(AlgebroidPtr core, int n);

// (Omega^m A)-then-Omega^n versus Omega^(m+n): with loop generators named
// canonically the two are the same subalgebroid, and the mutually inverse
// homomorphisms are the identity with regrouped generator bookkeeping.
struct SmashIso {
    LoopPower inner;  // Omega^m A
    LoopPower nested; // Omega^n applied on top, flattened generators
    LoopPower flat;   // Omega^(m+n) A
    AlgHom forward;   // nested -> flat
    AlgHom backward;  // flat -> nested
};
SmashIso smash_iso(AlgebroidPtr a, int m, int n);

// Coefficient-wise application of a scalar ring map; basis names are kept, so
// source and target must share one presentation over the two rings.
Mor map_coefficients(const RingMap& rm, const Mor& u);

// Exactness data of an F-split extension, materialized as linear algebra on
// coefficient coordinates.  The middle ambient space carries one more degree
// than the quotient window so splittings that raise degree by one stay inside.
// verify_exactness checks that the splitting is a section landing in the
// valid middle and that the declared kernel equals ker(surjection) there.
struct ExactnessCertificate {
    std::string label;
    BaseRing base;
    int objects = 1;
    // Coordinate data at degree bound deg for hom (a, b).
    std::function<Mat(int a, int b, int deg)> middle_valid;   // columns span the valid middle
    std::function<Mat(int a, int b, int deg)> quotient_valid; // columns: valid quotient basis
    std::function<Mat(int a, int b, int deg)> surjection;     // ambient middle -> ambient quotient
    std::function<Mat(int a, int b, int deg)> splitting;      // images of the quotient_valid columns
    std::function<Mat(int a, int b, int deg)> kernel_columns; // declared kernel generators
};
void verify_exactness(const ExactnessCertificate& e, int a, int b, int deg);

// 0 -> Omega A -> A^{Delta^1} -> A + A -> 0 with s(x,y) = (1-t)x + ty.
struct PathExtensionParts {
    AlgebroidPtr base;
    AlgebroidPtr middle; // A with the path generator t adjoined
    DirectSum quotient;
    AlgHom e0, e1; // evaluation at the endpoints, middle -> base
    ExactnessCertificate generic;

    Mor splitting(const Mor& x, const Mor& y) const;
    bool in_loop(const Mor& p) const; // both endpoint values vanish
};
PathExtensionParts path_extension_parts(AlgebroidPtr a);

// 0 -> A^{X cup_B C} -> A^X + A^C -> A^B -> 0 for a subcomplex B of X glued
// along f into C.  f is indexed by X-cells; entries outside B are ignored.
// The stored simplicial maps are for apply() only; their endpoint pointers
// are not kept alive.
struct PushoutExtensionParts {
    AlgebroidPtr base;
    FiniteSimplicialSet bspace;
    PushoutResult glued;
    PowerAlgebroid on_glued, on_x, on_c, on_b;
    SimplicialMap f_from_bspace; // bspace -> C
    SimplicialMap b_incl;        // bspace -> X
    ExactnessCertificate generic;
};
PushoutExtensionParts pushout_extension_parts(AlgebroidPtr a, const FiniteSimplicialSet& x,
                                              const std::vector<std::vector<bool>>& in_b,
                                              const FiniteSimplicialSet& c,
                                              const SimplicialMap& f);

} // namespace kkalg
