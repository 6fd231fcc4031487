#pragma once

#include "kkalg/poly.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kkalg {

// Element of Hom(src, dst): sparse coefficient vector over the named basis of
// that hom-module.  Zero coefficients are never stored, so equality is
// structural.
struct Mor {
    int src = -1;
    int dst = -1;
    std::map<std::string, Poly> coeffs;

    bool zero() const { return coeffs.empty(); }
    bool operator==(const Mor& o) const {
        return src == o.src && dst == o.dst && coeffs == o.coeffs;
    }
    bool operator!=(const Mor& o) const { return !(*this == o); }
};

// Finitely presented algebroid: finite object set, free finite hom-module
// bases, composition given by structure constants.  Basis names are globally
// unique across all hom-pairs.  With `moduloid` set there is no composition
// law and no units, only the graded modules.
struct Algebroid {
    PolyRing scalars;
    std::vector<std::string> objects;
    bool moduloid = false;
    std::map<std::pair<int, int>, std::vector<std::string>> hom_basis;
    std::map<std::string, std::pair<int, int>> basis_home; // name -> (src, dst)
    // structure[{y, x}] = coefficients of y after x; a missing key with
    // matching endpoints means the composite is zero.
    std::map<std::pair<std::string, std::string>, std::map<std::string, Poly>> structure;
    std::optional<std::vector<Mor>> units; // per object, when unital

    int object_index(const std::string& name) const;
    const std::vector<std::string>& basis(int a, int b) const;
    bool unital() const { return units.has_value(); }

    Mor zero_mor(int a, int b) const;
    Mor basis_mor(const std::string& name) const;
    Mor unit(int a) const;
    Mor add(const Mor& u, const Mor& v) const;
    Mor sub(const Mor& u, const Mor& v) const;
    Mor scale(const Poly& c, const Mor& u) const;
    Mor scale_rat(const Rat& c, const Mor& u) const;
    // y after x: defined when dst(x) = src(y).
    Mor compose(const Mor& y, const Mor& x) const;

    std::string str(const Mor& u) const;
};

using AlgebroidPtr = std::shared_ptr<const Algebroid>;

// Exhaustive well-formedness check: structure constants are well-typed,
// composition is associative on every basis triple, and the unit laws hold on
// every basis element when units are present.  Throws RingError on failure.
void check_algebroid(const Algebroid& a);

// Homomorphism determined by an object map, images of basis elements, and an
// optional scalar ring map applied to coefficients.
struct AlgHom {
    AlgebroidPtr from;
    AlgebroidPtr to;
    std::vector<int> object_map;
    std::map<std::string, Mor> images;
    std::optional<RingMap> scalar_map; // absent = identical scalar rings

    Poly map_scalar(const Poly& c) const;
    Mor apply(const Mor& u) const;
    // Shape plus compatibility with composition on all basis pairs; the
    // compatibility check is skipped for moduloid sources.
    void validate() const;
    // Unit preservation, checked separately: inclusions into direct sums and
    // corner embeddings are legitimate homomorphisms that drop units.
    void validate_units() const;
};

AlgHom identity_hom(AlgebroidPtr a);
// beta after alpha.
AlgHom compose_hom(const AlgHom& beta, const AlgHom& alpha);

// One object, hom basis {"1"} with 1*1 = 1: the scalar ring as an algebroid.
AlgebroidPtr one_object_ring_algebroid(const PolyRing& scalars,
                                       const std::string& objname = "*");
// n objects, Hom(i,j) spanned by E[j,i], composition of matrix units.
AlgebroidPtr matrix_pattern_algebroid(const PolyRing& scalars, int n);
// Same presentation over a larger polynomial ring; the old generators must be
// a prefix of the new ones.
AlgebroidPtr extend_scalars(const Algebroid& a, const PolyRing& bigger);
// Inclusion homomorphism for extend_scalars.
AlgHom scalar_extension_hom(AlgebroidPtr from, AlgebroidPtr extended);

// Objects are pairs, hom bases are basis pairs, composition is componentwise.
// Basis names of the product are tensor_basis_name of the factor names.
std::string tensor_basis_name(const std::string& x, const std::string& y);
AlgebroidPtr tensor_product(const Algebroid& a, const Algebroid& b);

struct DirectSum {
    AlgebroidPtr sum;
    AlgHom incl0, incl1; // x -> (x,0), x -> (0,x)
    AlgHom proj0, proj1; // (x,y) -> x, (x,y) -> y
};
DirectSum direct_sum_algebroid(AlgebroidPtr a);

// Forget composition and units.
AlgebroidPtr as_moduloid(const Algebroid& a);

} // namespace kkalg
