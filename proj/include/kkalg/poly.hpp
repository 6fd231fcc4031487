#pragma once

#include "kkalg/base.hpp"

#include <map>
#include <vector>

namespace kkalg {

// Monomial = exponent vector; its size always equals nvars of the ring it
// lives in, so equality and ordering are structural.
using Mono = std::vector<int>;

struct Poly {
    int nvars = 0;
    std::map<Mono, Rat> terms; // nonzero coefficients only

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Poly& o) const { return nvars == o.nvars && terms == o.terms; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    bool operator<(const Poly& o) const;
};

struct PolyRing {
    BaseRing base;
    std::vector<std::string> vars;

    int nvars() const { return static_cast<int>(vars.size()); }
    bool operator==(const PolyRing& o) const { return base == o.base && vars == o.vars; }
    bool operator!=(const PolyRing& o) const { return !(*this == o); }

    Poly zero() const;
    Poly constant(const Rat& c) const;
    Poly one() const { return constant(Rat(1)); }
    Poly var(int i) const;
    Poly var_named(const std::string& name) const;
    int var_index(const std::string& name) const; // -1 when absent

    Poly add(const Poly& a, const Poly& b) const;
    Poly sub(const Poly& a, const Poly& b) const;
    Poly neg(const Poly& a) const;
    Poly mul(const Poly& a, const Poly& b) const;
    Poly scale(const Rat& c, const Poly& a) const;
    Poly pow(const Poly& a, int k) const;

    Rat coeff(const Poly& a, const Mono& m) const;
    Rat constant_coeff(const Poly& a) const;
    int total_degree(const Poly& a) const; // -1 for zero

    // Substitute vars by index; images live in `target`.  Every variable
    // needs an image (use target.var(i) plus identity layout for renames).
    Poly substitute(const Poly& a, const PolyRing& target,
                    const std::vector<Poly>& images) const;

    // Partial evaluation at named generators; result stays in this ring.
    Poly evaluate(const Poly& a, const std::map<std::string, Rat>& assignment) const;
    Poly eval_var(const Poly& a, int i, const Rat& value) const;

    std::string str(const Poly& a) const;
};

// Ring homomorphism `from` -> `to` given by generator images.
struct RingMap {
    PolyRing from;
    PolyRing to;
    std::vector<Poly> images; // one per from.vars, each with to.nvars() slots

    Poly apply(const Poly& a) const;
    // g.then(h) applies g first, then h.
    RingMap then(const RingMap& h) const;
};

RingMap identity_map(const PolyRing& r);

// Z^{Delta^n} with the eliminated-t0 convention: free on t1..tn, t0 = 1 - sum.
PolyRing delta_ring(const BaseRing& base, int n);

// Face/degeneracy homomorphisms of the simplicial ring R^Delta.
// face(n, i): R^{Delta^n} -> R^{Delta^{n-1}}, degeneracy(n, i): -> R^{Delta^{n+1}}.
RingMap simplicial_face_map(const BaseRing& base, int n, int i);
RingMap simplicial_degeneracy_map(const BaseRing& base, int n, int i);

// External-contract element type: a polynomial bundled with its ring.
struct PolyElement {
    PolyRing ring;
    Poly p;
    bool operator==(const PolyElement& o) const { return ring == o.ring && p == o.p; }
};

enum class PolyOp { add, sub, mul };

PolyElement poly_arith(const PolyElement& a, const PolyElement& b, PolyOp op);
PolyElement evaluate(const PolyElement& a, const std::map<std::string, Rat>& assignment);
PolyElement simplicial_face(const PolyElement& a, int i);
PolyElement simplicial_degeneracy(const PolyElement& a, int i);

// All monomials in nvars variables of total degree <= d, in map key order.
std::vector<Mono> monomials_up_to(int nvars, int d);

} // namespace kkalg
