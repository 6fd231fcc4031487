#pragma once

#include "kkalg/algebroid.hpp"

namespace kkalg {

// Formal finite direct sum of objects; the empty sequence is the zero object.
struct ObjectSequence {
    std::vector<int> objs;

    int size() const { return static_cast<int>(objs.size()); }
    bool operator==(const ObjectSequence& o) const { return objs == o.objs; }
    bool operator<(const ObjectSequence& o) const { return objs < o.objs; }
};

// Morphism of the additive completion: a dst.size() x src.size() matrix whose
// (i,j) entry is an element of Hom(src[j], dst[i]).
struct MatMor {
    ObjectSequence src;
    ObjectSequence dst;
    std::vector<std::vector<Mor>> entries;

    bool operator==(const MatMor& o) const {
        return src == o.src && dst == o.dst && entries == o.entries;
    }
};

MatMor mat_zero(const Algebroid& a, const ObjectSequence& src, const ObjectSequence& dst);
MatMor mat_identity(const Algebroid& a, const ObjectSequence& s);
MatMor mat_add(const Algebroid& a, const MatMor& u, const MatMor& v);
MatMor mat_sub(const Algebroid& a, const MatMor& u, const MatMor& v);
MatMor mat_scale(const Algebroid& a, const Poly& c, const MatMor& u);
// Matrix product: y after x.
MatMor mat_compose(const Algebroid& a, const MatMor& y, const MatMor& x);
// Block sum on concatenated sequences.
MatMor mat_direct_sum(const Algebroid& a, const MatMor& u, const MatMor& v);
// Induced functor of a homomorphism, applied entrywise.
MatMor alpha_oplus(const AlgHom& h, const MatMor& u);

// The full subcategory of the additive completion on finitely many chosen
// sequences, materialized as an honest algebroid (the completion itself has
// infinitely many objects, one per sequence).
struct AdditiveCompletion {
    AlgebroidPtr base;
    std::vector<ObjectSequence> seqs;
    AlgebroidPtr alg;

    int seq_index(const ObjectSequence& s) const;
    Mor to_element(const MatMor& m) const;
    MatMor from_element(const Mor& u) const;
};
AdditiveCompletion additive_completion(AlgebroidPtr a, const std::vector<ObjectSequence>& seqs);
// Induced homomorphism between materialized completions; every image sequence
// must be present in cb.
AlgHom alpha_oplus_hom(const AdditiveCompletion& ca, const AdditiveCompletion& cb,
                       const AlgHom& h);

// Row/column label of the colimit algebra: countably many copies of each
// object, addressed by (copy, object).
struct HKey {
    long long copy = 0;
    int obj = 0;

    bool operator==(const HKey& o) const { return copy == o.copy && obj == o.obj; }
    bool operator<(const HKey& o) const {
        return copy != o.copy ? copy < o.copy : obj < o.obj;
    }
};

// Element of the colimit algebra: finitely supported matrix over HKey pairs,
// entry (r,c) in Hom(c.obj, r.obj).  Zero entries are never stored, which is
// exactly the corner-identification normal form.
struct HElem {
    std::map<std::pair<HKey, HKey>, Mor> entries;

    bool zero() const { return entries.empty(); }
    bool operator==(const HElem& o) const { return entries == o.entries; }
};

// The one-object algebra the completion colimits to; elements materialize
// lazily as finitely supported matrices.
struct ColimitAlgebra {
    AlgebroidPtr base;

    HElem zero() const { return HElem{}; }
    HElem add(const HElem& u, const HElem& v) const;
    HElem sub(const HElem& u, const HElem& v) const;
    HElem scale(const Poly& c, const HElem& u) const;
    HElem mul(const HElem& y, const HElem& x) const;
};

ColimitAlgebra colimit_algebra(AlgebroidPtr a);

// Position k of a sequence maps to copy #(occurrences of the same object
// earlier in the sequence).
std::vector<HKey> canonical_keys(const ObjectSequence& s);
HElem embed_H(const ColimitAlgebra& h, const MatMor& m);
HElem embed_H_keys(const ColimitAlgebra& h, const std::vector<HKey>& dst_keys,
                   const std::vector<HKey>& src_keys, const MatMor& m);

// Homomorphism from an algebroid into a colimit algebra.
struct HomIntoH {
    AlgebroidPtr from;
    ColimitAlgebra target;
    std::map<std::string, HElem> images;

    HElem apply(const Mor& u) const;
    void validate() const;
};

// Factorisation through the completion: per-object corner and matrix images.
struct HomIntoCompletion {
    AlgebroidPtr from;
    AlgebroidPtr to_base;
    std::vector<ObjectSequence> seq_of;    // per from-object
    std::vector<std::vector<HKey>> corner; // per from-object, parallel to seq_of
    std::map<std::string, MatMor> images;

    MatMor apply(const Mor& u) const;
    void validate() const;
};

// Every homomorphism into the colimit algebra lands in a finite corner; the
// returned factorisation re-embeds to the original on the nose.
HomIntoCompletion factor(const HomIntoH& alpha);

} // namespace kkalg
