#pragma once

#include "kkalg/completion.hpp"
#include "kkalg/loops.hpp"

namespace kkalg {

// Homomorphism with matrix values: each basis morphism of `a` goes to a
// MatMor over `b`, with shapes prescribed by one object sequence per source
// object.  Coefficients pass through scalar_map when the rings differ.
struct MatHom {
    AlgebroidPtr a;
    AlgebroidPtr b;
    std::vector<ObjectSequence> seq_of;   // per object of a
    std::map<std::string, MatMor> images; // per basis name of a
    std::optional<RingMap> scalar_map;

    Poly map_scalar(const Poly& c) const;
    MatMor apply(const Mor& u) const;
    // Image shapes against seq_of and multiplicativity on every composable
    // basis pair.  Unit preservation is not required: corner embeddings and
    // zero maps are legitimate values.
    void validate() const;
};

MatHom mat_hom_of(const AlgHom& f);
MatHom zero_mat_hom(AlgebroidPtr a, AlgebroidPtr b, const std::vector<ObjectSequence>& seq_of);
// Block-diagonal sum on shared source and target, concatenating sequences.
MatHom oplus(const MatHom& f, const MatHom& g);
bool mat_hom_equal(const MatHom& f, const MatHom& g);

// Entrywise coefficient ring map.
MatMor mat_map_coefficients(const RingMap& rm, const MatMor& m);

// Invertible family g[a]: f-block(a) -> g-block(a), one matrix per source
// object, used to conjugate one block presentation into another.
struct NaturalIsomorphism {
    std::vector<MatMor> g;
    std::vector<MatMor> ginv;
};
// Invertibility both ways and naturality g . alpha(x) = beta(x) . g on every
// basis morphism; throws on failure.
void validate_natural_iso(const MatHom& alpha, const MatHom& beta, const NaturalIsomorphism& g);

// One polynomial segment of a homotopy: a homomorphism into the target with
// one extra scalar generator adjoined, evaluated at 0 and 1 for endpoints.
struct ElementaryHomotopy {
    MatHom h;             // target carries the homotopy generator
    AlgebroidPtr plain;   // target without the generator
    int tvar = 0;         // index of the generator in h.b->scalars
    MatHom at(int end) const;
};

// Chain of segments, each ending where the next begins.
struct HomotopyCertificate {
    std::vector<ElementaryHomotopy> chain;
    MatHom start() const;
    MatHom finish() const;
};

// The rotation conjugator over b with the homotopy generator t at index
// tvar: W has blocks [(1-t^2) I, (t^3-2t) g^{-1}; t g, (1-t^2) I] and winv
// the same with the off-diagonal signs flipped.  W winv = winv W = I holds
// exactly, W is the identity at t = 0, and at t = 1 it is the block
// antidiagonal [0, -g^{-1}; g, 0].  g must already live over the extended
// algebroid bt.
struct WPair {
    MatMor w;
    MatMor winv;
};
WPair w_matrices(const Algebroid& bt, int tvar, const MatMor& g, const MatMor& ginv);

// Replay result of a certificate: failures are reported, never thrown, with
// the first offending element printed as a witness.  A passing report only
// certifies the exhibited chain; it never decides equality of classes.
struct CertificateReport {
    bool ok = true;
    std::vector<std::string> lines;
    std::string witness;
};

// Internal assembly recipe of a representative; evaluation follows it.
enum class KKKind {
    Zero,
    Explicit,            // depth 0, images populated
    Classifying,         // depth 1 fold of an F-split extension
    ClassifyingExtended, // the same fold rebased onto a completion
    Eta,                 // one classifying-map application on top of first
    Sharp,               // composition product of first and second
    Oplus,               // block sum of first and second
    DeltaOne,            // depth-1 tensor extension of first
    Permute              // coordinate permutation of the value loops of first
};

// Representative of a bivariant class: a homomorphism from the depth-fold
// tensor ideal over `a` into matrices over the target with `sphere` loop
// generators adjoined, vanishing on the boundary of the loop cube.  Values
// are computed on demand through eval(); depth-0 representatives also carry
// their images explicitly.
struct KKRepresentative {
    std::string label;
    AlgebroidPtr a;       // source base
    AlgebroidPtr b;       // target base
    AlgebroidPtr carrier; // target base with the loop generators adjoined
    int depth = 0;        // tensor-ideal layers consumed on the source side
    int sphere = 0;       // loop generators carried by values
    int k = 0;            // homotopy subdivision level
    int j_shifts = 0;     // source layers claimed by degree shifts
    int loop_shifts = 0;  // value loops claimed by degree shifts
    RingMap coeff_map;    // source scalars -> carrier scalars
    std::vector<ObjectSequence> seq_of;   // stabilization size per source object
    std::map<std::string, MatMor> images; // populated exactly when depth == 0

    KKKind kind = KKKind::Zero;
    std::shared_ptr<const KKRepresentative> first;
    std::shared_ptr<const KKRepresentative> second;
    std::shared_ptr<const KKRepresentative> pipe; // second rebased, for Sharp
    std::shared_ptr<const FSplitExtension> core;  // Classifying recipes
    std::shared_ptr<const AdditiveCompletion> comp_mid;  // source completion
    std::shared_ptr<const AdditiveCompletion> comp_base; // the same without loops
    std::shared_ptr<const TensoredContext> dsrc, ddst;   // DeltaOne recipe
    int extra = 0;        // pass-through loop generators of a rebased fold
    std::vector<int> tau; // Permute recipe, one slot per loop generator

    int half_degree() const { return depth - sphere; }
    int degree() const { return loop_shifts - j_shifts; }
    MatMor eval(const NestedElement& e) const;
    MatMor apply(const Mor& x) const; // depth 0 only
};

// Plain homomorphism views.
KKRepresentative kk_from_hom(const AlgHom& f);
KKRepresentative kk_from_mat_hom(const MatHom& f);
KKRepresentative kk_zero(AlgebroidPtr a, AlgebroidPtr b, const std::vector<ObjectSequence>& seq_of);
// Depth-1 representative folding the classifying map of an F-split
// extension with the carrier protocol; the target base is the carrier.
KKRepresentative kk_from_classifying(const FSplitExtension& ext);
// Explicit view of a depth-0, sphere-0 representative.
MatHom as_mat_hom(const KKRepresentative& r);

// Rebuild r with its source replaced by a completion of the old source.
// comp.base may carry `extra` loop generators beyond r's source scalars;
// they pass through into the first loop slots of the rebuilt carrier, ahead
// of r's own.  The rebuilt bookkeeping counts pass-through loops in sphere.
KKRepresentative kk_extend(const KKRepresentative& r, const AdditiveCompletion& comp, int extra);

// Block sum at equal bookkeeping; degree mismatch throws.
KKRepresentative oplus(const KKRepresentative& x, const KKRepresentative& y);
// One classifying-map application: depth and sphere grow together by one.
// Values gain the new loop generator; the old value reappears at its far
// endpoint, so boundary vanishing is inherited.
KKRepresentative eta_step(const KKRepresentative& r);
// Composition product: rebase the second factor onto a completion of the
// first factor's carrier, push the source element through the first factor
// pointwise, check both loop-of-ideal memberships of the middle element, and
// evaluate.  At depth and sphere zero this is literally composition.
KKRepresentative sharp(const KKRepresentative& alpha, const KKRepresentative& beta);
// Tensor the representative with the identity of c on the right, through the
// tensored classifying map at depth one.  Depth at most one.
KKRepresentative delta_map(const KKRepresentative& alpha, AlgebroidPtr c);
// Degree shift: direction "J" consumes a source layer (adding one through
// eta_step when none is spare), "loop" claims a value loop symmetrically.
KKRepresentative shift(const KKRepresentative& r, const std::string& direction);

// Rotation homotopy from diag(alpha, 0) to diag(0, beta), conjugating by the
// W matrices over the target with one homotopy generator adjoined.  Both
// algebroids must be unital and g must pass validate_natural_iso.
HomotopyCertificate w_homotopy(const MatHom& alpha, const MatHom& beta,
                               const NaturalIsomorphism& g);
HomotopyCertificate w_homotopy(const AlgHom& alpha, const AlgHom& beta,
                               const NaturalIsomorphism& g);

// Replay a homotopy chain on test elements: each segment must behave
// additively and multiplicatively on them, and consecutive endpoints must
// agree.  Decides nothing beyond the exhibited chain.
CertificateReport verify_certificate(const HomotopyCertificate& c, const std::vector<Mor>& tests);

// Mutually inverse pair up to exhibited homotopy: the two round trips,
// padded by zero blocks, are connected to the padded identities.
struct KKEquivalenceCertificate {
    KKRepresentative forward;  // over a
    KKRepresentative backward; // back over b
    HomotopyCertificate round_a;
    HomotopyCertificate round_b;
};
CertificateReport verify_certificate(const KKEquivalenceCertificate& c,
                                     const std::vector<Mor>& tests_a,
                                     const std::vector<Mor>& tests_b);

// One simplicial level of the homomorphism space at subdivision k: vertices
// are explicit homomorphisms, edges are homotopy chains of 2^k segments.
struct HomSpaceLevel {
    AlgebroidPtr a;
    AlgebroidPtr b;
    int n = 0;
    int k = 0;
    std::vector<MatHom> verts;
    std::vector<HomotopyCertificate> edges;
};
// Validates every candidate; n is capped at one.
HomSpaceLevel hom_space(AlgebroidPtr a, AlgebroidPtr b, int n, int k,
                        const std::vector<MatHom>& verts,
                        const std::vector<HomotopyCertificate>& edges);
// Face i of an edge: 0 is the far endpoint, 1 the start.
MatHom hom_face(const HomSpaceLevel& hs, int edge, int i);
// Degenerate edge on a vertex: the constant chain of 2^k segments.
HomotopyCertificate hom_degeneracy(const HomSpaceLevel& hs, int vert);

} // namespace kkalg
