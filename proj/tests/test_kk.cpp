#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kkalg/kk.hpp"

using namespace kkalg;

namespace {

PolyRing zring() { return PolyRing{BaseRing::Z(), {}}; }

TensorElement word(AlgebroidPtr a, const std::vector<std::string>& names) {
    TensorElement e = sigma(a, a->basis_mor(names[0]));
    for (size_t i = 1; i < names.size(); ++i)
        e = tensor_compose(a, e, sigma(a, a->basis_mor(names[i])));
    return e;
}

TensorElement curvature(AlgebroidPtr a) {
    return tensor_sub(a, word(a, {"1", "1"}), sigma(a, a->basis_mor("1")));
}

// q_i^2 - q_i, the edge window in the i-th loop generator.
Poly window_poly(const PolyRing& r, int i) {
    return r.sub(r.mul(r.var(i), r.var(i)), r.var(i));
}

// sigma(u) sigma(u) - sigma(u u): one kernel layer stacked on top of u.
NestedElement kernel_square(AlgebroidPtr a, const NestedElement& u) {
    NestedElement su = nested_sigma(a, u);
    return nested_sub(a, nested_compose(a, su, su),
                      nested_sigma(a, nested_compose(a, u, u)));
}

// Entrywise partial evaluation of a generator.
MatMor mat_eval(const Algebroid& a, const MatMor& m, int var, const Rat& v) {
    MatMor out = m;
    for (auto& row : out.entries)
        for (auto& e : row)
            for (auto& [nm, c] : e.coeffs) c = a.scalars.eval_var(c, var, v);
    for (auto& row : out.entries)
        for (auto& e : row) {
            Mor cleaned = a.zero_mor(e.src, e.dst);
            for (const auto& [nm, c] : e.coeffs)
                if (!c.is_zero()) cleaned.coeffs[nm] = c;
            e = cleaned;
        }
    return out;
}

} // namespace

TEST_CASE("the rotation matrices are exactly inverse and pin the endpoints") {
    auto z = one_object_ring_algebroid(zring());
    PolyRing rt{BaseRing::Z(), {"s1"}};
    auto bt = extend_scalars(*z, rt);
    ObjectSequence s1{{0}}, s2{{0, 0}};
    MatMor g = mat_identity(*bt, s1);
    WPair wp = w_matrices(*bt, 0, g, g);

    CHECK(mat_compose(*bt, wp.w, wp.winv) == mat_identity(*bt, s2));
    CHECK(mat_compose(*bt, wp.winv, wp.w) == mat_identity(*bt, s2));

    // the corner entry of w winv collapses through (1-t^2)^2 - t(t^3-2t) = 1
    CHECK(mat_eval(*bt, wp.w, 0, Rat(0)) == mat_identity(*bt, s2));
    CHECK(mat_eval(*bt, wp.winv, 0, Rat(0)) == mat_identity(*bt, s2));

    MatMor w1 = mat_eval(*bt, wp.w, 0, Rat(1));
    MatMor anti = mat_zero(*bt, s2, s2);
    anti.entries[0][1] = bt->scale_rat(Rat(-1), bt->unit(0));
    anti.entries[1][0] = bt->unit(0);
    CHECK(w1 == anti);
    MatMor winv1 = mat_eval(*bt, wp.winv, 0, Rat(1));
    CHECK(winv1 == mat_scale(*bt, bt->scalars.constant(Rat(-1)), anti));
}

TEST_CASE("the product of two plain homomorphisms is their composition") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);

    AlgHom f{z, m2, {0}, {{"1", m2->basis_mor("E[0,0]")}}, std::nullopt};
    AlgHom g{m2, m2, {1, 0}, {}, std::nullopt};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::string nm = "E[" + std::to_string(j) + "," + std::to_string(i) + "]";
            std::string sw = "E[" + std::to_string(1 - j) + "," + std::to_string(1 - i) + "]";
            g.images[nm] = m2->basis_mor(sw);
        }
    g.validate();

    KKRepresentative rf = kk_from_hom(f);
    KKRepresentative rg = kk_from_hom(g);
    KKRepresentative prod = sharp(rf, rg);
    CHECK(prod.depth == 0);
    CHECK(prod.sphere == 0);

    AlgHom gf = compose_hom(g, f);
    for (const auto& [nm, home] : z->basis_home) {
        (void)home;
        MatMor v = prod.apply(z->basis_mor(nm));
        CHECK(v.entries[0][0] == gf.images.at(nm));
    }

    // and on a bigger source, every basis element of the matrix pattern
    KKRepresentative rid = kk_from_hom(identity_hom(m2));
    KKRepresentative swid = sharp(rid, rg);
    for (const auto& [nm, home] : m2->basis_home) {
        (void)home;
        CHECK(swid.apply(m2->basis_mor(nm)).entries[0][0] == g.images.at(nm));
    }
}

TEST_CASE("the identity is neutral for the product") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));
    KKRepresentative e1 = eta_step(rid);

    NestedElement w = nested_of_tensor(curvature(z));
    MatMor direct = e1.eval(w);

    KKRepresentative left = sharp(rid, e1);
    CHECK(left.depth == 1);
    CHECK(left.sphere == 1);
    MatMor lv = left.eval(w);
    CHECK(lv.entries[0][0].coeffs == direct.entries[0][0].coeffs);

    KKRepresentative right = sharp(e1, rid);
    MatMor rv = right.eval(w);
    CHECK(rv.entries[0][0].coeffs == direct.entries[0][0].coeffs);
}

TEST_CASE("one classifying step reproduces the circle-valued homomorphism") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative r = eta_step(kk_from_hom(identity_hom(z)));
    CHECK(r.depth == 1);
    CHECK(r.sphere == 1);
    CHECK(r.half_degree() == 0);

    MatMor v = r.eval(nested_of_tensor(curvature(z)));
    LazyHomomorphism et = eta(identity_hom(z));
    LazyValue lv = et.eval(nested_of_tensor(curvature(z)));
    const FamilyElement& fam = std::get<FamilyElement>(lv);
    CHECK(v.entries[0][0] == fam.values[1][0]);

    // non-kernel elements are refused
    CHECK_THROWS_AS(r.eval(nested_of_tensor(sigma(z, z->basis_mor("1")))), RingError);
}

TEST_CASE("one classifying step of the zero map vanishes") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative zr = kk_zero(z, z, {ObjectSequence{{0}}});
    KKRepresentative ez = eta_step(zr);
    CHECK(ez.eval(nested_of_tensor(curvature(z))).entries[0][0].coeffs.empty());
    TensorElement deep = tensor_sub(z, word(z, {"1", "1", "1"}), word(z, {"1", "1"}));
    CHECK(ez.eval(nested_of_tensor(deep)).entries[0][0].coeffs.empty());
}

TEST_CASE("block sums stack images diagonally") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));
    KKRepresentative z2 = kk_zero(z, z, {ObjectSequence{{0, 0}}});

    KKRepresentative s = oplus(rid, z2);
    MatMor m = s.apply(z->basis_mor("1"));
    CHECK(m.src.size() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == 0 && j == 0)
                CHECK(m.entries[i][j] == z->basis_mor("1"));
            else
                CHECK(m.entries[i][j].coeffs.empty());
        }

    KKRepresentative zz = oplus(z2, z2);
    KKRepresentative z4 = kk_zero(z, z, {ObjectSequence{{0, 0, 0, 0}}});
    CHECK(zz.images.at("1") == z4.images.at("1"));

    // block sums of distinct degrees are refused
    CHECK_THROWS_AS(oplus(rid, eta_step(rid)), RingError);
}

TEST_CASE("block sums stay multiplicative") {
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    AlgHom g{m2, m2, {1, 0}, {}, std::nullopt};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::string nm = "E[" + std::to_string(j) + "," + std::to_string(i) + "]";
            std::string sw = "E[" + std::to_string(1 - j) + "," + std::to_string(1 - i) + "]";
            g.images[nm] = m2->basis_mor(sw);
        }
    KKRepresentative s = oplus(kk_from_hom(identity_hom(m2)), kk_from_hom(g));
    MatHom h = as_mat_hom(s);
    CHECK_NOTHROW(h.validate());
    Mor x = m2->basis_mor("E[1,0]");
    Mor y = m2->basis_mor("E[0,1]");
    CHECK(h.apply(m2->compose(y, x)) == mat_compose(*m2, h.apply(y), h.apply(x)));
}

TEST_CASE("iterated classifying steps accumulate window powers") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));
    KKRepresentative three = eta_step(eta_step(eta_step(rid)));
    CHECK(three.depth == 3);
    CHECK(three.sphere == 3);
    CHECK(three.half_degree() == 0);

    NestedElement w = nested_of_tensor(curvature(z));
    NestedElement e2 = kernel_square(z, w);
    NestedElement e3 = kernel_square(z, e2);

    // each layer doubles the exposure of the inner windows and contributes
    // its own: the value is (q3^2-q3)(q2^2-q2)^2(q1^2-q1)^4
    const PolyRing& cr = three.carrier->scalars;
    REQUIRE(cr.nvars() == 3);
    Poly expect = cr.mul(window_poly(cr, 2),
                         cr.mul(cr.pow(window_poly(cr, 1), 2), cr.pow(window_poly(cr, 0), 4)));
    MatMor v = three.eval(e3);
    REQUIRE(v.entries[0][0].coeffs.count("1") == 1);
    CHECK(v.entries[0][0].coeffs.at("1") == expect);

    // one more layer runs past the depth a zero test can certify
    KKRepresentative four = eta_step(three);
    NestedElement e4 = kernel_square(z, e3);
    CHECK_THROWS_AS(four.eval(e4), RingError);
}

TEST_CASE("the product of two classifying steps is the double step") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));
    KKRepresentative one = eta_step(rid);
    KKRepresentative two = eta_step(one);
    KKRepresentative prod = sharp(one, one);
    CHECK(prod.depth == 2);
    CHECK(prod.sphere == 2);
    CHECK(prod.half_degree() == 0);

    NestedElement e2 = kernel_square(z, nested_of_tensor(curvature(z)));
    MatMor lhs = prod.eval(e2);
    MatMor rhs = two.eval(e2);
    REQUIRE(lhs.src.size() == 1);
    CHECK(lhs.entries[0][0].coeffs == rhs.entries[0][0].coeffs);

    const PolyRing& cr = prod.carrier->scalars;
    REQUIRE(cr.nvars() == 2);
    Poly expect = cr.mul(window_poly(cr, 1), cr.pow(window_poly(cr, 0), 2));
    CHECK(lhs.entries[0][0].coeffs.at("1") == expect);
}

TEST_CASE("the product is associative across mixed degrees") {
    auto z = one_object_ring_algebroid(zring());
    FSplitExtension pe = path_extension(z);
    AlgebroidPtr quot = pe.quotient;

    // corner embedding of the scalars into the two-ended quotient
    MatHom am;
    am.a = z;
    am.b = quot;
    am.seq_of = {ObjectSequence{{0}}};
    MatMor a1 = mat_zero(*quot, ObjectSequence{{0}}, ObjectSequence{{0}});
    a1.entries[0][0] = quot->basis_mor("1#0");
    am.images["1"] = a1;
    am.validate();
    KKRepresentative ra = kk_from_mat_hom(am);

    KKRepresentative rb = eta_step(kk_from_classifying(pe));
    CHECK(rb.depth == 2);
    CHECK(rb.sphere == 1);

    // evaluation of the path generator at 2
    MatHom gm;
    gm.a = pe.carrier;
    gm.b = z;
    gm.seq_of = {ObjectSequence{{0}}};
    MatMor g1 = mat_zero(*z, ObjectSequence{{0}}, ObjectSequence{{0}});
    g1.entries[0][0] = z->unit(0);
    gm.images["1"] = g1;
    gm.scalar_map = RingMap{pe.carrier->scalars, z->scalars, {z->scalars.constant(Rat(2))}};
    gm.validate();
    KKRepresentative rc = kk_from_mat_hom(gm);

    KKRepresentative left = sharp(sharp(ra, rb), rc);
    KKRepresentative right = sharp(ra, sharp(rb, rc));
    CHECK(left.depth == 2);
    CHECK(left.sphere == 1);
    CHECK(right.depth == 2);
    CHECK(right.sphere == 1);

    NestedElement w = nested_of_tensor(curvature(z));
    NestedElement e2 = kernel_square(z, w);
    NestedElement sw = nested_sigma(z, w);
    NestedElement sww = nested_sigma(z, nested_compose(z, w, w));
    NestedElement comm = nested_sub(z, nested_compose(z, sww, sw), nested_compose(z, sw, sww));

    MatMor lv = left.eval(e2);
    MatMor rv = right.eval(e2);
    CHECK(lv.entries[0][0].coeffs == rv.entries[0][0].coeffs);
    CHECK(left.eval(comm).entries[0][0].coeffs == right.eval(comm).entries[0][0].coeffs);

    // the split (1-t) x at one end squares through gamma: t -> 2 into a 4
    const PolyRing& cr = left.carrier->scalars;
    REQUIRE(cr.nvars() == 1);
    Poly expect = cr.scale(Rat(4), window_poly(cr, 0));
    REQUIRE(lv.entries[0][0].coeffs.count("1") == 1);
    CHECK(lv.entries[0][0].coeffs.at("1") == expect);
}

TEST_CASE("tensoring with an identity acts on the second factor by name") {
    auto z = one_object_ring_algebroid(zring());
    auto c = matrix_pattern_algebroid(zring(), 2);
    KKRepresentative rid = kk_from_hom(identity_hom(z));

    // depth zero: delta of the identity is the identity of the product
    KKRepresentative d0 = delta_map(rid, c);
    CHECK(d0.depth == 0);
    AlgebroidPtr prod = d0.a;
    CHECK(prod->objects.size() == 2);
    for (const auto& [nm, home] : prod->basis_home) {
        (void)home;
        MatMor v = d0.apply(prod->basis_mor(nm));
        CHECK(v.entries[0][0] == prod->basis_mor(nm));
    }

    // the tensor extension commutes with the product at degree zero
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    AlgHom f{z, m2, {0}, {{"1", m2->basis_mor("E[0,0]")}}, std::nullopt};
    f.validate();
    AlgHom g{m2, m2, {1, 0}, {}, std::nullopt};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::string nm = "E[" + std::to_string(j) + "," + std::to_string(i) + "]";
            std::string sw = "E[" + std::to_string(1 - j) + "," + std::to_string(1 - i) + "]";
            g.images[nm] = m2->basis_mor(sw);
        }
    g.validate();
    KKRepresentative rf = kk_from_hom(f);
    KKRepresentative rg = kk_from_hom(g);
    KKRepresentative lhs = sharp(delta_map(rf, c), delta_map(rg, c));
    KKRepresentative rhs = delta_map(sharp(rf, rg), c);
    CHECK(mat_hom_equal(as_mat_hom(lhs), as_mat_hom(rhs)));

    // depth one: the loop value tensors with the untouched name
    KKRepresentative d1 = delta_map(eta_step(rid), c);
    CHECK(d1.depth == 1);
    CHECK(d1.sphere == 1);
    AlgebroidPtr dp = d1.a;
    std::string p = tensor_basis_name("1", "E[0,0]");
    TensorElement e = tensor_sub(dp, word(dp, {p, p}), sigma(dp, dp->basis_mor(p)));
    MatMor v = d1.eval(nested_of_tensor(e));
    const PolyRing& cr = d1.carrier->scalars;
    REQUIRE(cr.nvars() == 1);
    REQUIRE(v.entries[0][0].coeffs.size() == 1);
    CHECK(v.entries[0][0].coeffs.at(p) == window_poly(cr, 0));

    // a round trip through the off-diagonal lands on the same name
    std::string p01 = tensor_basis_name("1", "E[0,1]");
    std::string p10 = tensor_basis_name("1", "E[1,0]");
    TensorElement loop = tensor_sub(dp, word(dp, {p10, p01}), sigma(dp, dp->basis_mor(p)));
    MatMor lv = d1.eval(nested_of_tensor(loop));
    REQUIRE(lv.entries[0][0].coeffs.size() == 1);
    CHECK(lv.entries[0][0].coeffs.at(p) == window_poly(cr, 0));

    CHECK_THROWS_AS(delta_map(eta_step(eta_step(rid)), c), RingError);
}

TEST_CASE("degree shifts pair a new layer with a new loop") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));

    KKRepresentative lo = shift(rid, "loop");
    CHECK(lo.degree() == 1);
    CHECK(lo.depth == 1);
    CHECK(lo.sphere == 1);
    KKRepresentative jo = shift(rid, "J");
    CHECK(jo.degree() == -1);
    CHECK(jo.depth == 1);

    NestedElement w = nested_of_tensor(curvature(z));
    MatMor lv = lo.eval(w);
    MatMor jv = jo.eval(w);
    const PolyRing& cr = lo.carrier->scalars;
    CHECK(lv.entries[0][0].coeffs.at("1") == window_poly(cr, 0));
    CHECK(lv.entries[0][0].coeffs == jv.entries[0][0].coeffs);

    // vertex evaluations vanish: the value is a genuine loop
    for (int end = 0; end < 2; ++end) {
        MatMor ev = mat_eval(*lo.carrier, lv, 0, Rat(end));
        CHECK(ev.entries[0][0].coeffs.empty());
    }

    // opposite shifts share one spare layer before a new step is taken
    KKRepresentative mixed = shift(jo, "loop");
    CHECK(mixed.degree() == 0);
    CHECK(mixed.depth == 1);
    CHECK(mixed.sphere == 1);
    CHECK(mixed.eval(w).entries[0][0].coeffs == jv.entries[0][0].coeffs);

    // a second loop shift matches the double classifying step
    KKRepresentative lo2 = shift(lo, "loop");
    CHECK(lo2.degree() == 2);
    NestedElement e2 = kernel_square(z, w);
    KKRepresentative two = eta_step(eta_step(rid));
    MatMor dv = lo2.eval(e2);
    CHECK(dv.entries[0][0].coeffs == two.eval(e2).entries[0][0].coeffs);

    // the double value is a two-loop element under the regrouping reading
    SmashIso si = smash_iso(z, 1, 1);
    CHECK_NOTHROW(si.flat.require_valid(dv.entries[0][0]));

    CHECK_THROWS_AS(shift(rid, "suspension"), RingError);
}

TEST_CASE("the rotation homotopy connects the two corner embeddings") {
    auto z = one_object_ring_algebroid(zring());
    MatHom idm = mat_hom_of(identity_hom(z));
    ObjectSequence s1{{0}};
    MatMor one = mat_identity(*z, s1);
    NaturalIsomorphism g{{one}, {one}};
    HomotopyCertificate cert = w_homotopy(idm, idm, g);
    REQUIRE(cert.chain.size() == 1);

    MatHom top = oplus(idm, zero_mat_hom(z, z, {s1}));
    MatHom bot = oplus(zero_mat_hom(z, z, {s1}), idm);
    CHECK(mat_hom_equal(cert.start(), top));
    CHECK(mat_hom_equal(cert.finish(), bot));

    // conjugating diag(x, 0) spells out the four rotation entries
    const ElementaryHomotopy& seg = cert.chain[0];
    const PolyRing& rt = seg.h.b->scalars;
    Poly t = rt.var(seg.tvar);
    Poly omt2 = rt.sub(rt.one(), rt.mul(t, t));
    Poly tm = rt.sub(rt.scale(Rat(2), t), rt.pow(t, 3));
    const MatMor& im = seg.h.images.at("1");
    auto cf = [&](int i, int j) {
        auto it = im.entries[i][j].coeffs.find("1");
        return it == im.entries[i][j].coeffs.end() ? rt.zero() : it->second;
    };
    CHECK(cf(0, 0) == rt.mul(omt2, omt2));
    CHECK(cf(0, 1) == rt.mul(omt2, tm));
    CHECK(cf(1, 0) == rt.mul(t, omt2));
    CHECK(cf(1, 1) == rt.mul(t, tm));

    std::vector<Mor> tests{z->unit(0), z->scale_rat(Rat(2), z->unit(0))};
    CertificateReport rep = verify_certificate(cert, tests);
    CHECK(rep.ok);
    CHECK(rep.witness.empty());

    // the plain homomorphism overload agrees
    HomotopyCertificate cert2 = w_homotopy(identity_hom(z), identity_hom(z), g);
    CHECK(mat_hom_equal(cert2.start(), top));
    CHECK(mat_hom_equal(cert2.finish(), bot));
}

TEST_CASE("a transformation without inverse or naturality is refused") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    ObjectSequence s1{{0}};
    MatHom idm = mat_hom_of(identity_hom(z));

    NaturalIsomorphism flat{{mat_zero(*z, s1, s1)}, {mat_zero(*z, s1, s1)}};
    CHECK_THROWS_AS(w_homotopy(idm, idm, flat), RingError);

    // identity conjugators are not natural between the swap and the identity
    AlgHom g{m2, m2, {1, 0}, {}, std::nullopt};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::string nm = "E[" + std::to_string(j) + "," + std::to_string(i) + "]";
            std::string sw = "E[" + std::to_string(1 - j) + "," + std::to_string(1 - i) + "]";
            g.images[nm] = m2->basis_mor(sw);
        }
    g.validate();
    MatHom gm = mat_hom_of(g);
    MatHom im2 = mat_hom_of(identity_hom(m2));
    NaturalIsomorphism wrong{
        {mat_identity(*m2, ObjectSequence{{1}}), mat_identity(*m2, ObjectSequence{{0}})},
        {mat_identity(*m2, ObjectSequence{{1}}), mat_identity(*m2, ObjectSequence{{0}})}};
    CHECK_THROWS_AS(w_homotopy(im2, gm, wrong), RingError);
}

TEST_CASE("certificate replay rejects corruption and empty chains") {
    auto z = one_object_ring_algebroid(zring());
    MatHom idm = mat_hom_of(identity_hom(z));
    ObjectSequence s1{{0}};
    MatMor one = mat_identity(*z, s1);
    NaturalIsomorphism g{{one}, {one}};
    HomotopyCertificate cert = w_homotopy(idm, idm, g);
    std::vector<Mor> tests{z->unit(0), z->scale_rat(Rat(2), z->unit(0))};
    CHECK(verify_certificate(cert, tests).ok);

    // a shifted image is no longer multiplicative on the unit
    HomotopyCertificate bad = cert;
    MatMor& im = bad.chain[0].h.images.at("1");
    im.entries[0][0] = bad.chain[0].h.b->add(im.entries[0][0], bad.chain[0].h.b->unit(0));
    CertificateReport rep = verify_certificate(bad, tests);
    CHECK(!rep.ok);
    CHECK(!rep.witness.empty());
    CHECK(!rep.lines.empty());

    CHECK(!verify_certificate(HomotopyCertificate{}, tests).ok);
}

TEST_CASE("an exhibited equivalence replays and corruption is refused") {
    auto z = one_object_ring_algebroid(zring());
    KKRepresentative rid = kk_from_hom(identity_hom(z));
    MatHom idm = mat_hom_of(identity_hom(z));
    HomSpaceLevel hs0 = hom_space(z, z, 0, 0, {idm}, {});
    HomotopyCertificate steady = hom_degeneracy(hs0, 0);

    KKEquivalenceCertificate eq{rid, rid, steady, steady};
    std::vector<Mor> tests{z->unit(0)};
    CertificateReport rep = verify_certificate(eq, tests, tests);
    CHECK(rep.ok);
    bool guarded = false;
    for (const auto& l : rep.lines)
        if (l.find("not decided") != std::string::npos) guarded = true;
    CHECK(guarded);

    // a chain sitting at the zero map does not start at the round trip
    MatHom zm = zero_mat_hom(z, z, {ObjectSequence{{0}}});
    HomSpaceLevel hz = hom_space(z, z, 0, 0, {zm}, {});
    KKEquivalenceCertificate bad{rid, rid, hom_degeneracy(hz, 0), steady};
    CertificateReport brep = verify_certificate(bad, tests, tests);
    CHECK(!brep.ok);
    CHECK(!brep.witness.empty());
}

TEST_CASE("one simplicial level of the homomorphism space holds together") {
    auto z = one_object_ring_algebroid(zring());
    MatHom idm = mat_hom_of(identity_hom(z));
    ObjectSequence s1{{0}};
    MatMor one = mat_identity(*z, s1);
    NaturalIsomorphism g{{one}, {one}};
    HomotopyCertificate rot = w_homotopy(idm, idm, g);
    MatHom st = rot.start();
    MatHom fi = rot.finish();

    HomSpaceLevel edge1 = hom_space(z, z, 1, 0, {st, fi}, {rot});
    CHECK(mat_hom_equal(hom_face(edge1, 0, 0), fi));
    CHECK(mat_hom_equal(hom_face(edge1, 0, 1), st));

    // a subdivided edge: the rotation segment then a steady tail
    HomSpaceLevel at_fi = hom_space(z, z, 0, 0, {fi}, {});
    HomotopyCertificate tail = hom_degeneracy(at_fi, 0);
    HomotopyCertificate two = rot;
    two.chain.push_back(tail.chain[0]);
    HomSpaceLevel edge2 = hom_space(z, z, 1, 1, {st, fi}, {two});
    CHECK(mat_hom_equal(hom_face(edge2, 0, 0), fi));
    CHECK(mat_hom_equal(hom_face(edge2, 0, 1), st));

    // degeneracies are steady chains of the right length with equal faces
    HomotopyCertificate deg = hom_degeneracy(edge2, 0);
    CHECK(deg.chain.size() == 2);
    CHECK(mat_hom_equal(deg.start(), st));
    CHECK(mat_hom_equal(deg.finish(), st));
    CHECK(verify_certificate(deg, {z->unit(0)}).ok);

    CHECK_THROWS_AS(hom_space(z, z, 2, 0, {}, {}), RingError);
    CHECK_THROWS_AS(hom_space(z, z, 0, 0, {idm}, {rot}), RingError);
    CHECK_THROWS_AS(hom_space(z, z, 1, 1, {st, fi}, {rot}), RingError);
}

TEST_CASE("swapping block summands is an exhibited homotopy") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    AlgHom f{z, m2, {0}, {{"1", m2->basis_mor("E[0,0]")}}, std::nullopt};
    f.validate();
    MatHom fm = mat_hom_of(f);
    MatHom zm = zero_mat_hom(z, m2, {ObjectSequence{{1}}});
    MatHom ab = oplus(fm, zm);
    MatHom ba = oplus(zm, fm);

    // the conjugator swaps the two blocks with identity entries
    MatMor g = mat_zero(*m2, ObjectSequence{{0, 1}}, ObjectSequence{{1, 0}});
    g.entries[0][1] = m2->unit(1);
    g.entries[1][0] = m2->unit(0);
    MatMor ginv = mat_zero(*m2, ObjectSequence{{1, 0}}, ObjectSequence{{0, 1}});
    ginv.entries[0][1] = m2->unit(0);
    ginv.entries[1][0] = m2->unit(1);
    NaturalIsomorphism sw{{g}, {ginv}};
    HomotopyCertificate cert = w_homotopy(ab, ba, sw);

    std::vector<Mor> tests{z->unit(0), z->scale_rat(Rat(3), z->unit(0))};
    CHECK(verify_certificate(cert, tests).ok);
    CHECK(mat_hom_equal(cert.start(), oplus(ab, zero_mat_hom(z, m2, {ObjectSequence{{1, 0}}}))));
    CHECK(mat_hom_equal(cert.finish(), oplus(zero_mat_hom(z, m2, {ObjectSequence{{0, 1}}}), ba)));
}
