#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kkalg/power.hpp"

#include <random>

using namespace kkalg;

namespace {

PolyRing zring() { return PolyRing{BaseRing::Z(), {}}; }

AlgebroidPtr zalg() { return one_object_ring_algebroid(zring()); }

bool same_map(const RingMap& f, const RingMap& g) {
    return f.from == g.from && f.to == g.to && f.images == g.images;
}

// Split a morphism over the flattened loop ring into inner-ring coefficients
// indexed by the monomials in the outer generators.
std::map<Mono, Mor> outer_coefficients(const LoopPower& outer, const Mor& u) {
    int ni = outer.core->scalars.nvars();
    int nn = outer.n;
    std::map<Mono, std::map<std::string, Poly>> acc;
    for (const auto& [name, c] : u.coeffs)
        for (const auto& [mono, r] : c.terms) {
            Mono om(mono.begin() + ni, mono.end());
            REQUIRE(static_cast<int>(om.size()) == nn);
            Mono im(mono.begin(), mono.begin() + ni);
            Poly& p = acc[om][name];
            p.nvars = ni;
            p.terms[im] = r;
        }
    std::map<Mono, Mor> out;
    for (auto& [om, coeffs] : acc) {
        Mor m;
        m.src = u.src;
        m.dst = u.dst;
        m.coeffs = std::move(coeffs);
        out[om] = std::move(m);
    }
    return out;
}

} // namespace

TEST_CASE("extended maps with no coefficient prefix are the plain simplicial maps") {
    PolyRing empty = zring();
    for (int n = 1; n <= 3; ++n)
        for (int i = 0; i <= n; ++i)
            CHECK(same_map(extended_face_map(empty, n, i),
                           simplicial_face_map(BaseRing::Z(), n, i)));
    for (int n = 0; n <= 2; ++n)
        for (int i = 0; i <= n; ++i)
            CHECK(same_map(extended_degeneracy_map(empty, n, i),
                           simplicial_degeneracy_map(BaseRing::Z(), n, i)));
}

TEST_CASE("extended maps satisfy the simplicial identities over a prefix") {
    PolyRing prefix{BaseRing::Z(), {"u"}};
    auto fm = [&](int d, int i) { return extended_face_map(prefix, d, i); };
    auto dm = [&](int d, int i) { return extended_degeneracy_map(prefix, d, i); };
    for (int d = 2; d <= 3; ++d)
        for (int j = 1; j <= d; ++j)
            for (int i = 0; i < j; ++i)
                CHECK(same_map(fm(d, j).then(fm(d - 1, i)), fm(d, i).then(fm(d - 1, j - 1))));
    for (int d = 0; d <= 3; ++d)
        for (int j = 0; j <= d; ++j)
            for (int i = 0; i <= j; ++i)
                CHECK(same_map(dm(d, j).then(dm(d + 1, i)), dm(d, i).then(dm(d + 1, j + 1))));
    for (int d = 1; d <= 3; ++d)
        for (int j = 0; j <= d; ++j) {
            CHECK(same_map(dm(d, j).then(fm(d + 1, j)), identity_map(delta_extension(prefix, d))));
            CHECK(same_map(dm(d, j).then(fm(d + 1, j + 1)),
                           identity_map(delta_extension(prefix, d))));
            for (int i = 0; i < j; ++i)
                CHECK(same_map(dm(d, j).then(fm(d + 1, i)), fm(d, i).then(dm(d - 1, j - 1))));
            for (int i = j + 2; i <= d + 1; ++i)
                CHECK(same_map(dm(d, j).then(fm(d + 1, i)), fm(d, i - 1).then(dm(d - 1, j))));
        }
}

TEST_CASE("the power algebroid over a point is the base") {
    auto a = one_object_ring_algebroid(PolyRing{BaseRing::Z(), {"u"}});
    PowerAlgebroid pw = power(a, point_complex());
    CHECK(pw.level.size() == 1);
    CHECK(pw.level[0]->scalars == a->scalars);
    FamilyCoords fc = family_coords(pw, 0, 0, 2);
    CHECK(fc.dim() == 3); // 1, u, u^2
    auto basis = valid_family_basis(fc);
    CHECK(basis.size() == 3);
    Mor x = a->scale(a->scalars.var(0), a->unit(0));
    FamilyElement u = pw.constant_family(x);
    pw.validate_element(u);
    CHECK(pw.vertex_value(u, 0) == x);
    CHECK(fc.from_vec(fc.to_vec(u)) == u);
}

TEST_CASE("a family on the interval is pinned by its edge value") {
    auto a = zalg();
    FiniteSimplicialSet x = delta_complex(1);
    PowerAlgebroid pw = power(a, x);
    const PolyRing& r1 = pw.level[1]->scalars;
    Poly t = r1.var(0);
    FamilyElement u = pw.zero(0, 0);
    u.values[1][0] = Mor{0, 0, {{"1", r1.mul(t, t)}}};
    // d_1 drops vertex 1, so face 0 of the edge is vertex 1 where t = 1.
    u.values[0][1] = Mor{0, 0, {{"1", pw.level[0]->scalars.one()}}};
    pw.validate_element(u);
    CHECK(pw.vertex_value(u, 0).zero());

    FamilyElement broken = u;
    broken.values[0][0] = Mor{0, 0, {{"1", pw.level[0]->scalars.one()}}};
    CHECK_THROWS_AS(pw.validate_element(broken), RingError);

    // The degenerate edge over a vertex takes the constant vertex value.
    Mor on_degenerate = pw.value_of_simplex(u, degenerate_point(1, 1));
    CHECK(on_degenerate == Mor{0, 0, {{"1", r1.one()}}});
}

TEST_CASE("families on the circle have matching endpoint evaluations") {
    auto a = zalg();
    PowerAlgebroid pw = power(a, circle_complex());
    FamilyCoords fc = family_coords(pw, 0, 0, 3);
    CHECK(fc.dim() == 5);
    auto basis = valid_family_basis(fc);
    CHECK(basis.size() == 3);
    for (const auto& u : basis) {
        const Poly& edge = u.values[1][0].coeffs.count("1")
                               ? u.values[1][0].coeffs.at("1")
                               : pw.level[1]->scalars.zero();
        const PolyRing& r1 = pw.level[1]->scalars;
        CHECK(r1.eval_var(edge, 0, Rat(0)) == r1.eval_var(edge, 0, Rat(1)));
    }

    auto loops = basepoint_kernel(pw, 0, 0, 3);
    CHECK(loops.size() == 2);
    const PolyRing& r1 = pw.level[1]->scalars;
    std::vector<std::vector<Rat>> got;
    for (const auto& u : loops) {
        CHECK(u.values[0][0].zero());
        const Poly& edge = u.values[1][0].coeffs.at("1");
        CHECK(r1.eval_var(edge, 0, Rat(0)).is_zero());
        CHECK(r1.eval_var(edge, 0, Rat(1)).is_zero());
        std::vector<Rat> v(4, Rat(0));
        for (const auto& [mono, c] : edge.terms) v[mono[0]] = c;
        got.push_back(v);
    }
    // Multiples of t^2 - t within degree 3: spanned by t^2 - t and t^3 - t^2.
    std::vector<std::vector<Rat>> expect = {{Rat(0), Rat(-1), Rat(1), Rat(0)},
                                            {Rat(0), Rat(0), Rat(-1), Rat(1)}};
    CHECK(spans_equal(BaseRing::Z(), got, expect, 4));
}

TEST_CASE("loop power elements are exactly the window multiples") {
    auto a = zalg();
    LoopPower lp = loop_power(a, 1);
    CHECK(lp.ext->scalars.vars == std::vector<std::string>{"q1"});
    const PolyRing& r = lp.ext->scalars;
    Poly q = r.var(0);
    Poly w = r.sub(q, r.mul(q, q));
    CHECK(lp.window() == w);
    CHECK(lp.element_valid(Mor{0, 0, {{"1", w}}}));
    CHECK(!lp.element_valid(Mor{0, 0, {{"1", q}}}));
    CHECK_THROWS_AS(lp.require_valid(Mor{0, 0, {{"1", q}}}), RingError);
    auto hb = lp.hom_basis_upto(0, 0, 1);
    CHECK(hb.size() == 2);
    for (const auto& m : hb) lp.require_valid(m);

    LoopPower lp2 = loop_power(a, 2);
    CHECK(lp2.ext->scalars.vars == std::vector<std::string>{"q1", "q2"});
    const PolyRing& r2 = lp2.ext->scalars;
    Poly q1 = r2.var(0), q2 = r2.var(1);
    Poly w1 = r2.sub(q1, r2.mul(q1, q1));
    Poly w2 = r2.sub(q2, r2.mul(q2, q2));
    CHECK(lp2.window() == r2.mul(w1, w2));
    CHECK(lp2.element_valid(Mor{0, 0, {{"1", lp2.window()}}}));
    CHECK(!lp2.element_valid(Mor{0, 0, {{"1", w1}}}));
    CHECK(!lp2.element_valid(Mor{0, 0, {{"1", w2}}}));

    LoopPower lp0 = loop_power(a, 0);
    CHECK(lp0.window() == a->scalars.one());
    CHECK(lp0.element_valid(a->unit(0)));
}

TEST_CASE("circle loops match the one-variable loop power") {
    auto a = zalg();
    PowerAlgebroid pw = power(a, circle_complex());
    LoopPower lp = loop_power(a, 1);
    for (int window = 2; window <= 4; ++window) {
        auto fam = basepoint_kernel(pw, 0, 0, window);
        CHECK(fam.size() == monomials_up_to(1, window - 2).size());
        RingMap rename{pw.level[1]->scalars, lp.ext->scalars, {lp.ext->scalars.var(0)}};
        for (const auto& u : fam)
            lp.require_valid(map_coefficients(rename, u.values[1][0]));
    }
}

TEST_CASE("iterated loop powers flatten onto the flat loop power") {
    auto a = zalg();
    SmashIso s = smash_iso(a, 1, 1);
    CHECK(s.flat.ext->scalars.vars == std::vector<std::string>{"q1", "q2"});
    CHECK(s.nested.ext->scalars == s.flat.ext->scalars);
    s.forward.validate();
    s.backward.validate();
    s.forward.validate_units();
    AlgHom round = compose_hom(s.backward, s.forward);
    for (const auto& [name, home] : s.nested.ext->basis_home) {
        (void)home;
        CHECK(round.apply(s.nested.ext->basis_mor(name)) == s.nested.ext->basis_mor(name));
    }

    const PolyRing& r = s.flat.ext->scalars;
    Poly q1 = r.var(0), q2 = r.var(1);
    Poly w1 = r.sub(q1, r.mul(q1, q1));
    Poly w2 = r.sub(q2, r.mul(q2, q2));
    std::vector<Poly> candidates = {r.mul(w1, w2),
                                    w1,
                                    w2,
                                    r.mul(r.mul(w1, w2), q1),
                                    r.one(),
                                    r.mul(q1, q2)};
    for (const auto& p : candidates) {
        Mor u{0, 0, {}};
        if (!p.is_zero()) u.coeffs["1"] = p;
        bool flat_ok = s.flat.element_valid(u);
        bool nested_ok = s.nested.element_valid(u);
        if (nested_ok)
            for (const auto& [om, inner_m] : outer_coefficients(s.nested, u)) {
                (void)om;
                if (!s.inner.element_valid(inner_m)) nested_ok = false;
            }
        CHECK(flat_ok == nested_ok);
    }
}

TEST_CASE("smashing with the zero sphere changes nothing") {
    auto a = zalg();
    SmashIso s = smash_iso(a, 0, 1);
    CHECK(s.inner.ext->scalars == a->scalars);
    CHECK(s.nested.ext->scalars == s.flat.ext->scalars);
    CHECK(s.forward.apply(s.nested.ext->basis_mor("1")) == s.flat.ext->basis_mor("1"));
    SmashIso s2 = smash_iso(a, 1, 0);
    CHECK(s2.nested.ext->scalars == s2.flat.ext->scalars);
    CHECK(s2.flat.ext->scalars.vars == std::vector<std::string>{"q1"});
}

TEST_CASE("the reduced zero-sphere power is one extra copy of the base") {
    auto a = one_object_ring_algebroid(PolyRing{BaseRing::Z(), {"u"}});
    PowerAlgebroid pw = power(a, sphere_complex(0));
    auto basis = valid_family_basis(family_coords(pw, 0, 0, 1));
    CHECK(basis.size() == 4); // two vertices, coefficients 1 and u
    auto reduced = basepoint_kernel(pw, 0, 0, 1);
    CHECK(reduced.size() == 2); // the non-basepoint copy of the base
    for (const auto& u : reduced) CHECK(u.values[0][0].zero());
}

TEST_CASE("path extension evaluations agree with the splitting") {
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    PathExtensionParts pe = path_extension_parts(m2);
    pe.e0.validate();
    pe.e1.validate();
    pe.e0.validate_units();
    pe.e1.validate_units();

    std::mt19937_64 eng(7);
    auto random_mor = [&](int src, int dst) {
        Mor m = m2->zero_mor(src, dst);
        for (const auto& name : m2->basis(src, dst)) {
            long long c = static_cast<long long>(eng() % 7) - 3;
            if (c != 0) m.coeffs[name] = m2->scalars.constant(Rat(c));
        }
        return m;
    };
    for (int trial = 0; trial < 20; ++trial) {
        int src = static_cast<int>(eng() % 2);
        int dst = static_cast<int>(eng() % 2);
        Mor x = random_mor(src, dst);
        Mor y = random_mor(src, dst);
        Mor s = pe.splitting(x, y);
        CHECK(pe.e0.apply(s) == x);
        CHECK(pe.e1.apply(s) == y);
        CHECK(pe.in_loop(pe.middle->sub(s, s)));
    }

    auto za = zalg();
    PathExtensionParts pz = path_extension_parts(za);
    Mor s10 = pz.splitting(za->unit(0), za->zero_mor(0, 0));
    Mor curvature = pz.middle->sub(pz.middle->compose(s10, s10), s10);
    const PolyRing& mid = pz.middle->scalars;
    Poly t = mid.var(0);
    CHECK(curvature == Mor{0, 0, {{"1", mid.sub(mid.mul(t, t), t)}}});
    CHECK(pz.in_loop(curvature));
}

TEST_CASE("the path extension is exact on coefficient coordinates") {
    auto za = zalg();
    PathExtensionParts pz = path_extension_parts(za);
    for (int deg = 1; deg <= 3; ++deg) verify_exactness(pz.generic, 0, 0, deg);

    auto m2 = matrix_pattern_algebroid(zring(), 2);
    PathExtensionParts pm = path_extension_parts(m2);
    for (int aa = 0; aa < 2; ++aa)
        for (int bb = 0; bb < 2; ++bb) verify_exactness(pm.generic, aa, bb, 2);

    auto z4 = one_object_ring_algebroid(PolyRing{BaseRing::Zmod(4), {}});
    PathExtensionParts p4 = path_extension_parts(z4);
    verify_exactness(p4.generic, 0, 0, 3);

    auto q = one_object_ring_algebroid(PolyRing{BaseRing::Q(), {}});
    PathExtensionParts pq = path_extension_parts(q);
    verify_exactness(pq.generic, 0, 0, 2);
}

TEST_CASE("collapsing the interval boundary yields the loop extension") {
    auto za = zalg();
    FiniteSimplicialSet x = delta_complex(1);
    FiniteSimplicialSet pt = point_complex();
    std::vector<std::vector<bool>> in_b = {{true, true}, {false}};
    SimplicialMap f;
    f.images = {{identity_simplex(0, 0), identity_simplex(0, 0)}, {degenerate_point(0, 1)}};
    PushoutExtensionParts pe = pushout_extension_parts(za, x, in_b, pt, f);

    CHECK(pe.glued.space.cell_count(0) == 1);
    CHECK(pe.glued.space.cell_count(1) == 1);
    CHECK(pe.glued.space.faces[1][0] ==
          std::vector<Simplex>{identity_simplex(0, 0), identity_simplex(0, 0)});
    CHECK(pe.bspace.cell_count(0) == 2);

    for (int deg = 1; deg <= 2; ++deg) verify_exactness(pe.generic, 0, 0, deg);

    // The kernel is the loop algebra of the base: one generator per window
    // degree, matching the circle computation.
    Mat kc = pe.generic.kernel_columns(0, 0, 2);
    PowerAlgebroid circle = power(za, circle_complex());
    auto circle_families = valid_family_basis(family_coords(circle, 0, 0, 3));
    CHECK(kc.cols == static_cast<int>(circle_families.size()));
}

TEST_CASE("an empty gluing locus gives the disjoint union extension") {
    auto za = zalg();
    FiniteSimplicialSet x = circle_complex();
    FiniteSimplicialSet pt = point_complex();
    std::vector<std::vector<bool>> in_b = {{false}, {false}};
    SimplicialMap f;
    f.images = {{}};
    PushoutExtensionParts pe = pushout_extension_parts(za, x, in_b, pt, f);
    CHECK(pe.glued.space.cell_count(0) == 2);
    CHECK(pe.glued.space.cell_count(1) == 1);
    CHECK(pe.bspace.cell_count(0) == 0);
    verify_exactness(pe.generic, 0, 0, 2);
}

TEST_CASE("collapsing the circle basepoint is invisible") {
    FiniteSimplicialSet x = circle_complex();
    FiniteSimplicialSet pt = point_complex();
    std::vector<std::vector<bool>> in_b = {{true}, {false}};
    SimplicialMap f;
    f.images = {{identity_simplex(0, 0)}};
    for (BaseRing base : {BaseRing::Z(), BaseRing::Zmod(5)}) {
        auto a = one_object_ring_algebroid(PolyRing{base, {}});
        PushoutExtensionParts pe = pushout_extension_parts(a, x, in_b, pt, f);
        CHECK(pe.glued.space.cell_count(0) == 1);
        CHECK(pe.glued.space.cell_count(1) == 1);
        verify_exactness(pe.generic, 0, 0, 2);
    }
}

TEST_CASE("a non-face-closed gluing locus is rejected") {
    auto za = zalg();
    FiniteSimplicialSet x = delta_complex(1);
    FiniteSimplicialSet pt = point_complex();
    std::vector<std::vector<bool>> in_b = {{false, false}, {true}};
    SimplicialMap f;
    f.images = {{identity_simplex(0, 0), identity_simplex(0, 0)}, {degenerate_point(0, 1)}};
    CHECK_THROWS_AS(pushout_extension_parts(za, x, in_b, pt, f), RingError);
}

TEST_CASE("pullbacks restrict families along simplicial maps") {
    auto a = zalg();
    FiniteSimplicialSet interval = delta_complex(1);
    FiniteSimplicialSet pt = point_complex();
    PowerAlgebroid on_interval = power(a, interval);
    PowerAlgebroid on_pt = power(a, pt);

    const PolyRing& r1 = on_interval.level[1]->scalars;
    Poly t = r1.var(0);
    FamilyElement u = on_interval.zero(0, 0);
    u.values[1][0] = Mor{0, 0, {{"1", r1.mul(t, t)}}};
    u.values[0][1] = Mor{0, 0, {{"1", on_interval.level[0]->scalars.one()}}};
    on_interval.validate_element(u);

    SimplicialMap vertex1;
    vertex1.images = {{identity_simplex(0, 1)}};
    FamilyElement pulled = pullback_family(on_pt, on_interval, vertex1, u);
    on_pt.validate_element(pulled);
    CHECK(pulled.values[0][0] == u.values[0][1]);

    // Pulling back along the collapse recovers the constant family.
    SimplicialMap collapse;
    collapse.images = {{identity_simplex(0, 0), identity_simplex(0, 0)}, {degenerate_point(0, 1)}};
    Mor c = a->scale_rat(Rat(3), a->unit(0));
    FamilyElement pulled_const =
        pullback_family(on_interval, on_pt, collapse, on_pt.constant_family(c));
    on_interval.validate_element(pulled_const);
    CHECK(pulled_const == on_interval.constant_family(c));

    FiniteSimplicialSet circle = circle_complex();
    PowerAlgebroid on_circle = power(a, circle);
    auto loops = basepoint_kernel(on_circle, 0, 0, 3);
    SimplicialMap ident = identity_simplicial_map(circle);
    for (const auto& w : loops) CHECK(pullback_family(on_circle, on_circle, ident, w) == w);
}

TEST_CASE("family composition works cellwise over a matrix base") {
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    PowerAlgebroid pw = power(m2, circle_complex());
    Mor e01 = m2->basis_mor("E[0,1]");
    Mor e10 = m2->basis_mor("E[1,0]");
    FamilyElement u = pw.constant_family(e10);
    FamilyElement v = pw.constant_family(e01);
    FamilyElement prod = pw.compose(v, u);
    pw.validate_element(prod);
    CHECK(prod == pw.constant_family(m2->compose(e01, e10)));

    const PolyRing& r1 = pw.level[1]->scalars;
    Poly t = r1.var(0);
    Poly window = r1.sub(r1.mul(t, t), t);
    FamilyElement loop = pw.zero(0, 1);
    loop.values[1][0] = Mor{0, 1, {{"E[1,0]", window}}};
    pw.validate_element(loop);
    FamilyElement back = pw.compose(pw.constant_family(e01), loop);
    pw.validate_element(back);
    CHECK(back.values[1][0] == Mor{0, 0, {{"E[0,0]", window}}});
    CHECK(back.values[0][0].zero());
}
