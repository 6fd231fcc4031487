#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kkalg/linalg.hpp"
#include "kkalg/poly.hpp"

#include <random>

using namespace kkalg;

namespace {

// Deterministic generator: std::uniform_int_distribution varies across
// standard libraries, so sampling is done by hand from raw 64-bit draws.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(unsigned long long seed) : eng(seed) {}
    long long below(long long n) { return static_cast<long long>(eng() % static_cast<unsigned long long>(n)); }
    long long in_range(long long lo, long long hi) { return lo + below(hi - lo + 1); }
};

Poly random_poly(Rng& rng, const PolyRing& r, int max_deg, int nterms) {
    Poly p = r.zero();
    for (int k = 0; k < nterms; ++k) {
        Mono m(r.nvars(), 0);
        for (int i = 0; i < r.nvars(); ++i) m[i] = static_cast<int>(rng.in_range(0, max_deg));
        Rat c(rng.in_range(-4, 4));
        Poly t{r.nvars(), {}};
        if (!c.is_zero()) t.terms[m] = r.base.normalize(c);
        p = r.add(p, t);
    }
    return p;
}

} // namespace

TEST_CASE("rational arithmetic stays normalized") {
    Rat a(2, 4);
    CHECK(a.num == 1);
    CHECK(a.den == 2);
    Rat b(-3, -6);
    CHECK(b.num == 1);
    CHECK(b.den == 2);
    Rat c(3, -6);
    CHECK(c.num == -1);
    CHECK(c.den == 2);
    CHECK((a + c).is_zero());
    CHECK((a * Rat(4)) == Rat(2));
    CHECK(rat_div(Rat(1, 3), Rat(2, 3)) == Rat(1, 2));
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(-1, 2) < Rat(1, 3));
}

TEST_CASE("overflow is loud") {
    long long big = 0x4000000000000000LL;
    CHECK_THROWS_AS(checked_add(big, big), OverflowError);
    CHECK_THROWS_AS(checked_mul(big, 4), OverflowError);
    CHECK_NOTHROW(checked_mul(big, 1));
}

TEST_CASE("base rings normalize and invert") {
    BaseRing z = BaseRing::Z();
    BaseRing q = BaseRing::Q();
    BaseRing z5 = BaseRing::Zmod(5);
    BaseRing z6 = BaseRing::Zmod(6);

    CHECK(z.normalize(Rat(7)) == Rat(7));
    CHECK_THROWS_AS(z.normalize(Rat(1, 2)), RingError);
    CHECK(q.inv(Rat(2, 3)) == Rat(3, 2));
    CHECK(z5.normalize(Rat(-1)) == Rat(4));
    CHECK(z5.normalize(Rat(1, 2)) == Rat(3)); // 2 * 3 = 6 = 1 mod 5
    CHECK(z5.is_field());
    CHECK(!z6.is_field());
    CHECK(z6.invertible(Rat(5)));
    CHECK(z6.mul(Rat(5), z6.inv(Rat(5))) == Rat(1));
    CHECK(!z6.invertible(Rat(2)));
    CHECK_THROWS_AS(z6.normalize(Rat(1, 2)), RingError);
}

TEST_CASE("polynomial arithmetic oracles") {
    PolyRing zt = delta_ring(BaseRing::Z(), 1); // Z[t1]
    Poly t = zt.var(0);
    Poly one = zt.one();

    // t * (1 - t) = t - t^2
    Poly lhs = zt.mul(t, zt.sub(one, t));
    Poly expect = zt.sub(t, zt.mul(t, t));
    CHECK(lhs == expect);

    // (1 - t^2)^2 - t * (t^3 - 2t) = 1, the (1,1) entry of the W round trip.
    Poly t2 = zt.mul(t, t);
    Poly w11 = zt.pow(zt.sub(one, t2), 2);
    Poly w12 = zt.mul(t, zt.sub(zt.mul(t2, t), zt.scale(Rat(2), t)));
    CHECK(zt.sub(w11, w12) == one);

    PolyElement a{zt, w11};
    PolyElement b{zt, zt.neg(w12)};
    CHECK(poly_arith(a, b, PolyOp::add).p == one);

    // evaluate is a partial substitution
    CHECK(zt.eval_var(zt.sub(t2, t), 0, Rat(1)).is_zero());
    CHECK(zt.eval_var(zt.sub(t2, t), 0, Rat(0)).is_zero());
    PolyElement e{zt, zt.sub(t2, t)};
    CHECK(evaluate(e, {{"t1", Rat(1)}}).p.is_zero());
    CHECK_THROWS_AS(evaluate(e, {{"bogus", Rat(1)}}), RingError);
    CHECK(evaluate(e, {}).p == e.p);
}

TEST_CASE("poly arithmetic laws on random samples") {
    Rng rng(20260816);
    PolyRing r = delta_ring(BaseRing::Z(), 2);
    for (int trial = 0; trial < 1000; ++trial) {
        Poly a = random_poly(rng, r, 3, 2);
        Poly b = random_poly(rng, r, 3, 2);
        Poly c = random_poly(rng, r, 3, 2);
        CHECK(r.add(a, b) == r.add(b, a));
        CHECK(r.mul(a, b) == r.mul(b, a));
        CHECK(r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c)));
        CHECK(r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c)));
    }
}

TEST_CASE("evaluate at a full assignment is a ring homomorphism") {
    Rng rng(7);
    PolyRing r = delta_ring(BaseRing::Z(), 2);
    for (int trial = 0; trial < 200; ++trial) {
        Poly a = random_poly(rng, r, 3, 2);
        Poly b = random_poly(rng, r, 3, 2);
        std::map<std::string, Rat> at{{"t1", Rat(rng.in_range(-3, 3))},
                                      {"t2", Rat(rng.in_range(-3, 3))}};
        Poly pa = r.evaluate(a, at);
        Poly pb = r.evaluate(b, at);
        CHECK(r.evaluate(r.mul(a, b), at) == r.mul(pa, pb));
        CHECK(r.evaluate(r.add(a, b), at) == r.add(pa, pb));
    }
}

TEST_CASE("simplicial face and degeneracy conventions") {
    BaseRing z = BaseRing::Z();

    // In Z^{Delta^1}: face 0 sends t1 to the eliminated-coordinate value 1,
    // face 1 sends t1 to 0 (so face 1 = evaluation at the 0 vertex).
    RingMap d0 = simplicial_face_map(z, 1, 0);
    RingMap d1 = simplicial_face_map(z, 1, 1);
    CHECK(d0.apply(d0.from.var(0)) == d0.to.one());
    CHECK(d1.apply(d1.from.var(0)).is_zero());

    PolyRing zt = delta_ring(z, 1);
    PolyElement t1{zt, zt.var(0)};
    CHECK(simplicial_face(t1, 0).p == delta_ring(z, 0).one());
    CHECK(simplicial_face(t1, 1).p.is_zero());

    // Degeneracies: sigma_0(t1) = t2, sigma_1(t1) = t1 + t2.
    RingMap s0 = simplicial_degeneracy_map(z, 1, 0);
    RingMap s1 = simplicial_degeneracy_map(z, 1, 1);
    PolyRing z2 = delta_ring(z, 2);
    CHECK(s0.apply(zt.var(0)) == z2.var(1));
    CHECK(s1.apply(zt.var(0)) == z2.add(z2.var(0), z2.var(1)));
    CHECK(simplicial_degeneracy(t1, 1).p == z2.add(z2.var(0), z2.var(1)));

    // Unital: faces fix 1.
    CHECK(d0.apply(zt.one()) == d0.to.one());
}

TEST_CASE("all five simplicial identities for n <= 4") {
    BaseRing z = BaseRing::Z();
    auto maps_equal = [](const RingMap& f, const RingMap& g) {
        if (!(f.from == g.from) || !(f.to == g.to)) return false;
        for (int i = 0; i < f.from.nvars(); ++i)
            if (!(f.images[i] == g.images[i])) return false;
        return true;
    };

    for (int n = 2; n <= 4; ++n) {
        // d_i d_j = d_{j-1} d_i (i < j): as ring maps, apply d_j first.
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < j; ++i) {
                RingMap lhs = simplicial_face_map(z, n, j).then(simplicial_face_map(z, n - 1, i));
                RingMap rhs = simplicial_face_map(z, n, i).then(simplicial_face_map(z, n - 1, j - 1));
                CHECK(maps_equal(lhs, rhs));
            }
    }
    for (int n = 1; n <= 4; ++n) {
        // s_i s_j = s_{j+1} s_i (i <= j)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i) {
                RingMap lhs = simplicial_degeneracy_map(z, n, j).then(simplicial_degeneracy_map(z, n + 1, i));
                RingMap rhs = simplicial_degeneracy_map(z, n, i).then(simplicial_degeneracy_map(z, n + 1, j + 1));
                CHECK(maps_equal(lhs, rhs));
            }
        // d_i s_j relations
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                RingMap lhs = simplicial_degeneracy_map(z, n, j).then(simplicial_face_map(z, n + 1, i));
                if (i < j) {
                    RingMap rhs = simplicial_face_map(z, n, i).then(simplicial_degeneracy_map(z, n - 1, j - 1));
                    CHECK(maps_equal(lhs, rhs));
                } else if (i == j || i == j + 1) {
                    CHECK(maps_equal(lhs, identity_map(delta_ring(z, n))));
                } else {
                    RingMap rhs = simplicial_face_map(z, n, i - 1).then(simplicial_degeneracy_map(z, n - 1, j));
                    CHECK(maps_equal(lhs, rhs));
                }
            }
    }
}

TEST_CASE("rref and field solve") {
    BaseRing q = BaseRing::Q();
    Mat m(2, 2);
    m.at(0, 0) = Rat(1);
    m.at(0, 1) = Rat(2);
    m.at(1, 0) = Rat(3);
    m.at(1, 1) = Rat(4);
    auto x = solve(q, m, {Rat(5), Rat(11)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rat(1));
    CHECK((*x)[1] == Rat(2));

    Mat sing(2, 2);
    sing.at(0, 0) = Rat(1);
    sing.at(0, 1) = Rat(2);
    sing.at(1, 0) = Rat(2);
    sing.at(1, 1) = Rat(4);
    CHECK(!solve(q, sing, {Rat(1), Rat(0)}).has_value());
    auto ker = kernel_gens(q, sing);
    REQUIRE(ker.size() == 1);
    CHECK(span_contains(q, ker, {Rat(-2), Rat(1)}));
}

TEST_CASE("integer solve respects divisibility") {
    BaseRing z = BaseRing::Z();
    Mat m(1, 1);
    m.at(0, 0) = Rat(2);
    CHECK(solve(z, m, {Rat(4)}).has_value());
    CHECK(!solve(z, m, {Rat(3)}).has_value());

    // 2x + 4y = 6 has integer solutions; kernel generated by (-2, 1).
    Mat m2(1, 2);
    m2.at(0, 0) = Rat(2);
    m2.at(0, 1) = Rat(4);
    auto x = solve(z, m2, {Rat(6)});
    REQUIRE(x.has_value());
    CHECK(checked_add((*x)[0].num * 2, (*x)[1].num * 4) == 6);
    auto ker = kernel_gens(z, m2);
    REQUIRE(ker.size() == 1);
    CHECK(span_contains(z, ker, {Rat(-2), Rat(1)}));
    CHECK(span_contains(z, ker, {Rat(2), Rat(-1)}));
    CHECK(!span_contains(z, ker, {Rat(1), Rat(1)}));
}

TEST_CASE("smith normal form invariants") {
    // Presentation matrix of Z/2 (+) Z/3 over Z has invariant factors 1..6
    // after stacking: diag(2,3) ~ diag(1,6).
    Mat m(2, 2);
    m.at(0, 0) = Rat(2);
    m.at(1, 1) = Rat(3);
    Snf s = snf(m);
    REQUIRE(s.invariant_factors.size() == 2);
    CHECK(s.invariant_factors[0] == 1);
    CHECK(s.invariant_factors[1] == 6);
    // u m v = d
    BaseRing z = BaseRing::Z();
    CHECK(mat_mul(z, mat_mul(z, s.u, m), s.v) == s.d);
}

TEST_CASE("hnf reduces and tracks the transform") {
    BaseRing z = BaseRing::Z();
    Mat m(3, 2);
    m.at(0, 0) = Rat(2);
    m.at(0, 1) = Rat(4);
    m.at(1, 0) = Rat(6);
    m.at(1, 1) = Rat(8);
    m.at(2, 0) = Rat(10);
    m.at(2, 1) = Rat(12);
    Hnf h = hnf(m);
    CHECK(mat_mul(z, h.u, m) == h.h);
    // Staircase: below each pivot all zeros.
    for (size_t r = 0; r < h.pivots.size(); ++r)
        for (int i = static_cast<int>(r) + 1; i < h.h.rows; ++i)
            CHECK(h.h.at(i, h.pivots[r]).is_zero());
}

TEST_CASE("mod-m kernels through the integer lift") {
    BaseRing z6 = BaseRing::Zmod(6);
    // x * 2 = 0 mod 6: solutions generated by 3.
    Mat m(1, 1);
    m.at(0, 0) = Rat(2);
    auto ker = kernel_gens(z6, m);
    CHECK(span_contains(z6, ker, {Rat(3)}));
    CHECK(!span_contains(z6, ker, {Rat(1)}));
    CHECK(!span_contains(z6, ker, {Rat(2)}));

    // Solve 2x = 4 mod 6.
    auto x = solve(z6, m, {Rat(4)});
    REQUIRE(x.has_value());
    CHECK(z6.mul(Rat(2), (*x)[0]) == Rat(4));
    CHECK(!solve(z6, m, {Rat(3)}).has_value());
}

TEST_CASE("span equality by double inclusion") {
    BaseRing z = BaseRing::Z();
    std::vector<std::vector<Rat>> a{{Rat(2), Rat(0)}, {Rat(0), Rat(3)}};
    std::vector<std::vector<Rat>> b{{Rat(2), Rat(3)}, {Rat(2), Rat(-3)}, {Rat(0), Rat(3)}};
    CHECK(spans_equal(z, a, b, 2));
    std::vector<std::vector<Rat>> c{{Rat(1), Rat(0)}, {Rat(0), Rat(3)}};
    CHECK(!spans_equal(z, a, c, 2));
}

TEST_CASE("monomial enumeration is sorted and complete") {
    auto ms = monomials_up_to(2, 2);
    CHECK(ms.size() == 6);
    CHECK(std::is_sorted(ms.begin(), ms.end()));
    for (const auto& m : ms) CHECK(m[0] + m[1] <= 2);
}
