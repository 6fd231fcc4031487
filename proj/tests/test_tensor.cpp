#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kkalg/tensor.hpp"

using namespace kkalg;

namespace {

PolyRing zring() { return PolyRing{BaseRing::Z(), {}}; }
PolyRing zuring() { return PolyRing{BaseRing::Z(), {"u"}}; }

TensorElement word(AlgebroidPtr a, const std::vector<std::string>& names) {
    TensorElement e = sigma(a, a->basis_mor(names[0]));
    for (size_t i = 1; i < names.size(); ++i)
        e = tensor_compose(a, e, sigma(a, a->basis_mor(names[i])));
    return e;
}

// 1(x)1 - 1, the elementary kernel element of a unital one-object algebroid.
TensorElement curvature(AlgebroidPtr a) {
    return tensor_sub(a, word(a, {"1", "1"}), sigma(a, a->basis_mor("1")));
}

} // namespace

TEST_CASE("pi undoes sigma on every basis morphism") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    for (const auto& a : {z, m2})
        for (const auto& [name, home] : a->basis_home) {
            (void)home;
            Mor x = a->basis_mor(name);
            CHECK(pi(a, sigma(a, x)) == x);
        }
}

TEST_CASE("pi multiplies a path with its first entry applied first") {
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    Mor x1 = m2->basis_mor("E[1,0]"); // Hom(0,1)
    Mor x2 = m2->basis_mor("E[0,1]"); // Hom(1,0)
    TensorElement e = tensor_compose(m2, sigma(m2, x1), sigma(m2, x2));
    CHECK(e.src == 0);
    CHECK(e.dst == 0);
    CHECK(pi(m2, e) == m2->compose(x2, x1));
}

TEST_CASE("the unit curvature element is a kernel element") {
    auto z = one_object_ring_algebroid(zring());
    TensorElement e = curvature(z);
    CHECK(pi(z, e).zero());
    CHECK_NOTHROW(make_j_element(z, e));
    TensorElement bad = word(z, {"1", "1"});
    CHECK_THROWS_AS(make_j_element(z, bad), RingError);
}

TEST_CASE("tensor composition concatenates paths") {
    auto z = one_object_ring_algebroid(zring());
    TensorElement two = tensor_compose(z, sigma(z, z->basis_mor("1")), sigma(z, z->basis_mor("1")));
    CHECK(two.terms.size() == 1);
    CHECK(two.terms.count({"1", "1"}) == 1);
    CHECK(two.degree() == 2);
}

TEST_CASE("tensor composition is associative and bilinear") {
    auto a = one_object_ring_algebroid(zuring());
    const PolyRing& r = a->scalars;
    Poly u = r.var(0);
    TensorElement e1 = tensor_add(a, sigma(a, a->basis_mor("1")), tensor_scale(a, u, word(a, {"1", "1"})));
    TensorElement e2 = tensor_sub(a, word(a, {"1", "1", "1"}), tensor_scale(a, r.constant(Rat(3)), sigma(a, a->basis_mor("1"))));
    TensorElement e3 = tensor_add(a, word(a, {"1", "1"}), tensor_scale(a, r.mul(u, u), sigma(a, a->basis_mor("1"))));
    CHECK(tensor_compose(a, tensor_compose(a, e1, e2), e3) == tensor_compose(a, e1, tensor_compose(a, e2, e3)));
    CHECK(tensor_compose(a, tensor_scale(a, u, e1), e2) == tensor_scale(a, u, tensor_compose(a, e1, e2)));
    CHECK(tensor_compose(a, e1, tensor_add(a, e2, e3)) ==
          tensor_add(a, tensor_compose(a, e1, e2), tensor_compose(a, e1, e3)));
    CHECK(graded_part(tensor_compose(a, e1, e2), 2).degree() == 2);
}

TEST_CASE("the adjoint extension restricts to the given moduloid map") {
    auto z = one_object_ring_algebroid(zring());
    PathExtensionParts pe = path_extension_parts(z);
    AlgebroidPtr sum = pe.quotient.sum;
    const PolyRing& rt = pe.middle->scalars;
    Poly t = rt.var(0);
    Poly omt = rt.sub(rt.one(), t);

    AlgHom s;
    s.from = as_moduloid(*sum);
    s.to = pe.middle;
    s.object_map = {0};
    s.images["1#0"] = pe.middle->scale(omt, pe.middle->basis_mor("1"));
    s.images["1#1"] = pe.middle->scale(t, pe.middle->basis_mor("1"));
    s.scalar_map = RingMap{sum->scalars, rt, {}};
    s.validate();

    LazyHomomorphism h = adjunction_H(sum, s);
    for (const auto& name : {"1#0", "1#1"})
        CHECK(h.eval_mor(sigma(sum, sum->basis_mor(name))) == s.apply(sum->basis_mor(name)));

    // H(s)((1,0) (x) (1,0)) = (1 - t)^2.
    TensorElement e = tensor_compose(sum, sigma(sum, sum->basis_mor("1#0")), sigma(sum, sum->basis_mor("1#0")));
    CHECK(h.eval_mor(e) == pe.middle->scale(rt.mul(omt, omt), pe.middle->basis_mor("1")));
}

TEST_CASE("restriction along sigma recovers a moduloid map exactly") {
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    AlgHom beta;
    beta.from = as_moduloid(*m2);
    beta.to = m2;
    beta.object_map = {0, 1};
    int c = 2;
    for (const auto& [name, home] : m2->basis_home) {
        (void)home;
        beta.images[name] = m2->scale(m2->scalars.constant(Rat(c++)), m2->basis_mor(name));
    }
    beta.validate();
    AlgHom back = adjunction_G(adjunction_H(m2, beta));
    CHECK(back.images == beta.images);
    CHECK(back.object_map == beta.object_map);
}

TEST_CASE("every corpus homomorphism factors through sigma") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    AlgHom alpha;
    alpha.from = z;
    alpha.to = m2;
    alpha.object_map = {0};
    alpha.images["1"] = m2->basis_mor("E[0,0]");
    alpha.validate();

    AlgHom beta = alpha;
    beta.from = as_moduloid(*z);
    LazyHomomorphism phi = adjunction_H(z, beta);
    CHECK(phi.eval_mor(sigma(z, z->basis_mor("1"))) == alpha.apply(z->basis_mor("1")));
}

TEST_CASE("the universal extension certifies exactness over several base rings") {
    std::vector<AlgebroidPtr> corpus = {
        one_object_ring_algebroid(zring()),
        matrix_pattern_algebroid(zring(), 2),
        one_object_ring_algebroid(zuring()),
        one_object_ring_algebroid(PolyRing{BaseRing::Zmod(4), {}}),
    };
    for (const auto& a : corpus) {
        FSplitExtension ue = universal_extension(a);
        CHECK(ue.protocol == "tensor");
        int n = static_cast<int>(a->objects.size());
        for (int deg = 1; deg <= 2; ++deg)
            for (int oa = 0; oa < n; ++oa)
                for (int ob = 0; ob < n; ++ob)
                    CHECK_NOTHROW(verify_exactness(ue.coords, oa, ob, deg));
    }
}

TEST_CASE("classifying a trivial extension with multiplicative splitting gives zero") {
    auto z = one_object_ring_algebroid(zring());
    FSplitExtension triv;
    triv.label = "trivial extension";
    triv.protocol = "carrier";
    triv.quotient = z;
    triv.carrier = z;
    triv.in_total = [](const Mor&) { return true; };
    triv.in_ideal = [](const Mor& u) { return u.zero(); };
    triv.include_ideal = [](const Mor& u) { return u; };
    triv.project = [](const Mor& u) { return u; };
    triv.split = [](const Mor& u) { return u; };

    LazyHomomorphism gamma = classifying_map(triv);
    CHECK(gamma.eval_mor(curvature(z)).zero());
    CHECK(gamma.eval_mor(tensor_zero(0, 0)).zero());
    TensorElement deep = tensor_sub(z, word(z, {"1", "1", "1"}), sigma(z, z->basis_mor("1")));
    CHECK(gamma.eval_mor(deep).zero());
    CHECK_THROWS_AS(gamma.eval_mor(word(z, {"1", "1"})), RingError);
}

TEST_CASE("tensoring the universal extension with the scalar ring changes nothing") {
    auto z = one_object_ring_algebroid(zring());
    auto c = one_object_ring_algebroid(zring(), "c");
    FSplitExtension ue = universal_extension(z);
    FSplitExtension te = j_tensor_extension(z, c);
    CHECK(te.protocol == "tensor");
    for (int deg = 1; deg <= 2; ++deg) {
        Mat mu = ue.coords.middle_valid(0, 0, deg);
        Mat mt = te.coords.middle_valid(0, 0, deg);
        CHECK(mu.rows == mt.rows);
        CHECK(mu.cols == mt.cols);
        Mat ku = ue.coords.kernel_columns(0, 0, deg);
        Mat kt = te.coords.kernel_columns(0, 0, deg);
        CHECK(ku.cols == kt.cols);
        CHECK_NOTHROW(verify_exactness(te.coords, 0, 0, deg));
    }
}

TEST_CASE("the tensored extension is exact with matrix-pattern coefficients") {
    auto z = one_object_ring_algebroid(zring());
    auto m2 = matrix_pattern_algebroid(zring(), 2);
    FSplitExtension te = j_tensor_extension(z, m2);
    CHECK(static_cast<bool>(te.tctx));
    int n = static_cast<int>(te.quotient->objects.size());
    CHECK(n == 2);
    for (int oa = 0; oa < n; ++oa)
        for (int ob = 0; ob < n; ++ob)
            CHECK_NOTHROW(verify_exactness(te.coords, oa, ob, 1));
}

TEST_CASE("sigma tensor one is a section of pi tensor one") {
    auto z = one_object_ring_algebroid(zuring());
    auto m2 = matrix_pattern_algebroid(zuring(), 2);
    TensoredContext t = tensored_context(z, m2);
    for (const auto& [name, home] : t.prod->basis_home) {
        (void)home;
        Mor x = t.prod->basis_mor(name);
        CHECK(tensored_pi(t, tensored_sigma(t, x)) == x);
    }
    Mor mixed = t.prod->add(t.prod->basis_mor(tensor_basis_name("1", "E[0,0]")),
                            t.prod->scale(t.prod->scalars.var(0),
                                          t.prod->basis_mor(tensor_basis_name("1", "E[0,0]"))));
    CHECK(tensored_pi(t, tensored_sigma(t, mixed)) == mixed);
}

TEST_CASE("the tensored classifying map splits paths into A-part and coefficient part") {
    auto z = one_object_ring_algebroid(zring());
    auto c = one_object_ring_algebroid(zring(), "c");
    TensoredContext t = tensored_context(z, c);
    std::string n = tensor_basis_name("1", "1");
    TensorElement e;
    e.src = 0;
    e.dst = 0;
    Poly one = t.prod->scalars.one();
    e.terms[{n, n}] = one;
    Poly mone = t.prod->scalars.sub(t.prod->scalars.zero(), one);
    e.terms[{n}] = mone;
    CHECK(pi(t.prod, e).zero());

    TensoredElement v = tensored_classifying(t, e);
    TensoredElement expect;
    expect.asrc = expect.adst = 0;
    expect.csrc = expect.cdst = 0;
    expect.terms[{{"1", "1"}, "1"}] = one;
    expect.terms[{{"1"}, "1"}] = mone;
    CHECK(v == expect);

    TensorElement bad;
    bad.src = bad.dst = 0;
    bad.terms[{n, n}] = one;
    CHECK_THROWS_AS(tensored_classifying(t, bad), RingError);
}

TEST_CASE("iterated kernels recognize curvature elements at each supported depth") {
    auto z = one_object_ring_algebroid(zring());
    JCarrier j0 = iterate_J(z, 0);
    CHECK(j0.contains(nested_of_mor(z->basis_mor("1"))));

    JCarrier j1 = iterate_J(z, 1);
    NestedElement u = nested_of_tensor(curvature(z));
    CHECK(j1.contains(u));
    CHECK_FALSE(j1.contains(nested_of_tensor(word(z, {"1", "1"}))));

    JCarrier j2 = iterate_J(z, 2);
    NestedElement uu = nested_compose(z, nested_sigma(z, u), nested_sigma(z, u));
    NestedElement prod = nested_of_tensor(tensor_compose(z, curvature(z), curvature(z)));
    NestedElement e2 = nested_sub(z, uu, nested_sigma(z, prod));
    CHECK(j2.contains(e2));
    CHECK(nested_is_zero(z, nested_pi(z, e2)));
    CHECK_FALSE(j2.contains(uu));

    CHECK_THROWS_AS(iterate_J(z, 4), RingError);
}

TEST_CASE("depth-2 elements expand over the kernel-path basis") {
    auto z = one_object_ring_algebroid(zring());
    TensorElement u = curvature(z);
    TensorElement uu = tensor_compose(z, u, u);
    // u.u = w_1111 - 2 w_111 + w_11 plus sigma of pi(u.u) = 0.
    auto can = depth2_canonical(z, nested_sigma(z, nested_of_tensor(uu)));
    std::map<std::vector<std::vector<std::string>>, Poly> expect;
    const PolyRing& r = z->scalars;
    expect[{{"1", "1", "1", "1"}}] = r.one();
    expect[{{"1", "1", "1"}}] = r.constant(Rat(-2));
    expect[{{"1", "1"}}] = r.one();
    CHECK(can == expect);

    NestedElement w = nested_compose(z, nested_sigma(z, nested_of_tensor(u)), nested_sigma(z, nested_of_tensor(u)));
    CHECK(nested_is_zero(z, nested_sub(z, w, w)));
    CHECK_FALSE(nested_is_zero(z, w));

    NestedElement deep = nested_sigma(z, w);
    CHECK(deep.depth == 3);
    CHECK_THROWS_AS(nested_is_zero(z, deep), RingError);
}
