#include "kkalg/tensor.hpp"

#include "kkalg/linalg.hpp"

#include <algorithm>

namespace kkalg {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw RingError(msg);
}

Mono mono_mul(const Mono& x, const Mono& y) {
    Mono r = x;
    for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
    return r;
}

int mono_degree(const Mono& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

int poly_degree(const Poly& p) {
    int d = 0;
    for (const auto& [m, c] : p.terms) d = std::max(d, mono_degree(m));
    return d;
}

// Largest total degree among structure constants; 0 for a moduloid.
int max_structure_degree(const Algebroid& a) {
    int d = 0;
    for (const auto& [key, coeffs] : a.structure)
        for (const auto& [name, c] : coeffs) d = std::max(d, poly_degree(c));
    return d;
}

// Composable basis-name paths from oa to ob of the given length.
void collect_paths(const Algebroid& a, int at, int ob, int len,
                   std::vector<std::string>& cur, std::vector<std::vector<std::string>>& out) {
    if (len == 0) {
        if (at == ob) out.push_back(cur);
        return;
    }
    for (const auto& [pair, names] : a.hom_basis) {
        if (pair.first != at) continue;
        for (const auto& n : names) {
            cur.push_back(n);
            collect_paths(a, pair.second, ob, len - 1, cur, out);
            cur.pop_back();
        }
    }
}

std::vector<std::vector<std::string>> paths_between(const Algebroid& a, int oa, int ob, int len) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> cur;
    collect_paths(a, oa, ob, len, cur, out);
    return out;
}

// Multiply a path out in a, first entry first.
Mor path_product(const Algebroid& a, const std::vector<std::string>& path) {
    Mor m = a.basis_mor(path[0]);
    for (size_t i = 1; i < path.size(); ++i) m = a.compose(a.basis_mor(path[i]), m);
    return m;
}

} // namespace

int TensorElement::degree() const {
    size_t d = 0;
    for (const auto& [path, c] : terms) d = std::max(d, path.size());
    return static_cast<int>(d);
}

TensorElement tensor_zero(int src, int dst) {
    TensorElement e;
    e.src = src;
    e.dst = dst;
    return e;
}

TensorElement sigma(AlgebroidPtr, const Mor& x) {
    TensorElement e = tensor_zero(x.src, x.dst);
    for (const auto& [name, c] : x.coeffs) e.terms[{name}] = c;
    return e;
}

Mor pi(AlgebroidPtr a, const TensorElement& e) {
    Mor out = a->zero_mor(e.src, e.dst);
    for (const auto& [path, c] : e.terms)
        out = a->add(out, a->scale(c, path_product(*a, path)));
    return out;
}

TensorElement tensor_add(AlgebroidPtr a, const TensorElement& u, const TensorElement& v) {
    require(u.src == v.src && u.dst == v.dst, "tensor sum mixes hom modules");
    TensorElement e = u;
    const PolyRing& ring = a->scalars;
    for (const auto& [path, c] : v.terms) {
        auto it = e.terms.find(path);
        if (it == e.terms.end()) {
            e.terms[path] = c;
        } else {
            it->second = ring.add(it->second, c);
            if (it->second.is_zero()) e.terms.erase(it);
        }
    }
    return e;
}

TensorElement tensor_sub(AlgebroidPtr a, const TensorElement& u, const TensorElement& v) {
    return tensor_add(a, u, tensor_scale(a, a->scalars.constant(Rat(-1)), v));
}

TensorElement tensor_scale(AlgebroidPtr a, const Poly& c, const TensorElement& u) {
    TensorElement e = tensor_zero(u.src, u.dst);
    const PolyRing& ring = a->scalars;
    for (const auto& [path, q] : u.terms) {
        Poly p = ring.mul(c, q);
        if (!p.is_zero()) e.terms[path] = p;
    }
    return e;
}

TensorElement tensor_compose(AlgebroidPtr a, const TensorElement& u, const TensorElement& v) {
    require(u.dst == v.src, "tensor composition endpoint mismatch");
    TensorElement e = tensor_zero(u.src, v.dst);
    const PolyRing& ring = a->scalars;
    for (const auto& [pu, cu] : u.terms)
        for (const auto& [pv, cv] : v.terms) {
            std::vector<std::string> path = pu;
            path.insert(path.end(), pv.begin(), pv.end());
            Poly c = ring.mul(cu, cv);
            if (c.is_zero()) continue;
            auto it = e.terms.find(path);
            if (it == e.terms.end()) {
                e.terms[path] = c;
            } else {
                it->second = ring.add(it->second, c);
                if (it->second.is_zero()) e.terms.erase(it);
            }
        }
    return e;
}

TensorElement graded_part(const TensorElement& e, int k) {
    TensorElement out = tensor_zero(e.src, e.dst);
    for (const auto& [path, c] : e.terms)
        if (static_cast<int>(path.size()) == k) out.terms[path] = c;
    return out;
}

JElement make_j_element(AlgebroidPtr a, const TensorElement& e) {
    require(pi(a, e).zero(), "not a kernel element: pi does not vanish");
    return JElement{e};
}

int NestedElement::src() const {
    if (depth == 0) return base.src;
    if (depth == 1) return flat.src;
    return csrc;
}

int NestedElement::dst() const {
    if (depth == 0) return base.dst;
    if (depth == 1) return flat.dst;
    return cdst;
}

NestedElement nested_of_mor(const Mor& x) {
    NestedElement e;
    e.depth = 0;
    e.base = x;
    return e;
}

NestedElement nested_of_tensor(const TensorElement& t) {
    NestedElement e;
    e.depth = 1;
    e.flat = t;
    return e;
}

NestedElement nested_zero(int depth, int src, int dst) {
    if (depth == 0) return nested_of_mor(Mor{src, dst, {}});
    if (depth == 1) return nested_of_tensor(tensor_zero(src, dst));
    NestedElement e;
    e.depth = depth;
    e.csrc = src;
    e.cdst = dst;
    return e;
}

NestedElement nested_add(AlgebroidPtr a, const NestedElement& u, const NestedElement& v) {
    require(u.depth == v.depth, "nested sum mixes depths");
    require(u.src() == v.src() && u.dst() == v.dst(), "nested sum mixes hom modules");
    if (u.depth == 0) return nested_of_mor(a->add(u.base, v.base));
    if (u.depth == 1) return nested_of_tensor(tensor_add(a, u.flat, v.flat));
    NestedElement e = u;
    e.chains.insert(e.chains.end(), v.chains.begin(), v.chains.end());
    return e;
}

NestedElement nested_sub(AlgebroidPtr a, const NestedElement& u, const NestedElement& v) {
    return nested_add(a, u, nested_scale(a, a->scalars.constant(Rat(-1)), v));
}

NestedElement nested_scale(AlgebroidPtr a, const Poly& c, const NestedElement& u) {
    if (u.depth == 0) return nested_of_mor(a->scale(c, u.base));
    if (u.depth == 1) return nested_of_tensor(tensor_scale(a, c, u.flat));
    NestedElement e = nested_zero(u.depth, u.src(), u.dst());
    const PolyRing& ring = a->scalars;
    for (const auto& [q, entries] : u.chains) {
        Poly p = ring.mul(c, q);
        if (!p.is_zero()) e.chains.push_back({p, entries});
    }
    return e;
}

NestedElement nested_compose(AlgebroidPtr a, const NestedElement& u, const NestedElement& v) {
    require(u.depth == v.depth, "nested composition mixes depths");
    require(u.dst() == v.src(), "nested composition endpoint mismatch");
    if (u.depth == 0) return nested_of_mor(a->compose(v.base, u.base));
    if (u.depth == 1) return nested_of_tensor(tensor_compose(a, u.flat, v.flat));
    NestedElement e = nested_zero(u.depth, u.src(), v.dst());
    const PolyRing& ring = a->scalars;
    for (const auto& [cu, eu] : u.chains)
        for (const auto& [cv, ev] : v.chains) {
            Poly c = ring.mul(cu, cv);
            if (c.is_zero()) continue;
            std::vector<NestedElement> entries = eu;
            entries.insert(entries.end(), ev.begin(), ev.end());
            e.chains.push_back({c, entries});
        }
    return e;
}

NestedElement nested_pi(AlgebroidPtr a, const NestedElement& e) {
    require(e.depth >= 1, "pi needs positive depth");
    if (e.depth == 1) return nested_of_mor(pi(a, e.flat));
    NestedElement out = nested_zero(e.depth - 1, e.src(), e.dst());
    for (const auto& [c, entries] : e.chains) {
        require(!entries.empty(), "nested element has an empty chain");
        NestedElement acc = entries[0];
        for (size_t i = 1; i < entries.size(); ++i) acc = nested_compose(a, acc, entries[i]);
        out = nested_add(a, out, nested_scale(a, c, acc));
    }
    return out;
}

NestedElement nested_sigma(AlgebroidPtr a, const NestedElement& e) {
    if (e.depth == 0) return nested_of_tensor(sigma(a, e.base));
    NestedElement out = nested_zero(e.depth + 1, e.src(), e.dst());
    out.chains.push_back({a->scalars.one(), {e}});
    return out;
}

std::map<std::vector<std::vector<std::string>>, Poly> depth2_canonical(AlgebroidPtr a,
                                                                       const NestedElement& e) {
    require(e.depth == 2, "canonical form is for depth-2 elements");
    const PolyRing& ring = a->scalars;
    std::map<std::vector<std::vector<std::string>>, Poly> out;
    for (const auto& [c, entries] : e.chains) {
        require(!entries.empty(), "nested element has an empty chain");
        // Expand each entry over the kernel basis w_P (paths of length >= 2)
        // together with the sigma part read off from pi.
        std::vector<std::vector<std::pair<std::vector<std::string>, Poly>>> expansions;
        for (const NestedElement& v : entries) {
            require(v.depth == 1, "depth-2 chains must have depth-1 entries");
            std::vector<std::pair<std::vector<std::string>, Poly>> exp;
            for (const auto& [path, q] : v.flat.terms)
                if (path.size() >= 2) exp.push_back({path, q});
            Mor p = pi(a, v.flat);
            for (const auto& [name, q] : p.coeffs)
                exp.push_back({std::vector<std::string>{name}, q});
            expansions.push_back(std::move(exp));
        }
        std::vector<std::pair<std::vector<std::vector<std::string>>, Poly>> acc;
        acc.push_back({{}, c});
        for (const auto& exp : expansions) {
            std::vector<std::pair<std::vector<std::vector<std::string>>, Poly>> next;
            for (const auto& [key, q] : acc)
                for (const auto& [factor, r] : exp) {
                    Poly p = ring.mul(q, r);
                    if (p.is_zero()) continue;
                    auto k2 = key;
                    k2.push_back(factor);
                    next.push_back({std::move(k2), p});
                }
            acc = std::move(next);
        }
        for (const auto& [key, q] : acc) {
            auto it = out.find(key);
            if (it == out.end()) {
                out[key] = q;
            } else {
                it->second = ring.add(it->second, q);
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

bool nested_is_zero(AlgebroidPtr a, const NestedElement& e) {
    if (e.depth == 0) return e.base.zero();
    if (e.depth == 1) return e.flat.is_zero();
    if (e.depth == 2) return depth2_canonical(a, e).empty();
    throw RingError("zero test beyond depth 2 is not supported");
}

Mor LazyHomomorphism::eval_mor(const TensorElement& e) const {
    LazyValue v = eval(nested_of_tensor(e));
    if (!std::holds_alternative<Mor>(v))
        throw RingError(label + ": value is not a morphism of a materialized algebroid");
    return std::get<Mor>(v);
}

AlgHom adjunction_G(const LazyHomomorphism& alpha) {
    require(alpha.depth == 1, "restriction along sigma needs a depth-1 domain");
    require(alpha.domain && alpha.target, "restriction needs materialized endpoints");
    AlgHom g;
    g.from = as_moduloid(*alpha.domain);
    g.to = alpha.target;
    g.object_map = alpha.object_map;
    g.scalar_map = alpha.scalar_map;
    for (const auto& [name, home] : alpha.domain->basis_home)
        g.images[name] = alpha.eval_mor(sigma(alpha.domain, alpha.domain->basis_mor(name)));
    return g;
}

LazyHomomorphism adjunction_H(AlgebroidPtr a, const AlgHom& beta) {
    require(static_cast<bool>(beta.to), "adjoint extension needs a target");
    LazyHomomorphism h;
    h.label = "adjoint extension";
    h.domain = a;
    h.depth = 1;
    h.target = beta.to;
    h.object_map = beta.object_map;
    h.scalar_map = beta.scalar_map;
    h.eval = [a, beta](const NestedElement& ne) -> LazyValue {
        require(ne.depth == 1, "adjoint extension evaluates depth-1 elements");
        const TensorElement& e = ne.flat;
        AlgebroidPtr to = beta.to;
        Mor out = to->zero_mor(beta.object_map[e.src], beta.object_map[e.dst]);
        for (const auto& [path, c] : e.terms) {
            Mor m = beta.apply(a->basis_mor(path[0]));
            for (size_t i = 1; i < path.size(); ++i)
                m = to->compose(beta.apply(a->basis_mor(path[i])), m);
            out = to->add(out, to->scale(beta.map_scalar(c), m));
        }
        return out;
    };
    return h;
}

namespace {

// Coordinate slots of the truncated tensor algebroid: paths of length
// 1..deg+1 times scalar monomials, graded by (length - 1) + |monomial|.  The
// ambient window carries `pad` extra monomial degrees so that the sigma-tails
// of kernel generators stay inside it when structure constants have positive
// degree.
struct TensorSlots {
    std::vector<std::pair<std::vector<std::string>, Mono>> slots;
    std::map<std::pair<std::vector<std::string>, Mono>, int> index;
};

TensorSlots tensor_slots(const Algebroid& a, int oa, int ob, int deg, int pad) {
    TensorSlots s;
    int nv = a.scalars.nvars();
    for (int len = 1; len <= deg + 1; ++len) {
        for (const auto& path : paths_between(a, oa, ob, len))
            for (const auto& mono : monomials_up_to(nv, deg + 1 + pad - (len - 1))) {
                s.index[{path, mono}] = static_cast<int>(s.slots.size());
                s.slots.push_back({path, mono});
            }
    }
    return s;
}

// Quotient-side slots (basis name, monomial) up to the given degree.
struct MorSlots {
    std::vector<std::pair<std::string, Mono>> slots;
    std::map<std::pair<std::string, Mono>, int> index;
};

MorSlots mor_slots(const Algebroid& a, int oa, int ob, int degcap) {
    MorSlots s;
    int nv = a.scalars.nvars();
    auto it = a.hom_basis.find({oa, ob});
    if (it == a.hom_basis.end()) return s;
    for (const auto& name : it->second)
        for (const auto& mono : monomials_up_to(nv, degcap)) {
            s.index[{name, mono}] = static_cast<int>(s.slots.size());
            s.slots.push_back({name, mono});
        }
    return s;
}

} // namespace

FSplitExtension universal_extension(AlgebroidPtr a) {
    FSplitExtension ext;
    ext.label = "universal extension";
    ext.protocol = "tensor";
    ext.quotient = a;
    ext.base = a;

    int sdeg = max_structure_degree(*a);
    ExactnessCertificate cert;
    cert.label = "universal extension";
    cert.base = a->scalars.base;
    cert.objects = static_cast<int>(a->objects.size());
    int pad = sdeg; // per extra composition step, applied deg times below
    auto slot_pad = [pad](int deg) { return pad * deg; };
    auto quot_pad = [pad](int deg) { return deg + 1 + 2 * pad * deg; };

    cert.middle_valid = [a, slot_pad](int oa, int ob, int deg) {
        TensorSlots ts = tensor_slots(*a, oa, ob, deg, slot_pad(deg));
        std::vector<int> valid;
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            int slotdeg = static_cast<int>(ts.slots[j].first.size()) - 1 +
                          mono_degree(ts.slots[j].second);
            if (slotdeg <= deg + 1) valid.push_back(static_cast<int>(j));
        }
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) m.at(valid[j], static_cast<int>(j)) = Rat(1);
        return m;
    };
    cert.quotient_valid = [a, quot_pad](int oa, int ob, int deg) {
        MorSlots qs = mor_slots(*a, oa, ob, quot_pad(deg));
        std::vector<int> valid;
        for (size_t j = 0; j < qs.slots.size(); ++j)
            if (mono_degree(qs.slots[j].second) <= deg) valid.push_back(static_cast<int>(j));
        Mat m(static_cast<int>(qs.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) m.at(valid[j], static_cast<int>(j)) = Rat(1);
        return m;
    };
    cert.surjection = [a, slot_pad, quot_pad](int oa, int ob, int deg) {
        TensorSlots ts = tensor_slots(*a, oa, ob, deg, slot_pad(deg));
        MorSlots qs = mor_slots(*a, oa, ob, quot_pad(deg));
        const BaseRing& R = a->scalars.base;
        Mat m(static_cast<int>(qs.slots.size()), static_cast<int>(ts.slots.size()));
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            const auto& [path, mono] = ts.slots[j];
            Mor p = path_product(*a, path);
            for (const auto& [name, q] : p.coeffs)
                for (const auto& [nu, r] : q.terms) {
                    int row = qs.index.at({name, mono_mul(mono, nu)});
                    m.at(row, static_cast<int>(j)) =
                        R.normalize(R.add(m.at(row, static_cast<int>(j)), r));
                }
        }
        return m;
    };
    cert.splitting = [a, slot_pad, quot_pad](int oa, int ob, int deg) {
        TensorSlots ts = tensor_slots(*a, oa, ob, deg, slot_pad(deg));
        MorSlots qs = mor_slots(*a, oa, ob, quot_pad(deg));
        std::vector<int> valid;
        for (size_t j = 0; j < qs.slots.size(); ++j)
            if (mono_degree(qs.slots[j].second) <= deg) valid.push_back(static_cast<int>(j));
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) {
            const auto& [name, mono] = qs.slots[valid[j]];
            m.at(ts.index.at({{name}, mono}), static_cast<int>(j)) = Rat(1);
        }
        return m;
    };
    cert.kernel_columns = [a, slot_pad](int oa, int ob, int deg) {
        TensorSlots ts = tensor_slots(*a, oa, ob, deg, slot_pad(deg));
        const BaseRing& R = a->scalars.base;
        std::vector<int> gens;
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            int len = static_cast<int>(ts.slots[j].first.size());
            int slotdeg = len - 1 + mono_degree(ts.slots[j].second);
            if (len >= 2 && slotdeg <= deg + 1) gens.push_back(static_cast<int>(j));
        }
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(gens.size()));
        for (size_t j = 0; j < gens.size(); ++j) {
            const auto& [path, mono] = ts.slots[gens[j]];
            m.at(gens[j], static_cast<int>(j)) = Rat(1);
            Mor p = path_product(*a, path);
            for (const auto& [name, q] : p.coeffs)
                for (const auto& [nu, r] : q.terms) {
                    int row = ts.index.at({std::vector<std::string>{name}, mono_mul(mono, nu)});
                    m.at(row, static_cast<int>(j)) =
                        R.normalize(R.sub(m.at(row, static_cast<int>(j)), r));
                }
        }
        return m;
    };
    ext.coords = cert;
    return ext;
}

LazyHomomorphism classifying_map(const FSplitExtension& ext) {
    require(ext.protocol == "carrier",
            "classifying map needs a materialized total algebroid (carrier protocol)");
    require(static_cast<bool>(ext.quotient) && static_cast<bool>(ext.carrier),
            "classifying map needs complete extension data");
    LazyHomomorphism g;
    g.label = "classifying map of " + ext.label;
    g.domain = ext.quotient;
    g.depth = 1;
    g.target = ext.carrier;
    g.object_map.resize(ext.quotient->objects.size());
    for (size_t i = 0; i < g.object_map.size(); ++i) g.object_map[i] = static_cast<int>(i);
    g.eval = [ext](const NestedElement& ne) -> LazyValue {
        require(ne.depth == 1, "classifying map evaluates depth-1 elements");
        const TensorElement& e = ne.flat;
        require(pi(ext.quotient, e).zero(), "classifying map needs a kernel element");
        AlgebroidPtr car = ext.carrier;
        Mor out = car->zero_mor(e.src, e.dst);
        for (const auto& [path, c] : e.terms) {
            Mor m = ext.split(ext.quotient->basis_mor(path[0]));
            for (size_t i = 1; i < path.size(); ++i)
                m = car->compose(ext.split(ext.quotient->basis_mor(path[i])), m);
            Poly cc = ext.carrier_scalar ? ext.carrier_scalar(c) : c;
            out = car->add(out, car->scale(cc, m));
        }
        if (!ext.in_ideal(out))
            throw RingError("classifying map value left the ideal; the extension is corrupted");
        return out;
    };
    return g;
}

int TensoredContext::pair_object(int ia, int ic) const {
    return ia * static_cast<int>(c->objects.size()) + ic;
}

std::pair<int, int> TensoredContext::split_object(int o) const {
    int nc = static_cast<int>(c->objects.size());
    return {o / nc, o % nc};
}

TensoredContext tensored_context(AlgebroidPtr a, AlgebroidPtr c) {
    TensoredContext t;
    t.a = a;
    t.c = c;
    t.prod = tensor_product(*a, *c);
    for (const auto& [na, ha] : a->basis_home)
        for (const auto& [nc, hc] : c->basis_home)
            t.split_name[tensor_basis_name(na, nc)] = {na, nc};
    return t;
}

TensoredElement tensored_sigma(const TensoredContext& t, const Mor& x) {
    TensoredElement e;
    auto s = t.split_object(x.src);
    auto d = t.split_object(x.dst);
    e.asrc = s.first;
    e.csrc = s.second;
    e.adst = d.first;
    e.cdst = d.second;
    for (const auto& [pn, q] : x.coeffs) {
        const auto& [na, nc] = t.split_name.at(pn);
        e.terms[{{na}, nc}] = q;
    }
    return e;
}

Mor tensored_pi(const TensoredContext& t, const TensoredElement& e) {
    Mor out = t.prod->zero_mor(t.pair_object(e.asrc, e.csrc), t.pair_object(e.adst, e.cdst));
    const PolyRing& ring = t.prod->scalars;
    for (const auto& [key, q] : e.terms) {
        Mor p = path_product(*t.a, key.first);
        for (const auto& [na, qa] : p.coeffs) {
            Mor unit = out;
            unit.coeffs.clear();
            Poly c = ring.mul(q, qa);
            if (c.is_zero()) continue;
            unit.coeffs[tensor_basis_name(na, key.second)] = c;
            out = t.prod->add(out, unit);
        }
    }
    return out;
}

TensoredElement tensored_add(const TensoredContext& t, const TensoredElement& u,
                             const TensoredElement& v) {
    require(u.asrc == v.asrc && u.adst == v.adst && u.csrc == v.csrc && u.cdst == v.cdst,
            "tensored sum mixes hom modules");
    TensoredElement e = u;
    const PolyRing& ring = t.a->scalars;
    for (const auto& [key, q] : v.terms) {
        auto it = e.terms.find(key);
        if (it == e.terms.end()) {
            e.terms[key] = q;
        } else {
            it->second = ring.add(it->second, q);
            if (it->second.is_zero()) e.terms.erase(it);
        }
    }
    return e;
}

TensoredElement tensored_sub(const TensoredContext& t, const TensoredElement& u,
                             const TensoredElement& v) {
    TensoredElement w = v;
    const PolyRing& ring = t.a->scalars;
    for (auto& [key, q] : w.terms) q = ring.neg(q);
    return tensored_add(t, u, w);
}

TensoredElement tensored_compose(const TensoredContext& t, const TensoredElement& u,
                                 const TensoredElement& v) {
    require(u.adst == v.asrc && u.cdst == v.csrc, "tensored composition endpoint mismatch");
    TensoredElement e;
    e.asrc = u.asrc;
    e.csrc = u.csrc;
    e.adst = v.adst;
    e.cdst = v.cdst;
    const PolyRing& ring = t.a->scalars;
    for (const auto& [ku, qu] : u.terms)
        for (const auto& [kv, qv] : v.terms) {
            std::vector<std::string> path = ku.first;
            path.insert(path.end(), kv.first.begin(), kv.first.end());
            Mor cc = t.c->compose(t.c->basis_mor(kv.second), t.c->basis_mor(ku.second));
            for (const auto& [nc, qc] : cc.coeffs) {
                Poly q = ring.mul(ring.mul(qu, qv), qc);
                if (q.is_zero()) continue;
                auto key = std::make_pair(path, nc);
                auto it = e.terms.find(key);
                if (it == e.terms.end()) {
                    e.terms[key] = q;
                } else {
                    it->second = ring.add(it->second, q);
                    if (it->second.is_zero()) e.terms.erase(it);
                }
            }
        }
    return e;
}

TensoredElement tensored_classifying(const TensoredContext& t, const TensorElement& e) {
    require(pi(t.prod, e).zero(), "tensored classifying map needs a kernel element");
    TensoredElement out;
    auto s = t.split_object(e.src);
    auto d = t.split_object(e.dst);
    out.asrc = s.first;
    out.csrc = s.second;
    out.adst = d.first;
    out.cdst = d.second;
    const PolyRing& ring = t.a->scalars;
    for (const auto& [path, q] : e.terms) {
        auto entry = [&](const std::string& pairname) {
            const auto& [na, nc] = t.split_name.at(pairname);
            TensoredElement x;
            auto hs = t.prod->basis_home.at(pairname);
            auto es = t.split_object(hs.first);
            auto ed = t.split_object(hs.second);
            x.asrc = es.first;
            x.csrc = es.second;
            x.adst = ed.first;
            x.cdst = ed.second;
            x.terms[{{na}, nc}] = ring.one();
            return x;
        };
        TensoredElement acc = entry(path[0]);
        for (size_t i = 1; i < path.size(); ++i)
            acc = tensored_compose(t, acc, entry(path[i]));
        for (auto& [key, c] : acc.terms) c = ring.mul(q, c);
        TensoredElement scaled;
        scaled.asrc = acc.asrc;
        scaled.csrc = acc.csrc;
        scaled.adst = acc.adst;
        scaled.cdst = acc.cdst;
        for (const auto& [key, c] : acc.terms)
            if (!c.is_zero()) scaled.terms[key] = c;
        out = tensored_add(t, out, scaled);
    }
    // The value must lie in J A (x) C: grouping on the coefficient name, each
    // group of paths multiplies out to zero in A.
    std::map<std::string, Mor> groups;
    for (const auto& [key, q] : out.terms) {
        auto it = groups.find(key.second);
        if (it == groups.end()) {
            groups[key.second] = t.a->scale(q, path_product(*t.a, key.first));
        } else {
            it->second = t.a->add(it->second, t.a->scale(q, path_product(*t.a, key.first)));
        }
    }
    for (const auto& [nc, m] : groups)
        if (!m.zero())
            throw RingError("tensored classifying map value left the ideal at coefficient " + nc);
    return out;
}

FSplitExtension j_tensor_extension(AlgebroidPtr a, AlgebroidPtr c) {
    FSplitExtension ext;
    ext.label = "tensored universal extension";
    ext.protocol = "tensor";
    ext.base = a;
    ext.coeffs = c;
    auto tctx = std::make_shared<TensoredContext>(tensored_context(a, c));
    ext.tctx = tctx;
    ext.quotient = tctx->prod;

    int sdeg = max_structure_degree(*a);
    ExactnessCertificate cert;
    cert.label = "tensored universal extension";
    cert.base = a->scalars.base;
    cert.objects = static_cast<int>(tctx->prod->objects.size());
    int pad = sdeg;
    auto slot_pad = [pad](int deg) { return pad * deg; };
    auto quot_pad = [pad](int deg) { return deg + 1 + 2 * pad * deg; };

    // Slots of the tensored middle: (path in a, coefficient name, monomial).
    struct Mixed {
        std::vector<std::tuple<std::vector<std::string>, std::string, Mono>> slots;
        std::map<std::tuple<std::vector<std::string>, std::string, Mono>, int> index;
    };
    auto mixed_slots = [tctx, slot_pad](int A, int B, int deg) {
        Mixed s;
        const Algebroid& a = *tctx->a;
        const Algebroid& c = *tctx->c;
        auto sa = tctx->split_object(A);
        auto sb = tctx->split_object(B);
        int nv = a.scalars.nvars();
        auto cit = c.hom_basis.find({sa.second, sb.second});
        if (cit == c.hom_basis.end()) return s;
        for (int len = 1; len <= deg + 1; ++len)
            for (const auto& path : paths_between(a, sa.first, sb.first, len))
                for (const auto& nc : cit->second)
                    for (const auto& mono :
                         monomials_up_to(nv, deg + 1 + slot_pad(deg) - (len - 1))) {
                        s.index[{path, nc, mono}] = static_cast<int>(s.slots.size());
                        s.slots.push_back({path, nc, mono});
                    }
        return s;
    };
    auto prod_slots = [tctx, quot_pad](int A, int B, int deg) {
        return mor_slots(*tctx->prod, A, B, quot_pad(deg));
    };

    cert.middle_valid = [mixed_slots](int A, int B, int deg) {
        Mixed ts = mixed_slots(A, B, deg);
        std::vector<int> valid;
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            int slotdeg = static_cast<int>(std::get<0>(ts.slots[j]).size()) - 1 +
                          mono_degree(std::get<2>(ts.slots[j]));
            if (slotdeg <= deg + 1) valid.push_back(static_cast<int>(j));
        }
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) m.at(valid[j], static_cast<int>(j)) = Rat(1);
        return m;
    };
    cert.quotient_valid = [prod_slots](int A, int B, int deg) {
        MorSlots qs = prod_slots(A, B, deg);
        std::vector<int> valid;
        for (size_t j = 0; j < qs.slots.size(); ++j)
            if (mono_degree(qs.slots[j].second) <= deg) valid.push_back(static_cast<int>(j));
        Mat m(static_cast<int>(qs.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) m.at(valid[j], static_cast<int>(j)) = Rat(1);
        return m;
    };
    cert.surjection = [tctx, mixed_slots, prod_slots](int A, int B, int deg) {
        Mixed ts = mixed_slots(A, B, deg);
        MorSlots qs = prod_slots(A, B, deg);
        const BaseRing& R = tctx->a->scalars.base;
        Mat m(static_cast<int>(qs.slots.size()), static_cast<int>(ts.slots.size()));
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            const auto& [path, nc, mono] = ts.slots[j];
            Mor p = path_product(*tctx->a, path);
            for (const auto& [na, q] : p.coeffs)
                for (const auto& [nu, r] : q.terms) {
                    int row = qs.index.at({tensor_basis_name(na, nc), mono_mul(mono, nu)});
                    m.at(row, static_cast<int>(j)) =
                        R.normalize(R.add(m.at(row, static_cast<int>(j)), r));
                }
        }
        return m;
    };
    cert.splitting = [tctx, mixed_slots, prod_slots](int A, int B, int deg) {
        Mixed ts = mixed_slots(A, B, deg);
        MorSlots qs = prod_slots(A, B, deg);
        std::vector<int> valid;
        for (size_t j = 0; j < qs.slots.size(); ++j)
            if (mono_degree(qs.slots[j].second) <= deg) valid.push_back(static_cast<int>(j));
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(valid.size()));
        for (size_t j = 0; j < valid.size(); ++j) {
            const auto& [pairname, mono] = qs.slots[valid[j]];
            const auto& [na, nc] = tctx->split_name.at(pairname);
            m.at(ts.index.at({std::vector<std::string>{na}, nc, mono}), static_cast<int>(j)) =
                Rat(1);
        }
        return m;
    };
    cert.kernel_columns = [tctx, mixed_slots](int A, int B, int deg) {
        Mixed ts = mixed_slots(A, B, deg);
        const BaseRing& R = tctx->a->scalars.base;
        std::vector<int> gens;
        for (size_t j = 0; j < ts.slots.size(); ++j) {
            int len = static_cast<int>(std::get<0>(ts.slots[j]).size());
            int slotdeg = len - 1 + mono_degree(std::get<2>(ts.slots[j]));
            if (len >= 2 && slotdeg <= deg + 1) gens.push_back(static_cast<int>(j));
        }
        Mat m(static_cast<int>(ts.slots.size()), static_cast<int>(gens.size()));
        for (size_t j = 0; j < gens.size(); ++j) {
            const auto& [path, nc, mono] = ts.slots[gens[j]];
            m.at(gens[j], static_cast<int>(j)) = Rat(1);
            Mor p = path_product(*tctx->a, path);
            for (const auto& [na, q] : p.coeffs)
                for (const auto& [nu, r] : q.terms) {
                    int row =
                        ts.index.at({std::vector<std::string>{na}, nc, mono_mul(mono, nu)});
                    m.at(row, static_cast<int>(j)) =
                        R.normalize(R.sub(m.at(row, static_cast<int>(j)), r));
                }
        }
        return m;
    };
    ext.coords = cert;
    return ext;
}

JCarrier iterate_J(AlgebroidPtr a, int k) {
    require(k >= 0 && k <= 3, "iterated J is supported to depth 3");
    return JCarrier{a, k};
}

bool JCarrier::contains(const NestedElement& e) const {
    if (e.depth != depth) return false;
    if (depth == 0) return true;
    if (depth == 1) return pi(a, e.flat).zero();
    JCarrier inner{a, depth - 1};
    for (const auto& [c, entries] : e.chains) {
        if (entries.empty()) return false;
        for (const NestedElement& v : entries)
            if (!inner.contains(v)) return false;
    }
    return nested_is_zero(a, nested_pi(a, e));
}

void JCarrier::require_member(const NestedElement& e) const {
    if (!contains(e))
        throw RingError("element is not in the iterated kernel at depth " +
                        std::to_string(depth));
}

} // namespace kkalg
