#include "kkalg/poly.hpp"

#include <algorithm>

namespace kkalg {

bool Poly::operator<(const Poly& o) const {
    if (nvars != o.nvars) return nvars < o.nvars;
    auto it = terms.begin();
    auto jt = o.terms.begin();
    for (; it != terms.end() && jt != o.terms.end(); ++it, ++jt) {
        if (it->first != jt->first) return it->first < jt->first;
        if (!(it->second == jt->second)) return it->second < jt->second;
    }
    return jt != o.terms.end();
}

Poly PolyRing::zero() const { return Poly{nvars(), {}}; }

Poly PolyRing::constant(const Rat& c) const {
    Poly p{nvars(), {}};
    Rat v = base.normalize(c);
    if (!v.is_zero()) p.terms[Mono(nvars(), 0)] = v;
    return p;
}

Poly PolyRing::var(int i) const {
    if (i < 0 || i >= nvars()) throw RingError("variable index out of range");
    Poly p{nvars(), {}};
    Mono m(nvars(), 0);
    m[i] = 1;
    p.terms[m] = base.normalize(Rat(1));
    return p;
}

int PolyRing::var_index(const std::string& name) const {
    for (int i = 0; i < nvars(); ++i)
        if (vars[i] == name) return i;
    return -1;
}

Poly PolyRing::var_named(const std::string& name) const {
    int i = var_index(name);
    if (i < 0) throw RingError("unknown generator: " + name);
    return var(i);
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
    if (a.nvars != nvars() || b.nvars != nvars()) throw RingError("poly ring mismatch");
    Poly r = a;
    for (const auto& [m, c] : b.terms) {
        auto it = r.terms.find(m);
        if (it == r.terms.end()) {
            Rat v = base.normalize(c);
            if (!v.is_zero()) r.terms[m] = v;
        } else {
            Rat v = base.add(it->second, c);
            if (v.is_zero())
                r.terms.erase(it);
            else
                it->second = v;
        }
    }
    return r;
}

Poly PolyRing::neg(const Poly& a) const {
    Poly r = a;
    for (auto& [m, c] : r.terms) c = base.neg(c);
    return r;
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
    if (a.nvars != nvars() || b.nvars != nvars()) throw RingError("poly ring mismatch");
    Poly r{nvars(), {}};
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Mono m(nvars());
            for (int i = 0; i < nvars(); ++i) m[i] = ma[i] + mb[i];
            Rat v = base.mul(ca, cb);
            auto it = r.terms.find(m);
            if (it == r.terms.end()) {
                if (!v.is_zero()) r.terms[m] = v;
            } else {
                Rat w = base.add(it->second, v);
                if (w.is_zero())
                    r.terms.erase(it);
                else
                    it->second = w;
            }
        }
    return r;
}

Poly PolyRing::scale(const Rat& c, const Poly& a) const {
    Poly r{nvars(), {}};
    for (const auto& [m, v] : a.terms) {
        Rat w = base.mul(c, v);
        if (!w.is_zero()) r.terms[m] = w;
    }
    return r;
}

Poly PolyRing::pow(const Poly& a, int k) const {
    if (k < 0) throw RingError("negative polynomial power");
    Poly r = one();
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

Rat PolyRing::coeff(const Poly& a, const Mono& m) const {
    auto it = a.terms.find(m);
    return it == a.terms.end() ? Rat(0) : it->second;
}

Rat PolyRing::constant_coeff(const Poly& a) const { return coeff(a, Mono(nvars(), 0)); }

int PolyRing::total_degree(const Poly& a) const {
    int d = -1;
    for (const auto& [m, c] : a.terms) {
        int s = 0;
        for (int e : m) s += e;
        d = std::max(d, s);
    }
    return d;
}

Poly PolyRing::substitute(const Poly& a, const PolyRing& target,
                          const std::vector<Poly>& images) const {
    if (static_cast<int>(images.size()) != nvars())
        throw RingError("substitution needs one image per generator");
    Poly r = target.zero();
    for (const auto& [m, c] : a.terms) {
        Poly t = target.constant(c);
        for (int i = 0; i < nvars(); ++i)
            for (int e = 0; e < m[i]; ++e) t = target.mul(t, images[i]);
        r = target.add(r, t);
    }
    return r;
}

Poly PolyRing::eval_var(const Poly& a, int i, const Rat& value) const {
    std::vector<Poly> images;
    images.reserve(nvars());
    for (int j = 0; j < nvars(); ++j)
        images.push_back(j == i ? constant(value) : var(j));
    return substitute(a, *this, images);
}

Poly PolyRing::evaluate(const Poly& a, const std::map<std::string, Rat>& assignment) const {
    Poly r = a;
    for (const auto& [name, value] : assignment) {
        int i = var_index(name);
        if (i < 0) throw RingError("unknown generator: " + name);
        r = eval_var(r, i, value);
    }
    return r;
}

std::string PolyRing::str(const Poly& a) const {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : a.terms) {
        std::string mono;
        for (int i = 0; i < nvars(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars[i];
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        std::string coeffs;
        if (mono.empty())
            coeffs = c.str();
        else if (c.is_one())
            coeffs = "";
        else if (c == Rat(-1) && base.kind != RingKind::mod)
            coeffs = "-";
        else
            coeffs = c.str() + "*";
        std::string term = coeffs + mono;
        if (term.empty()) term = "1";
        if (out.empty())
            out = term;
        else if (!term.empty() && term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    return out;
}

Poly RingMap::apply(const Poly& a) const { return from.substitute(a, to, images); }

RingMap RingMap::then(const RingMap& h) const {
    if (!(to == h.from)) throw RingError("ring map composition mismatch");
    RingMap r{from, h.to, {}};
    r.images.reserve(images.size());
    for (const auto& img : images) r.images.push_back(h.apply(img));
    return r;
}

RingMap identity_map(const PolyRing& r) {
    RingMap m{r, r, {}};
    for (int i = 0; i < r.nvars(); ++i) m.images.push_back(r.var(i));
    return m;
}

PolyRing delta_ring(const BaseRing& base, int n) {
    PolyRing r{base, {}};
    for (int i = 1; i <= n; ++i) r.vars.push_back("t" + std::to_string(i));
    return r;
}

RingMap simplicial_face_map(const BaseRing& base, int n, int i) {
    if (n < 1 || i < 0 || i > n) throw RingError("face index out of range");
    PolyRing from = delta_ring(base, n);
    PolyRing to = delta_ring(base, n - 1);
    RingMap m{from, to, {}};
    // Generator t_j is barycentric coordinate j (t0 eliminated on both sides).
    for (int j = 1; j <= n; ++j) {
        if (i == 0) {
            if (j == 1) {
                // t1 picks up the eliminated coordinate: 1 - sum of the rest.
                Poly p = to.one();
                for (int k = 1; k <= n - 1; ++k) p = to.sub(p, to.var(k - 1));
                m.images.push_back(p);
            } else {
                m.images.push_back(to.var(j - 2));
            }
        } else {
            if (j < i)
                m.images.push_back(to.var(j - 1));
            else if (j == i)
                m.images.push_back(to.zero());
            else
                m.images.push_back(to.var(j - 2));
        }
    }
    return m;
}

RingMap simplicial_degeneracy_map(const BaseRing& base, int n, int i) {
    if (i < 0 || i > n) throw RingError("degeneracy index out of range");
    PolyRing from = delta_ring(base, n);
    PolyRing to = delta_ring(base, n + 1);
    RingMap m{from, to, {}};
    for (int j = 1; j <= n; ++j) {
        if (j < i)
            m.images.push_back(to.var(j - 1));
        else if (j == i)
            m.images.push_back(to.add(to.var(j - 1), to.var(j)));
        else
            m.images.push_back(to.var(j));
    }
    return m;
}

PolyElement poly_arith(const PolyElement& a, const PolyElement& b, PolyOp op) {
    if (!(a.ring == b.ring)) throw RingError("poly_arith: ring mismatch");
    switch (op) {
        case PolyOp::add: return {a.ring, a.ring.add(a.p, b.p)};
        case PolyOp::sub: return {a.ring, a.ring.sub(a.p, b.p)};
        case PolyOp::mul: return {a.ring, a.ring.mul(a.p, b.p)};
    }
    throw RingError("poly_arith: unknown op");
}

PolyElement evaluate(const PolyElement& a, const std::map<std::string, Rat>& assignment) {
    return {a.ring, a.ring.evaluate(a.p, assignment)};
}

PolyElement simplicial_face(const PolyElement& a, int i) {
    RingMap m = simplicial_face_map(a.ring.base, a.ring.nvars(), i);
    return {m.to, m.apply(a.p)};
}

PolyElement simplicial_degeneracy(const PolyElement& a, int i) {
    RingMap m = simplicial_degeneracy_map(a.ring.base, a.ring.nvars(), i);
    return {m.to, m.apply(a.p)};
}

namespace {

void collect_monomials(int nvars, int d, Mono& cur, int pos, std::vector<Mono>& out) {
    if (pos == nvars) {
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= d; ++e) {
        cur[pos] = e;
        collect_monomials(nvars, d - e, cur, pos + 1, out);
    }
    cur[pos] = 0;
}

} // namespace

std::vector<Mono> monomials_up_to(int nvars, int d) {
    std::vector<Mono> out;
    Mono cur(nvars, 0);
    collect_monomials(nvars, d, cur, 0, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace kkalg
