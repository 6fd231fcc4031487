#include "kkalg/power.hpp"

#include <algorithm>
#include <tuple>

namespace kkalg {

PolyRing delta_extension(const PolyRing& prefix, int d) {
    if (d < 0) throw RingError("simplex dimension must be nonnegative");
    PolyRing out = prefix;
    for (int k = 1; k <= d; ++k) {
        std::string name = "t" + std::to_string(k);
        if (out.var_index(name) >= 0)
            throw RingError("simplex generator name collision: " + name);
        out.vars.push_back(name);
    }
    return out;
}

RingMap extended_face_map(const PolyRing& prefix, int d, int i) {
    if (d < 1 || i < 0 || i > d) throw RingError("face index out of range");
    RingMap rm;
    rm.from = delta_extension(prefix, d);
    rm.to = delta_extension(prefix, d - 1);
    int np = prefix.nvars();
    for (int k = 0; k < np; ++k) rm.images.push_back(rm.to.var(k));
    for (int j = 1; j <= d; ++j) {
        if (i == 0) {
            if (j == 1) {
                Poly p = rm.to.one();
                for (int k = 1; k <= d - 1; ++k) p = rm.to.sub(p, rm.to.var(np + k - 1));
                rm.images.push_back(p);
            } else {
                rm.images.push_back(rm.to.var(np + j - 2));
            }
        } else if (j < i) {
            rm.images.push_back(rm.to.var(np + j - 1));
        } else if (j == i) {
            rm.images.push_back(rm.to.zero());
        } else {
            rm.images.push_back(rm.to.var(np + j - 2));
        }
    }
    return rm;
}

RingMap extended_degeneracy_map(const PolyRing& prefix, int d, int i) {
    if (d < 0 || i < 0 || i > d) throw RingError("degeneracy index out of range");
    RingMap rm;
    rm.from = delta_extension(prefix, d);
    rm.to = delta_extension(prefix, d + 1);
    int np = prefix.nvars();
    for (int k = 0; k < np; ++k) rm.images.push_back(rm.to.var(k));
    for (int j = 1; j <= d; ++j) {
        if (j < i) {
            rm.images.push_back(rm.to.var(np + j - 1));
        } else if (j == i) {
            rm.images.push_back(rm.to.add(rm.to.var(np + i - 1), rm.to.var(np + i)));
        } else {
            rm.images.push_back(rm.to.var(np + j));
        }
    }
    return rm;
}

Mor map_coefficients(const RingMap& rm, const Mor& u) {
    Mor out;
    out.src = u.src;
    out.dst = u.dst;
    for (const auto& [name, c] : u.coeffs) {
        Poly img = rm.apply(c);
        if (!img.is_zero()) out.coeffs.emplace(name, std::move(img));
    }
    return out;
}

// Inclusion of a polynomial ring into an extension that keeps it as a prefix.
static RingMap inclusion_map(const PolyRing& from, const PolyRing& to) {
    if (to.nvars() < from.nvars()) throw RingError("scalar extension lost generators");
    for (int k = 0; k < from.nvars(); ++k)
        if (to.vars[k] != from.vars[k])
            throw RingError("scalar extension does not keep the old generators as a prefix");
    RingMap rm{from, to, {}};
    for (int k = 0; k < from.nvars(); ++k) rm.images.push_back(to.var(k));
    return rm;
}

FamilyElement PowerAlgebroid::zero(int a, int b) const {
    FamilyElement u;
    u.src = a;
    u.dst = b;
    u.values.resize(space.dim() + 1);
    for (int d = 0; d <= space.dim(); ++d)
        for (int i = 0; i < space.cell_count(d); ++i)
            u.values[d].push_back(level[d]->zero_mor(a, b));
    return u;
}

FamilyElement PowerAlgebroid::constant_family(const Mor& x) const {
    FamilyElement u;
    u.src = x.src;
    u.dst = x.dst;
    u.values.resize(space.dim() + 1);
    for (int d = 0; d <= space.dim(); ++d) {
        RingMap incl = inclusion_map(base->scalars, level[d]->scalars);
        for (int i = 0; i < space.cell_count(d); ++i)
            u.values[d].push_back(map_coefficients(incl, x));
    }
    return u;
}

FamilyElement PowerAlgebroid::add(const FamilyElement& u, const FamilyElement& v) const {
    if (u.src != v.src || u.dst != v.dst) throw RingError("family endpoint mismatch");
    FamilyElement out = u;
    for (int d = 0; d <= space.dim(); ++d)
        for (int i = 0; i < space.cell_count(d); ++i)
            out.values[d][i] = level[d]->add(u.values[d][i], v.values[d][i]);
    return out;
}

FamilyElement PowerAlgebroid::sub(const FamilyElement& u, const FamilyElement& v) const {
    if (u.src != v.src || u.dst != v.dst) throw RingError("family endpoint mismatch");
    FamilyElement out = u;
    for (int d = 0; d <= space.dim(); ++d)
        for (int i = 0; i < space.cell_count(d); ++i)
            out.values[d][i] = level[d]->sub(u.values[d][i], v.values[d][i]);
    return out;
}

FamilyElement PowerAlgebroid::scale_rat(const Rat& c, const FamilyElement& u) const {
    FamilyElement out = u;
    for (int d = 0; d <= space.dim(); ++d)
        for (int i = 0; i < space.cell_count(d); ++i)
            out.values[d][i] = level[d]->scale_rat(c, u.values[d][i]);
    return out;
}

FamilyElement PowerAlgebroid::compose(const FamilyElement& y, const FamilyElement& x) const {
    if (x.dst != y.src) throw RingError("family composition endpoint mismatch");
    FamilyElement out;
    out.src = x.src;
    out.dst = y.dst;
    out.values.resize(space.dim() + 1);
    for (int d = 0; d <= space.dim(); ++d)
        for (int i = 0; i < space.cell_count(d); ++i)
            out.values[d].push_back(level[d]->compose(y.values[d][i], x.values[d][i]));
    return out;
}

Mor PowerAlgebroid::value_of_simplex(const FamilyElement& u, const Simplex& s) const {
    if (!s.degenerate()) {
        if (s.cell_dim >= static_cast<int>(u.values.size()) ||
            s.cell >= static_cast<int>(u.values[s.cell_dim].size()))
            throw RingError("family value requested for a missing cell");
        return u.values[s.cell_dim][s.cell];
    }
    int m = s.dim();
    int r = 0;
    while (s.surj[r] != s.surj[r + 1]) ++r;
    Simplex inner = s;
    inner.surj.erase(inner.surj.begin() + r);
    Mor v = value_of_simplex(u, inner);
    return map_coefficients(extended_degeneracy_map(base->scalars, m - 1, r), v);
}

Mor PowerAlgebroid::vertex_value(const FamilyElement& u, int vertex) const {
    if (vertex < 0 || vertex >= space.cell_count(0))
        throw RingError("vertex index out of range");
    return u.values[0][vertex];
}

void PowerAlgebroid::validate_element(const FamilyElement& u) const {
    if (static_cast<int>(u.values.size()) != space.dim() + 1)
        throw RingError("family has the wrong number of levels");
    for (int d = 0; d <= space.dim(); ++d) {
        if (static_cast<int>(u.values[d].size()) != space.cell_count(d))
            throw RingError("family has the wrong number of cell values");
        int nv = level[d]->scalars.nvars();
        for (int i = 0; i < space.cell_count(d); ++i) {
            const Mor& m = u.values[d][i];
            if (m.src != u.src || m.dst != u.dst)
                throw RingError("family cell value has the wrong endpoints");
            for (const auto& [name, c] : m.coeffs) {
                if (c.nvars != nv)
                    throw RingError("family cell value lives over the wrong ring");
                auto it = level[d]->basis_home.find(name);
                if (it == level[d]->basis_home.end() ||
                    it->second != std::make_pair(u.src, u.dst))
                    throw RingError("family cell value uses a foreign basis name");
            }
        }
    }
    for (int d = 1; d <= space.dim(); ++d)
        for (int k = 0; k <= d; ++k) {
            RingMap fm = extended_face_map(base->scalars, d, k);
            for (int i = 0; i < space.cell_count(d); ++i) {
                Mor lhs = map_coefficients(fm, u.values[d][i]);
                Mor rhs = value_of_simplex(u, space.faces[d][i][k]);
                if (!(lhs == rhs))
                    throw RingError("family is not compatible with face " + std::to_string(k) +
                                    " of cell " + space.cell_name(d, i));
            }
        }
}

PowerAlgebroid power(AlgebroidPtr a, const FiniteSimplicialSet& x) {
    x.validate();
    PowerAlgebroid pw;
    pw.base = a;
    pw.space = x;
    int top = std::max(x.dim(), 0);
    for (int d = 0; d <= top; ++d)
        pw.level.push_back(extend_scalars(*a, delta_extension(a->scalars, d)));
    return pw;
}

FamilyElement pullback_family(const PowerAlgebroid& px, const PowerAlgebroid& py,
                              const SimplicialMap& g, const FamilyElement& w) {
    FamilyElement out;
    out.src = w.src;
    out.dst = w.dst;
    out.values.resize(px.space.dim() + 1);
    for (int d = 0; d <= px.space.dim(); ++d)
        for (int i = 0; i < px.space.cell_count(d); ++i)
            out.values[d].push_back(py.value_of_simplex(w, g.apply(identity_simplex(d, i))));
    return out;
}

FamilyCoords family_coords(const PowerAlgebroid& pw, int a, int b, int deg) {
    if (deg < 0) throw RingError("degree window must be nonnegative");
    FamilyCoords fc;
    fc.pw = &pw;
    fc.a = a;
    fc.b = b;
    fc.deg = deg;
    const auto& bs = pw.base->basis(a, b);
    for (int d = 0; d <= pw.space.dim(); ++d) {
        auto monos = monomials_up_to(pw.level[d]->scalars.nvars(), deg);
        for (int i = 0; i < pw.space.cell_count(d); ++i)
            for (const auto& name : bs)
                for (const auto& mo : monos)
                    fc.slots.push_back({d, i, name, mo});
    }
    return fc;
}

std::vector<Rat> FamilyCoords::to_vec(const FamilyElement& u) const {
    if (u.src != a || u.dst != b)
        throw RingError("family endpoints do not match the coordinate window");
    std::map<std::tuple<int, int, std::string, Mono>, int> at;
    for (size_t j = 0; j < slots.size(); ++j)
        at[{slots[j].dim, slots[j].cell, slots[j].basis, slots[j].mono}] = static_cast<int>(j);
    std::vector<Rat> v(slots.size(), Rat(0));
    for (size_t d = 0; d < u.values.size(); ++d)
        for (size_t i = 0; i < u.values[d].size(); ++i)
            for (const auto& [name, c] : u.values[d][i].coeffs)
                for (const auto& [mono, r] : c.terms) {
                    auto it = at.find({static_cast<int>(d), static_cast<int>(i), name, mono});
                    if (it == at.end())
                        throw RingError("family coefficient outside the degree window");
                    v[it->second] = r;
                }
    return v;
}

FamilyElement FamilyCoords::from_vec(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != dim())
        throw RingError("coordinate vector has the wrong length");
    const BaseRing& ring = pw->base->scalars.base;
    FamilyElement u = pw->zero(a, b);
    for (size_t j = 0; j < slots.size(); ++j) {
        Rat c = ring.normalize(v[j]);
        if (c.is_zero()) continue;
        const Slot& s = slots[j];
        Poly term{pw->level[s.dim]->scalars.nvars(), {{s.mono, c}}};
        Mor m{a, b, {{s.basis, term}}};
        u.values[s.dim][s.cell] = pw->level[s.dim]->add(u.values[s.dim][s.cell], m);
    }
    return u;
}

Mat family_constraints(const FamilyCoords& fc) {
    const PowerAlgebroid& pw = *fc.pw;
    const auto& bs = pw.base->basis(fc.a, fc.b);
    std::map<std::tuple<int, int, int, std::string, Mono>, int> row_at;
    int nrows = 0;
    for (int d = 1; d <= pw.space.dim(); ++d) {
        auto monos = monomials_up_to(pw.level[d - 1]->scalars.nvars(), fc.deg);
        for (int i = 0; i < pw.space.cell_count(d); ++i)
            for (int k = 0; k <= d; ++k)
                for (const auto& name : bs)
                    for (const auto& mo : monos)
                        row_at[{d, i, k, name, mo}] = nrows++;
    }
    std::vector<std::vector<RingMap>> fm(pw.space.dim() + 1);
    for (int d = 1; d <= pw.space.dim(); ++d)
        for (int k = 0; k <= d; ++k)
            fm[d].push_back(extended_face_map(pw.base->scalars, d, k));
    Mat cm(nrows, fc.dim());
    for (int j = 0; j < fc.dim(); ++j) {
        std::vector<Rat> e(fc.dim(), Rat(0));
        e[j] = Rat(1);
        FamilyElement u = fc.from_vec(e);
        for (int d = 1; d <= pw.space.dim(); ++d)
            for (int i = 0; i < pw.space.cell_count(d); ++i)
                for (int k = 0; k <= d; ++k) {
                    Mor lhs = map_coefficients(fm[d][k], u.values[d][i]);
                    Mor rhs = pw.value_of_simplex(u, pw.space.faces[d][i][k]);
                    Mor diff = pw.level[d - 1]->sub(lhs, rhs);
                    for (const auto& [name, c] : diff.coeffs)
                        for (const auto& [mono, r] : c.terms) {
                            auto it = row_at.find({d, i, k, name, mono});
                            if (it == row_at.end())
                                throw RingError("face constraint left the degree window");
                            cm.at(it->second, j) = r;
                        }
                }
    }
    return cm;
}

std::vector<FamilyElement> valid_family_basis(const FamilyCoords& fc) {
    Mat cm = family_constraints(fc);
    auto gens = kernel_gens(fc.pw->base->scalars.base, cm);
    std::vector<FamilyElement> out;
    for (const auto& g : gens) {
        FamilyElement u = fc.from_vec(g);
        fc.pw->validate_element(u);
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<FamilyElement> basepoint_kernel(const PowerAlgebroid& pw, int a, int b, int deg) {
    if (!pw.space.basepoint) throw RingError("basepoint kernel needs a pointed complex");
    FamilyCoords fc = family_coords(pw, a, b, deg);
    Mat cm = family_constraints(fc);
    std::vector<int> extra;
    for (size_t j = 0; j < fc.slots.size(); ++j)
        if (fc.slots[j].dim == 0 && fc.slots[j].cell == *pw.space.basepoint)
            extra.push_back(static_cast<int>(j));
    Mat full(cm.rows + static_cast<int>(extra.size()), fc.dim());
    for (int i = 0; i < cm.rows; ++i)
        for (int j = 0; j < cm.cols; ++j) full.at(i, j) = cm.at(i, j);
    for (size_t r = 0; r < extra.size(); ++r) full.at(cm.rows + static_cast<int>(r), extra[r]) = Rat(1);
    auto gens = kernel_gens(pw.base->scalars.base, full);
    std::vector<FamilyElement> out;
    for (const auto& g : gens) {
        FamilyElement u = fc.from_vec(g);
        pw.validate_element(u);
        out.push_back(std::move(u));
    }
    return out;
}

// Loop generators continue the canonical q-numbering already present in the
// core, so iterated loop powers and flat ones agree on the nose.
static int next_loop_index(const PolyRing& r) {
    int mx = 0;
    for (const auto& v : r.vars) {
        if (v.size() < 2 || v.size() > 9 || v[0] != 'q') continue;
        bool digits = true;
        for (size_t k = 1; k < v.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(v[k]))) digits = false;
        if (digits) mx = std::max(mx, std::stoi(v.substr(1)));
    }
    return mx + 1;
}

bool LoopPower::element_valid(const Mor& u) const {
    const PolyRing& r = ext->scalars;
    int np = core->scalars.nvars();
    for (int k = 0; k < n; ++k)
        for (int v = 0; v <= 1; ++v)
            for (const auto& [name, c] : u.coeffs)
                if (!r.eval_var(c, np + k, Rat(v)).is_zero()) return false;
    return true;
}

void LoopPower::require_valid(const Mor& u) const {
    if (!element_valid(u))
        throw RingError("element does not vanish on the cube boundary");
}

Poly LoopPower::window() const {
    const PolyRing& r = ext->scalars;
    int np = core->scalars.nvars();
    Poly w = r.one();
    for (int k = 0; k < n; ++k) {
        Poly q = r.var(np + k);
        w = r.mul(w, r.sub(q, r.mul(q, q)));
    }
    return w;
}

std::vector<Mor> LoopPower::hom_basis_upto(int a, int b, int deg) const {
    std::vector<Mor> out;
    Poly w = window();
    for (const auto& name : ext->basis(a, b))
        for (const auto& mo : monomials_up_to(ext->scalars.nvars(), deg)) {
            Poly m{ext->scalars.nvars(), {{mo, Rat(1)}}};
            out.push_back(ext->scale(ext->scalars.mul(w, m), ext->basis_mor(name)));
        }
    return out;
}

LoopPower loop_power(AlgebroidPtr core, int n) {
    if (n < 0) throw RingError("loop power needs a nonnegative exponent");
    LoopPower lp;
    lp.core = core;
    lp.n = n;
    PolyRing r = core->scalars;
    int start = next_loop_index(r);
    for (int k = 0; k < n; ++k) {
        std::string name = "q" + std::to_string(start + k);
        if (r.var_index(name) >= 0)
            throw RingError("loop generator name collision: " + name);
        r.vars.push_back(name);
    }
    lp.ext = extend_scalars(*core, r);
    return lp;
}

SmashIso smash_iso(AlgebroidPtr a, int m, int n) {
    SmashIso s;
    s.inner = loop_power(a, m);
    s.nested = loop_power(s.inner.ext, n);
    s.flat = loop_power(a, m + n);
    const Algebroid& x = *s.nested.ext;
    const Algebroid& y = *s.flat.ext;
    if (x.scalars != y.scalars || x.objects != y.objects || x.hom_basis != y.hom_basis ||
        x.structure != y.structure || x.units != y.units)
        throw RingError("iterated and flat loop algebroids disagree");
    std::vector<int> objmap;
    for (size_t i = 0; i < x.objects.size(); ++i) objmap.push_back(static_cast<int>(i));
    std::map<std::string, Mor> fwd, bwd;
    for (const auto& [name, home] : x.basis_home) {
        (void)home;
        fwd[name] = y.basis_mor(name);
        bwd[name] = x.basis_mor(name);
    }
    s.forward = AlgHom{s.nested.ext, s.flat.ext, objmap, fwd, std::nullopt};
    s.backward = AlgHom{s.flat.ext, s.nested.ext, objmap, bwd, std::nullopt};
    return s;
}

static std::vector<Rat> mat_col(const Mat& m, int j) {
    std::vector<Rat> v(m.rows);
    for (int i = 0; i < m.rows; ++i) v[i] = m.at(i, j);
    return v;
}

static std::vector<std::vector<Rat>> mat_cols(const Mat& m) {
    std::vector<std::vector<Rat>> out;
    for (int j = 0; j < m.cols; ++j) out.push_back(mat_col(m, j));
    return out;
}

static std::vector<Rat> mat_vec(const BaseRing& ring, const Mat& m, const std::vector<Rat>& v) {
    std::vector<Rat> out(m.rows, Rat(0));
    for (int i = 0; i < m.rows; ++i) {
        Rat s(0);
        for (int j = 0; j < m.cols; ++j) s = ring.add(s, ring.mul(m.at(i, j), v[j]));
        out[i] = s;
    }
    return out;
}

void verify_exactness(const ExactnessCertificate& e, int a, int b, int deg) {
    const BaseRing& R = e.base;
    Mat mv = e.middle_valid(a, b, deg);
    Mat qv = e.quotient_valid(a, b, deg);
    Mat pi = e.surjection(a, b, deg);
    Mat sp = e.splitting(a, b, deg);
    Mat kc = e.kernel_columns(a, b, deg);
    auto fail = [&](const std::string& msg) { throw RingError(e.label + ": " + msg); };
    if (pi.cols != mv.rows || pi.rows != qv.rows) fail("surjection shape mismatch");
    if (sp.rows != mv.rows || sp.cols != qv.cols) fail("splitting shape mismatch");
    if (kc.rows != mv.rows) fail("kernel shape mismatch");
    if (!(mat_mul(R, pi, sp) == qv)) fail("splitting is not a section of the surjection");
    auto mgens = mat_cols(mv);
    for (int j = 0; j < sp.cols; ++j)
        if (!span_contains(R, mgens, mat_col(sp, j))) fail("splitting leaves the valid middle");
    Mat pik = mat_mul(R, pi, kc);
    for (const Rat& x : pik.a)
        if (!R.normalize(x).is_zero()) fail("kernel columns do not map to zero");
    for (int j = 0; j < kc.cols; ++j)
        if (!span_contains(R, mgens, mat_col(kc, j))) fail("kernel columns leave the valid middle");
    Mat pim = mat_mul(R, pi, mv);
    std::vector<std::vector<Rat>> lifted;
    for (const auto& c : kernel_gens(R, pim)) lifted.push_back(mat_vec(R, mv, c));
    if (!spans_equal(R, lifted, mat_cols(kc), mv.rows))
        fail("kernel of the surjection does not match the declared generators");
}

Mor PathExtensionParts::splitting(const Mor& x, const Mor& y) const {
    if (x.src != y.src || x.dst != y.dst) throw RingError("splitting endpoint mismatch");
    const PolyRing& mid = middle->scalars;
    RingMap incl = inclusion_map(base->scalars, mid);
    Poly t = mid.var(base->scalars.nvars());
    Poly omt = mid.sub(mid.one(), t);
    return middle->add(middle->scale(omt, map_coefficients(incl, x)),
                       middle->scale(t, map_coefficients(incl, y)));
}

bool PathExtensionParts::in_loop(const Mor& p) const {
    return e0.apply(p).zero() && e1.apply(p).zero();
}

PathExtensionParts path_extension_parts(AlgebroidPtr a) {
    PathExtensionParts pe;
    pe.base = a;
    PolyRing mid_ring = delta_extension(a->scalars, 1);
    pe.middle = extend_scalars(*a, mid_ring);
    pe.quotient = direct_sum_algebroid(a);
    std::vector<int> objmap;
    for (size_t i = 0; i < a->objects.size(); ++i) objmap.push_back(static_cast<int>(i));
    std::map<std::string, Mor> images;
    for (const auto& [name, home] : a->basis_home) {
        (void)home;
        images[name] = a->basis_mor(name);
    }
    // Evaluation at t = 0 is the face map opposite vertex 0, at t = 1 the one
    // opposite vertex 1.
    pe.e0 = AlgHom{pe.middle, a, objmap, images, extended_face_map(a->scalars, 1, 1)};
    pe.e1 = AlgHom{pe.middle, a, objmap, images, extended_face_map(a->scalars, 1, 0)};

    int np = a->scalars.nvars();
    AlgebroidPtr base = a;
    AlgebroidPtr middle = pe.middle;
    pe.generic.label = "path extension";
    pe.generic.base = a->scalars.base;
    pe.generic.objects = static_cast<int>(a->objects.size());

    // Middle slots carry degree deg + 1 over the path ring; quotient slots are
    // two base blocks at ambient degree deg + 1, with the valid basis cut at deg.
    auto middle_slots = [base, middle, np](int aa, int bb, int deg) {
        std::vector<std::pair<std::string, Mono>> out;
        for (const auto& name : base->basis(aa, bb))
            for (const auto& mo : monomials_up_to(np + 1, deg + 1)) out.push_back({name, mo});
        return out;
    };
    auto quotient_slots = [base, np](int aa, int bb, int deg) {
        std::vector<std::tuple<int, std::string, Mono>> out;
        for (int block = 0; block <= 1; ++block)
            for (const auto& name : base->basis(aa, bb))
                for (const auto& mo : monomials_up_to(np, deg + 1)) out.push_back({block, name, mo});
        return out;
    };
    pe.generic.middle_valid = [middle_slots](int aa, int bb, int deg) {
        int n = static_cast<int>(middle_slots(aa, bb, deg).size());
        return Mat::identity(n);
    };
    pe.generic.quotient_valid = [base, quotient_slots, np](int aa, int bb, int deg) {
        auto qs = quotient_slots(aa, bb, deg);
        std::vector<int> keep;
        for (size_t j = 0; j < qs.size(); ++j) {
            int total = 0;
            for (int ex : std::get<2>(qs[j])) total += ex;
            if (total <= deg) keep.push_back(static_cast<int>(j));
        }
        (void)base;
        (void)np;
        Mat out(static_cast<int>(qs.size()), static_cast<int>(keep.size()));
        for (size_t c = 0; c < keep.size(); ++c) out.at(keep[c], static_cast<int>(c)) = Rat(1);
        return out;
    };
    pe.generic.surjection = [middle_slots, quotient_slots, np](int aa, int bb, int deg) {
        auto ms = middle_slots(aa, bb, deg);
        auto qs = quotient_slots(aa, bb, deg);
        std::map<std::tuple<int, std::string, Mono>, int> qat;
        for (size_t j = 0; j < qs.size(); ++j) qat[qs[j]] = static_cast<int>(j);
        Mat out(static_cast<int>(qs.size()), static_cast<int>(ms.size()));
        for (size_t j = 0; j < ms.size(); ++j) {
            const auto& [name, mo] = ms[j];
            Mono prefix(mo.begin(), mo.end() - 1);
            int k = mo[np];
            if (k == 0) out.at(qat.at({0, name, prefix}), static_cast<int>(j)) = Rat(1);
            out.at(qat.at({1, name, prefix}), static_cast<int>(j)) = Rat(1);
        }
        return out;
    };
    pe.generic.splitting = [middle_slots, quotient_slots, np](int aa, int bb, int deg) {
        auto ms = middle_slots(aa, bb, deg);
        auto qs = quotient_slots(aa, bb, deg);
        std::map<std::pair<std::string, Mono>, int> mat_index;
        for (size_t j = 0; j < ms.size(); ++j) mat_index[ms[j]] = static_cast<int>(j);
        std::vector<std::tuple<int, std::string, Mono>> keep;
        for (const auto& q : qs) {
            int total = 0;
            for (int ex : std::get<2>(q)) total += ex;
            if (total <= deg) keep.push_back(q);
        }
        Mat out(static_cast<int>(ms.size()), static_cast<int>(keep.size()));
        for (size_t c = 0; c < keep.size(); ++c) {
            const auto& [block, name, prefix] = keep[c];
            Mono flat = prefix;
            flat.push_back(0);
            Mono up = prefix;
            up.push_back(1);
            if (block == 0) {
                // (1 - t) x
                out.at(mat_index.at({name, flat}), static_cast<int>(c)) = Rat(1);
                out.at(mat_index.at({name, up}), static_cast<int>(c)) = Rat(-1);
            } else {
                // t y
                out.at(mat_index.at({name, up}), static_cast<int>(c)) = Rat(1);
            }
        }
        return out;
    };
    pe.generic.kernel_columns = [base, middle_slots, np](int aa, int bb, int deg) {
        auto ms = middle_slots(aa, bb, deg);
        std::map<std::pair<std::string, Mono>, int> mat_index;
        for (size_t j = 0; j < ms.size(); ++j) mat_index[ms[j]] = static_cast<int>(j);
        // (t^2 - t) t^k mu e with 2 + k + |mu| <= deg + 1
        std::vector<std::pair<std::string, Mono>> gens;
        for (const auto& name : base->basis(aa, bb))
            for (const auto& mo : monomials_up_to(np + 1, deg - 1)) gens.push_back({name, mo});
        Mat out(static_cast<int>(ms.size()), static_cast<int>(gens.size()));
        for (size_t c = 0; c < gens.size(); ++c) {
            const auto& [name, mo] = gens[c];
            Mono hi = mo;
            hi[np] += 2;
            Mono lo = mo;
            lo[np] += 1;
            out.at(mat_index.at({name, hi}), static_cast<int>(c)) = Rat(1);
            out.at(mat_index.at({name, lo}), static_cast<int>(c)) = Rat(-1);
        }
        return out;
    };
    return pe;
}

PushoutExtensionParts pushout_extension_parts(AlgebroidPtr a, const FiniteSimplicialSet& x,
                                   const std::vector<std::vector<bool>>& in_b,
                                   const FiniteSimplicialSet& c, const SimplicialMap& f) {
    PushoutExtensionParts pe;
    pe.base = a;
    SubcomplexResult sub = subcomplex(x, in_b);
    pe.bspace = sub.space;
    pe.b_incl = sub.inclusion;
    pe.glued = pushout_complex(x, in_b, c, f);
    pe.glued.from_x.to = &pe.glued.space;
    pe.glued.from_c.to = &pe.glued.space;
    pe.f_from_bspace.from = nullptr;
    pe.f_from_bspace.to = nullptr;
    pe.f_from_bspace.images.resize(pe.bspace.dim() + 1);
    for (int d = 0; d <= pe.bspace.dim(); ++d)
        for (int i = 0; i < pe.bspace.cell_count(d); ++i) {
            int ambient = pe.b_incl.images[d][i].cell;
            pe.f_from_bspace.images[d].push_back(f.apply(identity_simplex(d, ambient)));
        }
    pe.on_glued = power(a, pe.glued.space);
    pe.on_x = power(a, x);
    pe.on_c = power(a, c);
    pe.on_b = power(a, pe.bspace);

    PowerAlgebroid on_x = pe.on_x;
    PowerAlgebroid on_c = pe.on_c;
    PowerAlgebroid on_b = pe.on_b;
    PowerAlgebroid on_glued = pe.on_glued;
    SimplicialMap b_incl = pe.b_incl;
    SimplicialMap f_b = pe.f_from_bspace;
    SimplicialMap from_x = pe.glued.from_x;
    SimplicialMap from_c = pe.glued.from_c;
    BaseRing ring = a->scalars.base;

    pe.generic.label = "pushout extension";
    pe.generic.base = ring;
    pe.generic.objects = static_cast<int>(a->objects.size());

    pe.generic.middle_valid = [on_x, on_c](int aa, int bb, int deg) {
        FamilyCoords fx = family_coords(on_x, aa, bb, deg + 1);
        FamilyCoords fc = family_coords(on_c, aa, bb, deg + 1);
        auto vx = valid_family_basis(fx);
        auto vc = valid_family_basis(fc);
        Mat out(fx.dim() + fc.dim(), static_cast<int>(vx.size() + vc.size()));
        for (size_t j = 0; j < vx.size(); ++j) {
            auto col = fx.to_vec(vx[j]);
            for (int i = 0; i < fx.dim(); ++i) out.at(i, static_cast<int>(j)) = col[i];
        }
        for (size_t j = 0; j < vc.size(); ++j) {
            auto col = fc.to_vec(vc[j]);
            for (int i = 0; i < fc.dim(); ++i)
                out.at(fx.dim() + i, static_cast<int>(vx.size() + j)) = col[i];
        }
        return out;
    };
    pe.generic.quotient_valid = [on_b](int aa, int bb, int deg) {
        FamilyCoords amb = family_coords(on_b, aa, bb, deg + 1);
        auto vb = valid_family_basis(family_coords(on_b, aa, bb, deg));
        Mat out(amb.dim(), static_cast<int>(vb.size()));
        for (size_t j = 0; j < vb.size(); ++j) {
            auto col = amb.to_vec(vb[j]);
            for (int i = 0; i < amb.dim(); ++i) out.at(i, static_cast<int>(j)) = col[i];
        }
        return out;
    };
    pe.generic.surjection = [on_x, on_c, on_b, b_incl, f_b, ring](int aa, int bb, int deg) {
        FamilyCoords fx = family_coords(on_x, aa, bb, deg + 1);
        FamilyCoords fc = family_coords(on_c, aa, bb, deg + 1);
        FamilyCoords fb = family_coords(on_b, aa, bb, deg + 1);
        Mat out(fb.dim(), fx.dim() + fc.dim());
        for (int j = 0; j < fx.dim(); ++j) {
            std::vector<Rat> e(fx.dim(), Rat(0));
            e[j] = Rat(1);
            auto col = fb.to_vec(pullback_family(on_b, on_x, b_incl, fx.from_vec(e)));
            for (int i = 0; i < fb.dim(); ++i) out.at(i, j) = col[i];
        }
        for (int j = 0; j < fc.dim(); ++j) {
            std::vector<Rat> e(fc.dim(), Rat(0));
            e[j] = Rat(1);
            auto col = fb.to_vec(pullback_family(on_b, on_c, f_b, fc.from_vec(e)));
            for (int i = 0; i < fb.dim(); ++i) out.at(i, fx.dim() + j) = ring.neg(col[i]);
        }
        return out;
    };
    auto surjection = pe.generic.surjection;
    auto middle_valid = pe.generic.middle_valid;
    auto quotient_valid = pe.generic.quotient_valid;
    pe.generic.splitting = [surjection, middle_valid, quotient_valid, ring](int aa, int bb, int deg) {
        Mat pi = surjection(aa, bb, deg);
        Mat mv = middle_valid(aa, bb, deg);
        Mat qv = quotient_valid(aa, bb, deg);
        Mat pim = mat_mul(ring, pi, mv);
        Mat out(mv.rows, qv.cols);
        for (int j = 0; j < qv.cols; ++j) {
            auto sol = solve(ring, pim, mat_col(qv, j));
            if (!sol) throw RingError("pushout extension: no splitting in the degree window");
            auto col = mat_vec(ring, mv, *sol);
            for (int i = 0; i < mv.rows; ++i) out.at(i, j) = col[i];
        }
        return out;
    };
    pe.generic.kernel_columns = [on_x, on_c, on_glued, from_x, from_c](int aa, int bb, int deg) {
        FamilyCoords fx = family_coords(on_x, aa, bb, deg + 1);
        FamilyCoords fc = family_coords(on_c, aa, bb, deg + 1);
        FamilyCoords fg = family_coords(on_glued, aa, bb, deg + 1);
        auto vg = valid_family_basis(fg);
        Mat out(fx.dim() + fc.dim(), static_cast<int>(vg.size()));
        for (size_t j = 0; j < vg.size(); ++j) {
            auto cx = fx.to_vec(pullback_family(on_x, on_glued, from_x, vg[j]));
            auto cc = fc.to_vec(pullback_family(on_c, on_glued, from_c, vg[j]));
            for (int i = 0; i < fx.dim(); ++i) out.at(i, static_cast<int>(j)) = cx[i];
            for (int i = 0; i < fc.dim(); ++i) out.at(fx.dim() + i, static_cast<int>(j)) = cc[i];
        }
        return out;
    };
    return pe;
}

} // namespace kkalg
