#include "kkalg/kk.hpp"

#include <algorithm>

namespace kkalg {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw RingError(msg);
}

bool same_algebroid(const AlgebroidPtr& x, const AlgebroidPtr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    return x->scalars == y->scalars && x->objects == y->objects && x->basis_home == y->basis_home;
}

// Identity on a shared scalar prefix, landing in the bigger ring.
RingMap prefix_map(const PolyRing& from, const PolyRing& to) {
    require(from.base == to.base && from.nvars() <= to.nvars(), "scalar rings do not nest");
    std::vector<Poly> imgs;
    for (int i = 0; i < from.nvars(); ++i) imgs.push_back(to.var(i));
    return RingMap{from, to, imgs};
}

std::string fresh_var_name(const PolyRing& r, const std::string& stem) {
    for (int i = 1;; ++i) {
        std::string nm = stem + std::to_string(i);
        if (r.var_index(nm) < 0) return nm;
    }
}

ObjectSequence seq_concat(const ObjectSequence& s, const ObjectSequence& t) {
    ObjectSequence out = s;
    out.objs.insert(out.objs.end(), t.objs.begin(), t.objs.end());
    return out;
}

std::vector<ObjectSequence> dedup_seqs(const std::vector<ObjectSequence>& seqs) {
    std::vector<ObjectSequence> out;
    for (const auto& s : seqs)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
}

// Assemble a tiling of blocks; block (i, j) maps the j-th source summand
// into the i-th target summand.
MatMor mat_from_blocks(const Algebroid& a, const std::vector<std::vector<MatMor>>& blocks) {
    require(!blocks.empty() && !blocks[0].empty(), "empty block matrix");
    ObjectSequence src, dst;
    for (const auto& blk : blocks[0]) src = seq_concat(src, blk.src);
    for (const auto& row : blocks) dst = seq_concat(dst, row[0].dst);
    MatMor m = mat_zero(a, src, dst);
    int roff = 0;
    for (const auto& row : blocks) {
        int coff = 0;
        for (size_t j = 0; j < row.size(); ++j) {
            const MatMor& blk = row[j];
            require(blk.src == blocks[0][j].src && blk.dst == row[0].dst,
                    "block shapes do not tile");
            for (int i = 0; i < blk.dst.size(); ++i)
                for (int jj = 0; jj < blk.src.size(); ++jj)
                    m.entries[roff + i][coff + jj] = blk.entries[i][jj];
            coff += blk.src.size();
        }
        roff += row[0].dst.size();
    }
    return m;
}

// Add blk into m at the given offsets.
void add_block(const Algebroid& a, MatMor& m, const MatMor& blk, int roff, int coff) {
    for (int i = 0; i < blk.dst.size(); ++i)
        for (int j = 0; j < blk.src.size(); ++j)
            m.entries[roff + i][coff + j] = a.add(m.entries[roff + i][coff + j], blk.entries[i][j]);
}

// Split u by its monomial in the generators appended after plain's scalars;
// the pieces are morphisms of plain carrying the same object labels.
std::map<Mono, Mor> split_mor_by_tail(const Algebroid& plain, const Mor& u) {
    int nbase = plain.scalars.nvars();
    std::map<Mono, Mor> out;
    for (const auto& [name, c] : u.coeffs)
        for (const auto& [m, r] : c.terms) {
            require(static_cast<int>(m.size()) >= nbase, "coefficient ring too small to split");
            Mono head(m.begin(), m.begin() + nbase), tail(m.begin() + nbase, m.end());
            auto it = out.find(tail);
            if (it == out.end()) it = out.emplace(tail, plain.zero_mor(u.src, u.dst)).first;
            Poly& pc = it->second.coeffs[name];
            pc.nvars = nbase;
            pc.terms[head] = r;
        }
    return out;
}

// Monomial with the tail exponents placed after the first nbase generators.
Poly tail_monomial(const PolyRing& big, int nbase, const Mono& tail) {
    Mono m(big.nvars(), 0);
    for (size_t i = 0; i < tail.size(); ++i) m[nbase + static_cast<int>(i)] = tail[i];
    Poly p;
    p.nvars = big.nvars();
    p.terms[m] = Rat(1);
    return p;
}

} // namespace

Poly MatHom::map_scalar(const Poly& c) const {
    if (scalar_map) return scalar_map->apply(c);
    require(a->scalars == b->scalars, "scalar map missing between distinct rings");
    return c;
}

MatMor MatHom::apply(const Mor& u) const {
    MatMor acc = mat_zero(*b, seq_of[u.src], seq_of[u.dst]);
    for (const auto& [n, c] : u.coeffs)
        acc = mat_add(*b, acc, mat_scale(*b, map_scalar(c), images.at(n)));
    return acc;
}

void MatHom::validate() const {
    require(a && b, "homomorphism endpoints missing");
    require(seq_of.size() == a->objects.size(), "one sequence per source object");
    if (!scalar_map) require(a->scalars == b->scalars, "scalar map missing between distinct rings");
    for (const auto& [nm, home] : a->basis_home) {
        auto it = images.find(nm);
        require(it != images.end(), "image missing for a basis morphism");
        require(it->second.src == seq_of[home.first] && it->second.dst == seq_of[home.second],
                "image shape does not match the stabilization sequence");
    }
    for (const auto& [nm, home] : a->basis_home)
        for (const auto& [nm2, home2] : a->basis_home) {
            if (home.second != home2.first) continue; // nm2 after nm must be composable
            Mor comp = a->compose(a->basis_mor(nm2), a->basis_mor(nm));
            MatMor lhs = apply(comp);
            MatMor rhs = mat_compose(*b, images.at(nm2), images.at(nm));
            require(lhs == rhs, "homomorphism is not multiplicative on a basis pair");
        }
}

MatHom mat_hom_of(const AlgHom& f) {
    f.validate();
    MatHom h;
    h.a = f.from;
    h.b = f.to;
    for (size_t o = 0; o < f.from->objects.size(); ++o)
        h.seq_of.push_back(ObjectSequence{{f.object_map[o]}});
    for (const auto& [nm, img] : f.images) {
        auto home = f.from->basis_home.at(nm);
        MatMor m;
        m.src = h.seq_of[home.first];
        m.dst = h.seq_of[home.second];
        m.entries = {{img}};
        h.images[nm] = m;
    }
    h.scalar_map = f.scalar_map;
    return h;
}

MatHom zero_mat_hom(AlgebroidPtr a, AlgebroidPtr b, const std::vector<ObjectSequence>& seq_of) {
    require(seq_of.size() == a->objects.size(), "one sequence per source object");
    MatHom h;
    h.a = a;
    h.b = b;
    h.seq_of = seq_of;
    for (const auto& [nm, home] : a->basis_home)
        h.images[nm] = mat_zero(*b, seq_of[home.first], seq_of[home.second]);
    if (!(a->scalars == b->scalars)) {
        // a zero map never moves a coefficient; kill them all
        std::vector<Poly> imgs(a->scalars.nvars(), b->scalars.zero());
        h.scalar_map = RingMap{a->scalars, b->scalars, imgs};
    }
    return h;
}

MatHom oplus(const MatHom& f, const MatHom& g) {
    require(same_algebroid(f.a, g.a) && same_algebroid(f.b, g.b),
            "block sum needs shared endpoints");
    MatHom h;
    h.a = f.a;
    h.b = f.b;
    for (size_t o = 0; o < f.seq_of.size(); ++o)
        h.seq_of.push_back(seq_concat(f.seq_of[o], g.seq_of[o]));
    for (const auto& [nm, m] : f.images)
        h.images[nm] = mat_direct_sum(*f.b, m, g.images.at(nm));
    h.scalar_map = f.scalar_map;
    return h;
}

bool mat_hom_equal(const MatHom& f, const MatHom& g) {
    if (!same_algebroid(f.a, g.a) || !same_algebroid(f.b, g.b)) return false;
    if (!(f.seq_of == g.seq_of) || !(f.images == g.images)) return false;
    // a missing scalar map acts as the identity; compare actions, not presence
    auto action = [](const MatHom& h) {
        if (h.scalar_map) return h.scalar_map->images;
        std::vector<Poly> ids;
        for (int i = 0; i < h.a->scalars.nvars(); ++i) ids.push_back(h.a->scalars.var(i));
        return ids;
    };
    return action(f) == action(g);
}

MatMor mat_map_coefficients(const RingMap& rm, const MatMor& m) {
    MatMor out = m;
    for (auto& row : out.entries)
        for (auto& e : row) e = map_coefficients(rm, e);
    return out;
}

void validate_natural_iso(const MatHom& alpha, const MatHom& beta, const NaturalIsomorphism& g) {
    require(same_algebroid(alpha.a, beta.a) && same_algebroid(alpha.b, beta.b),
            "the transformation needs a shared source and target");
    require(alpha.b->unital(), "invertibility needs units in the target");
    size_t no = alpha.a->objects.size();
    require(g.g.size() == no && g.ginv.size() == no, "one conjugator per source object");
    const Algebroid& b = *alpha.b;
    for (size_t o = 0; o < no; ++o) {
        require(g.g[o].src == alpha.seq_of[o] && g.g[o].dst == beta.seq_of[o],
                "conjugator shape mismatch");
        require(g.ginv[o].src == beta.seq_of[o] && g.ginv[o].dst == alpha.seq_of[o],
                "inverse conjugator shape mismatch");
        bool inv = mat_compose(b, g.ginv[o], g.g[o]) == mat_identity(b, alpha.seq_of[o]) &&
                   mat_compose(b, g.g[o], g.ginv[o]) == mat_identity(b, beta.seq_of[o]);
        require(inv, "the natural transformation is not invertible");
    }
    for (const auto& [nm, home] : alpha.a->basis_home) {
        MatMor lhs = mat_compose(b, g.g[home.second], alpha.images.at(nm));
        MatMor rhs = mat_compose(b, beta.images.at(nm), g.g[home.first]);
        require(lhs == rhs, "naturality fails on a basis morphism");
    }
}

WPair w_matrices(const Algebroid& bt, int tvar, const MatMor& g, const MatMor& ginv) {
    const PolyRing& r = bt.scalars;
    require(tvar >= 0 && tvar < r.nvars(), "homotopy generator out of range");
    Poly t = r.var(tvar);
    Poly omt2 = r.sub(r.one(), r.mul(t, t));
    Poly t3m2t = r.sub(r.pow(t, 3), r.scale(Rat(2), t));
    MatMor ia = mat_identity(bt, g.src);
    MatMor ib = mat_identity(bt, g.dst);
    WPair wp;
    wp.w = mat_from_blocks(bt, {{mat_scale(bt, omt2, ia), mat_scale(bt, t3m2t, ginv)},
                                {mat_scale(bt, t, g), mat_scale(bt, omt2, ib)}});
    wp.winv = mat_from_blocks(bt, {{mat_scale(bt, omt2, ia), mat_scale(bt, r.neg(t3m2t), ginv)},
                                   {mat_scale(bt, r.neg(t), g), mat_scale(bt, omt2, ib)}});
    return wp;
}

MatHom ElementaryHomotopy::at(int end) const {
    require(end == 0 || end == 1, "endpoints sit at 0 and 1");
    const PolyRing& big = h.b->scalars;
    const PolyRing& small = plain->scalars;
    std::vector<Poly> imgs;
    for (int i = 0; i < big.nvars(); ++i) {
        if (i == tvar)
            imgs.push_back(small.constant(Rat(end)));
        else
            imgs.push_back(small.var(i < tvar ? i : i - 1));
    }
    RingMap ev{big, small, imgs};
    MatHom out;
    out.a = h.a;
    out.b = plain;
    out.seq_of = h.seq_of;
    for (const auto& [nm, m] : h.images) out.images[nm] = mat_map_coefficients(ev, m);
    if (h.scalar_map) out.scalar_map = h.scalar_map->then(ev);
    return out;
}

MatHom HomotopyCertificate::start() const {
    require(!chain.empty(), "empty chain");
    return chain.front().at(0);
}

MatHom HomotopyCertificate::finish() const {
    require(!chain.empty(), "empty chain");
    return chain.back().at(1);
}

HomotopyCertificate w_homotopy(const MatHom& alpha, const MatHom& beta,
                               const NaturalIsomorphism& g) {
    require(same_algebroid(alpha.a, beta.a) && same_algebroid(alpha.b, beta.b),
            "the rotation homotopy needs a shared source and target");
    require(alpha.a->unital() && alpha.b->unital(), "the rotation homotopy needs unital algebroids");
    validate_natural_iso(alpha, beta, g);
    PolyRing rbt = alpha.b->scalars;
    rbt.vars.push_back(fresh_var_name(rbt, "s"));
    int tvar = alpha.b->scalars.nvars();
    AlgebroidPtr bt = extend_scalars(*alpha.b, rbt);
    RingMap lift = prefix_map(alpha.b->scalars, rbt);
    std::vector<WPair> ws;
    for (size_t o = 0; o < alpha.seq_of.size(); ++o)
        ws.push_back(w_matrices(*bt, tvar, mat_map_coefficients(lift, g.g[o]),
                                mat_map_coefficients(lift, g.ginv[o])));
    MatHom h;
    h.a = alpha.a;
    h.b = bt;
    for (size_t o = 0; o < alpha.seq_of.size(); ++o)
        h.seq_of.push_back(seq_concat(alpha.seq_of[o], beta.seq_of[o]));
    for (const auto& [nm, home] : alpha.a->basis_home) {
        MatMor am = mat_map_coefficients(lift, alpha.images.at(nm));
        MatMor zb = mat_zero(*bt, beta.seq_of[home.first], beta.seq_of[home.second]);
        MatMor diag = mat_direct_sum(*bt, am, zb);
        h.images[nm] = mat_compose(*bt, ws[home.second].w, mat_compose(*bt, diag, ws[home.first].winv));
    }
    if (alpha.scalar_map)
        h.scalar_map = alpha.scalar_map->then(lift);
    else
        h.scalar_map = prefix_map(alpha.a->scalars, rbt);
    HomotopyCertificate c;
    c.chain.push_back(ElementaryHomotopy{h, alpha.b, tvar});
    return c;
}

HomotopyCertificate w_homotopy(const AlgHom& alpha, const AlgHom& beta,
                               const NaturalIsomorphism& g) {
    return w_homotopy(mat_hom_of(alpha), mat_hom_of(beta), g);
}

// ---------------------------------------------------------------------------
// Representatives

namespace {

MatMor eval_explicit(const KKRepresentative& r, const NestedElement& e) {
    const Mor& u = e.base;
    MatMor acc = mat_zero(*r.carrier, r.seq_of[u.src], r.seq_of[u.dst]);
    for (const auto& [n, c] : u.coeffs)
        acc = mat_add(*r.carrier, acc, mat_scale(*r.carrier, r.coeff_map.apply(c), r.images.at(n)));
    return acc;
}

// Depth-1 fold: the product of the entry lifts, first entry first, scaled by
// the mapped path coefficient.
MatMor fold_flat(const KKRepresentative& r, const TensorElement& e,
                 const std::function<MatMor(const std::string&)>& lift_name) {
    MatMor acc = mat_zero(*r.carrier, r.seq_of[e.src], r.seq_of[e.dst]);
    for (const auto& [path, c] : e.terms) {
        MatMor prod = lift_name(path[0]);
        for (size_t i = 1; i < path.size(); ++i)
            prod = mat_compose(*r.carrier, lift_name(path[i]), prod);
        acc = mat_add(*r.carrier, acc, mat_scale(*r.carrier, r.coeff_map.apply(c), prod));
    }
    return acc;
}

MatMor eval_classifying(const KKRepresentative& r, const NestedElement& e) {
    require(nested_is_zero(r.a, nested_pi(r.a, e)), "classifying map needs a kernel element");
    const FSplitExtension& ext = *r.core;
    auto lift_name = [&](const std::string& nm) {
        Mor sp = ext.split(r.a->basis_mor(nm));
        MatMor m;
        m.src = ObjectSequence{{sp.src}};
        m.dst = ObjectSequence{{sp.dst}};
        m.entries = {{sp}};
        return m;
    };
    MatMor v = fold_flat(r, e.flat, lift_name);
    for (const auto& row : v.entries)
        for (const auto& u : row)
            require(ext.in_ideal(u), "classifying value left the ideal");
    return v;
}

// The same fold rebased onto a completion whose scalars may thread extra
// loop generators through the splitting.
MatMor eval_classifying_extended(const KKRepresentative& r, const NestedElement& e) {
    require(nested_is_zero(r.a, nested_pi(r.a, e)), "classifying map needs a kernel element");
    const FSplitExtension& ext = *r.core;
    const AdditiveCompletion& comp = *r.comp_mid;
    const Algebroid& quotient = *ext.quotient;
    const Algebroid& plain_carrier = *ext.carrier;
    RingMap lift = prefix_map(ext.carrier->scalars, r.carrier->scalars);
    int nvc = ext.carrier->scalars.nvars();
    auto split_threaded = [&](const Mor& u) {
        Mor acc = r.carrier->zero_mor(u.src, u.dst);
        for (const auto& [tail, piece] : split_mor_by_tail(quotient, u)) {
            Mor sp = map_coefficients(lift, ext.split(piece));
            acc = r.carrier->add(acc, r.carrier->scale(tail_monomial(r.carrier->scalars, nvc, tail), sp));
        }
        return acc;
    };
    auto lift_name = [&](const std::string& nm) {
        MatMor dec = comp.from_element(comp.alg->basis_mor(nm));
        MatMor out = mat_zero(*r.carrier, dec.src, dec.dst);
        for (int i = 0; i < dec.dst.size(); ++i)
            for (int j = 0; j < dec.src.size(); ++j)
                if (!dec.entries[i][j].coeffs.empty())
                    out.entries[i][j] = split_threaded(dec.entries[i][j]);
        return out;
    };
    MatMor v = fold_flat(r, e.flat, lift_name);
    for (const auto& row : v.entries)
        for (const auto& u : row)
            for (const auto& [tail, piece] : split_mor_by_tail(plain_carrier, u))
                require(ext.in_ideal(piece), "classifying value left the ideal");
    return v;
}

MatMor eval_eta(const KKRepresentative& r, const NestedElement& e) {
    require(nested_is_zero(r.a, nested_pi(r.a, e)), "classifying map needs a kernel element");
    const KKRepresentative& par = *r.first;
    RingMap lift = prefix_map(par.carrier->scalars, r.carrier->scalars);
    int qv = r.carrier->scalars.nvars() - 1;
    MatMor acc = mat_zero(*r.carrier, r.seq_of[e.src()], r.seq_of[e.dst()]);
    auto fold_path = [&](const Poly& c, const std::vector<MatMor>& vals) {
        MatMor prod = vals[0];
        for (size_t i = 1; i < vals.size(); ++i) prod = mat_compose(*r.carrier, vals[i], prod);
        Poly w = r.coeff_map.apply(c);
        Poly q = r.carrier->scalars.var(qv);
        for (size_t i = 0; i < vals.size(); ++i) w = r.carrier->scalars.mul(w, q);
        acc = mat_add(*r.carrier, acc, mat_scale(*r.carrier, w, prod));
    };
    if (e.depth == 1) {
        for (const auto& [path, c] : e.flat.terms) {
            std::vector<MatMor> vals;
            for (const auto& nm : path)
                vals.push_back(mat_map_coefficients(lift, par.eval(nested_of_mor(r.a->basis_mor(nm)))));
            fold_path(c, vals);
        }
    } else {
        for (const auto& [c, factors] : e.chains) {
            std::vector<MatMor> vals;
            for (const auto& f : factors) vals.push_back(mat_map_coefficients(lift, par.eval(f)));
            fold_path(c, vals);
        }
    }
    return acc;
}

// Functor application at the bottom of a nested element: the outer layers
// stay, the inner r.depth layers are consumed by r, and the images re-enter
// through the completion of r's carrier.
NestedElement nested_apply_rep(const KKRepresentative& r, const AdditiveCompletion& comp,
                               int outer, const NestedElement& e) {
    require(e.depth == r.depth + outer, "depth mismatch in functor application");
    if (outer == 0) return nested_of_mor(comp.to_element(r.eval(e)));
    int osrc = comp.seq_index(r.seq_of[e.src()]);
    int odst = comp.seq_index(r.seq_of[e.dst()]);
    if (outer == 1) {
        TensorElement out = tensor_zero(osrc, odst);
        auto add_word = [&](const Poly& c, const std::vector<Mor>& ms) {
            TensorElement word = sigma(comp.alg, ms[0]);
            for (size_t i = 1; i < ms.size(); ++i)
                word = tensor_compose(comp.alg, word, sigma(comp.alg, ms[i]));
            out = tensor_add(comp.alg, out,
                             tensor_scale(comp.alg, r.coeff_map.apply(c), word));
        };
        if (e.depth == 1) {
            for (const auto& [path, c] : e.flat.terms) {
                std::vector<Mor> ms;
                for (const auto& nm : path)
                    ms.push_back(comp.to_element(r.eval(nested_of_mor(r.a->basis_mor(nm)))));
                add_word(c, ms);
            }
        } else {
            for (const auto& [c, factors] : e.chains) {
                std::vector<Mor> ms;
                for (const auto& f : factors) ms.push_back(comp.to_element(r.eval(f)));
                add_word(c, ms);
            }
        }
        return nested_of_tensor(out);
    }
    NestedElement out = nested_zero(outer, osrc, odst);
    for (const auto& [c, factors] : e.chains) {
        std::vector<NestedElement> fs;
        for (const auto& f : factors) fs.push_back(nested_apply_rep(r, comp, outer - 1, f));
        out.chains.push_back({r.coeff_map.apply(c), fs});
    }
    return out;
}

MatMor eval_sharp(const KKRepresentative& s, const NestedElement& e) {
    const KKRepresentative& alpha = *s.first;
    const KKRepresentative& beta = *s.second;
    NestedElement mid = nested_apply_rep(alpha, *s.comp_mid, beta.depth, e);
    if (beta.depth >= 1 && alpha.sphere >= 1) {
        LoopPower lp{s.comp_base->alg, alpha.sphere, s.comp_mid->alg};
        require(in_j_of_loop_power(lp, beta.depth, mid),
                "product element leaves the tensor ideal of the loop power");
        require(in_loop_power_of_j(lp, beta.depth, mid),
                "product element is not a boundary-vanishing family of ideal elements");
    } else if (beta.depth >= 1) {
        JCarrier{s.comp_mid->alg, beta.depth}.require_member(mid);
    } else if (alpha.sphere >= 1) {
        LoopPower lp{s.comp_base->alg, alpha.sphere, s.comp_mid->alg};
        lp.require_valid(mid.base);
    }
    return s.pipe->eval(mid);
}

// Tensor an entry of a value with a coefficient basis name on the right.
Mor tensor_entry(const TensoredContext& tdst, const Algebroid& target, const Mor& m,
                 const std::string& uname) {
    auto uhome = tdst.c->basis_home.at(uname);
    Mor out = target.zero_mor(tdst.pair_object(m.src, uhome.first),
                              tdst.pair_object(m.dst, uhome.second));
    for (const auto& [bn, c] : m.coeffs) {
        Poly cc = c;
        cc.nvars = target.scalars.nvars();
        out.coeffs[tensor_basis_name(bn, uname)] = cc;
    }
    return out;
}

MatMor eval_delta(const KKRepresentative& s, const NestedElement& e) {
    const KKRepresentative& alpha = *s.first;
    TensoredElement te = tensored_classifying(*s.dsrc, e.flat);
    std::map<std::string, TensorElement> groups;
    for (const auto& [key, c] : te.terms) {
        TensorElement& g = groups[key.second];
        g.src = te.asrc;
        g.dst = te.adst;
        g.terms[key.first] = c;
    }
    MatMor acc = mat_zero(*s.carrier, s.seq_of[e.src()], s.seq_of[e.dst()]);
    for (const auto& [uname, ge] : groups) {
        MatMor v = alpha.eval(nested_of_tensor(ge));
        for (int i = 0; i < v.dst.size(); ++i)
            for (int j = 0; j < v.src.size(); ++j)
                acc.entries[i][j] = s.carrier->add(acc.entries[i][j],
                                                   tensor_entry(*s.ddst, *s.carrier,
                                                                v.entries[i][j], uname));
    }
    return acc;
}

} // namespace

MatMor KKRepresentative::eval(const NestedElement& e) const {
    require(e.depth == depth, "element depth does not match the representative");
    switch (kind) {
    case KKKind::Explicit:
        return eval_explicit(*this, e);
    case KKKind::Classifying:
        return eval_classifying(*this, e);
    case KKKind::ClassifyingExtended:
        return eval_classifying_extended(*this, e);
    case KKKind::Eta:
        return eval_eta(*this, e);
    case KKKind::Sharp:
        return eval_sharp(*this, e);
    case KKKind::Oplus:
        return mat_direct_sum(*carrier, first->eval(e), second->eval(e));
    case KKKind::DeltaOne:
        return eval_delta(*this, e);
    case KKKind::Zero:
        break;
    }
    throw RingError("empty representative");
}

MatMor KKRepresentative::apply(const Mor& x) const {
    require(depth == 0, "only depth-0 representatives apply to plain morphisms");
    return eval(nested_of_mor(x));
}

KKRepresentative kk_from_mat_hom(const MatHom& f) {
    f.validate();
    KKRepresentative r;
    r.kind = KKKind::Explicit;
    r.label = "hom";
    r.a = f.a;
    r.b = f.b;
    r.carrier = f.b;
    r.seq_of = f.seq_of;
    r.images = f.images;
    r.coeff_map = f.scalar_map ? *f.scalar_map : identity_map(f.a->scalars);
    return r;
}

KKRepresentative kk_from_hom(const AlgHom& f) {
    return kk_from_mat_hom(mat_hom_of(f));
}

KKRepresentative kk_zero(AlgebroidPtr a, AlgebroidPtr b, const std::vector<ObjectSequence>& seq_of) {
    KKRepresentative r = kk_from_mat_hom(zero_mat_hom(a, b, seq_of));
    r.label = "0";
    return r;
}

KKRepresentative kk_from_classifying(const FSplitExtension& ext) {
    require(ext.protocol == "carrier", "classifying fold needs the carrier protocol");
    KKRepresentative r;
    r.kind = KKKind::Classifying;
    r.label = "gamma(" + ext.label + ")";
    r.core = std::make_shared<const FSplitExtension>(ext);
    r.a = ext.quotient;
    r.b = ext.carrier;
    r.carrier = ext.carrier;
    r.depth = 1;
    // the carrier protocol extensions here keep the object labels of their
    // quotient, so the stabilization starts out as singletons
    for (size_t o = 0; o < ext.quotient->objects.size(); ++o)
        r.seq_of.push_back(ObjectSequence{{static_cast<int>(o)}});
    r.coeff_map = prefix_map(ext.quotient->scalars, ext.carrier->scalars);
    return r;
}

MatHom as_mat_hom(const KKRepresentative& r) {
    require(r.depth == 0 && r.sphere == 0, "only degree-(0,0) representatives are explicit");
    MatHom h;
    h.a = r.a;
    h.b = r.b;
    h.seq_of = r.seq_of;
    h.images = r.images;
    h.scalar_map = r.coeff_map;
    return h;
}

KKRepresentative kk_extend(const KKRepresentative& r, const AdditiveCompletion& comp, int extra) {
    require(extra >= 0, "pass-through loop count is nonnegative");
    require(comp.base->scalars.base == r.a->scalars.base &&
                comp.base->scalars.nvars() == r.a->scalars.nvars() + extra,
            "completion base does not extend the source by the loop generators");
    require(comp.base->basis_home == r.a->basis_home && comp.base->objects == r.a->objects,
            "completion base carries a different algebroid");
    switch (r.kind) {
    case KKKind::Explicit: {
        KKRepresentative s;
        s.kind = KKKind::Explicit;
        s.label = r.label + " (+)";
        s.a = comp.alg;
        s.b = r.b;
        s.depth = 0;
        s.sphere = extra + r.sphere;
        s.k = r.k;
        s.j_shifts = r.j_shifts;
        s.loop_shifts = r.loop_shifts;
        s.carrier = s.sphere == 0 ? r.b : loop_power(r.b, s.sphere).ext;
        int nva = r.a->scalars.nvars();
        int nvc = r.b->scalars.nvars();
        // r's own loop generators move past the pass-through slots
        std::vector<Poly> shimgs;
        for (int v = 0; v < r.carrier->scalars.nvars(); ++v)
            shimgs.push_back(s.carrier->scalars.var(v < nvc ? v : v + extra));
        RingMap shuffle{r.carrier->scalars, s.carrier->scalars, shimgs};
        std::vector<Poly> timgs;
        for (int v = 0; v < nva; ++v) timgs.push_back(shuffle.apply(r.coeff_map.images[v]));
        for (int i = 0; i < extra; ++i) timgs.push_back(s.carrier->scalars.var(nvc + i));
        s.coeff_map = RingMap{comp.alg->scalars, s.carrier->scalars, timgs};
        for (const auto& sq : comp.seqs) {
            ObjectSequence big;
            for (int o : sq.objs) big = seq_concat(big, r.seq_of[o]);
            s.seq_of.push_back(big);
        }
        for (const auto& [nm, home] : comp.alg->basis_home) {
            MatMor dec = comp.from_element(comp.alg->basis_mor(nm));
            MatMor big = mat_zero(*s.carrier, s.seq_of[home.first], s.seq_of[home.second]);
            int roff = 0;
            for (int i = 0; i < dec.dst.size(); ++i) {
                int coff = 0;
                for (int j = 0; j < dec.src.size(); ++j) {
                    for (const auto& [bn, c] : dec.entries[i][j].coeffs) {
                        MatMor blk = mat_scale(*s.carrier, s.coeff_map.apply(c),
                                               mat_map_coefficients(shuffle, r.images.at(bn)));
                        add_block(*s.carrier, big, blk, roff, coff);
                    }
                    coff += r.seq_of[dec.src.objs[j]].size();
                }
                roff += r.seq_of[dec.dst.objs[i]].size();
            }
            s.images[nm] = big;
        }
        return s;
    }
    case KKKind::Classifying: {
        require(r.sphere == 0, "fold carries no loops of its own");
        KKRepresentative s;
        s.kind = KKKind::ClassifyingExtended;
        s.label = r.label + " (+)";
        s.core = r.core;
        s.comp_mid = std::make_shared<const AdditiveCompletion>(comp);
        s.extra = extra;
        s.a = comp.alg;
        s.b = r.b;
        s.depth = 1;
        s.sphere = extra;
        s.k = r.k;
        s.j_shifts = r.j_shifts;
        s.loop_shifts = r.loop_shifts;
        s.carrier = extra == 0 ? r.b : loop_power(r.b, extra).ext;
        int nvc = r.b->scalars.nvars();
        RingMap lift = prefix_map(r.b->scalars, s.carrier->scalars);
        std::vector<Poly> timgs;
        for (const auto& img : r.coeff_map.images) timgs.push_back(lift.apply(img));
        for (int i = 0; i < extra; ++i) timgs.push_back(s.carrier->scalars.var(nvc + i));
        s.coeff_map = RingMap{comp.alg->scalars, s.carrier->scalars, timgs};
        for (const auto& sq : comp.seqs) {
            ObjectSequence big;
            for (int o : sq.objs) big = seq_concat(big, r.seq_of[o]);
            s.seq_of.push_back(big);
        }
        return s;
    }
    case KKKind::Eta:
        return eta_step(kk_extend(*r.first, comp, extra));
    case KKKind::Sharp:
        return sharp(kk_extend(*r.first, comp, extra), *r.second);
    case KKKind::Oplus:
        return oplus(kk_extend(*r.first, comp, extra), kk_extend(*r.second, comp, extra));
    case KKKind::ClassifyingExtended:
        throw RingError("rebasing a rebased fold is not supported");
    case KKKind::DeltaOne:
        throw RingError("rebasing a tensored classifying map is not supported at desk scale");
    case KKKind::Zero:
        break;
    }
    throw RingError("empty representative");
}

KKRepresentative oplus(const KKRepresentative& x, const KKRepresentative& y) {
    require(same_algebroid(x.a, y.a) && same_algebroid(x.b, y.b),
            "block sum needs shared endpoints");
    require(x.depth == y.depth && x.sphere == y.sphere && x.k == y.k &&
                x.j_shifts == y.j_shifts && x.loop_shifts == y.loop_shifts,
            "degree mismatch in block sum");
    KKRepresentative s;
    s.kind = KKKind::Oplus;
    s.label = x.label + " (+) " + y.label;
    s.first = std::make_shared<const KKRepresentative>(x);
    s.second = std::make_shared<const KKRepresentative>(y);
    s.a = x.a;
    s.b = x.b;
    s.carrier = x.carrier;
    s.depth = x.depth;
    s.sphere = x.sphere;
    s.k = x.k;
    s.j_shifts = x.j_shifts;
    s.loop_shifts = x.loop_shifts;
    s.coeff_map = x.coeff_map;
    for (size_t o = 0; o < x.seq_of.size(); ++o)
        s.seq_of.push_back(seq_concat(x.seq_of[o], y.seq_of[o]));
    if (s.depth == 0)
        for (const auto& [nm, m] : x.images)
            s.images[nm] = mat_direct_sum(*s.carrier, m, y.images.at(nm));
    return s;
}

KKRepresentative eta_step(const KKRepresentative& r) {
    KKRepresentative s;
    s.kind = KKKind::Eta;
    s.label = "eta(" + r.label + ")";
    s.first = std::make_shared<const KKRepresentative>(r);
    s.a = r.a;
    s.b = r.b;
    s.depth = r.depth + 1;
    s.sphere = r.sphere + 1;
    s.k = r.k;
    s.j_shifts = r.j_shifts;
    s.loop_shifts = r.loop_shifts;
    s.carrier = loop_power(r.b, s.sphere).ext;
    s.coeff_map = r.coeff_map.then(prefix_map(r.carrier->scalars, s.carrier->scalars));
    s.seq_of = r.seq_of;
    return s;
}

KKRepresentative sharp(const KKRepresentative& alpha, const KKRepresentative& beta) {
    require(same_algebroid(alpha.b, beta.a), "the factors do not share a middle algebroid");
    require(alpha.k == beta.k, "subdivision levels differ");
    auto seqs = dedup_seqs(alpha.seq_of);
    auto comp_q = std::make_shared<const AdditiveCompletion>(additive_completion(alpha.carrier, seqs));
    std::shared_ptr<const AdditiveCompletion> comp0 = comp_q;
    if (alpha.sphere > 0)
        comp0 = std::make_shared<const AdditiveCompletion>(additive_completion(alpha.b, seqs));
    KKRepresentative s;
    s.kind = KKKind::Sharp;
    s.label = alpha.label + " # " + beta.label;
    s.first = std::make_shared<const KKRepresentative>(alpha);
    s.second = std::make_shared<const KKRepresentative>(beta);
    s.pipe = std::make_shared<const KKRepresentative>(kk_extend(beta, *comp_q, alpha.sphere));
    s.comp_mid = comp_q;
    s.comp_base = comp0;
    s.a = alpha.a;
    s.b = beta.b;
    s.carrier = s.pipe->carrier;
    s.depth = alpha.depth + beta.depth;
    s.sphere = alpha.sphere + beta.sphere;
    s.k = alpha.k;
    s.j_shifts = alpha.j_shifts + beta.j_shifts;
    s.loop_shifts = alpha.loop_shifts + beta.loop_shifts;
    s.coeff_map = alpha.coeff_map.then(s.pipe->coeff_map);
    for (size_t o = 0; o < alpha.seq_of.size(); ++o)
        s.seq_of.push_back(s.pipe->seq_of[comp_q->seq_index(alpha.seq_of[o])]);
    if (s.depth == 0)
        for (const auto& [nm, home] : s.a->basis_home) {
            (void)home;
            s.images[nm] = s.eval(nested_of_mor(s.a->basis_mor(nm)));
        }
    return s;
}

KKRepresentative delta_map(const KKRepresentative& alpha, AlgebroidPtr c) {
    require(alpha.depth <= 1, "the tensor extension evaluates at depth at most one");
    require(c->scalars == alpha.a->scalars && c->scalars == alpha.b->scalars,
            "the tensor extension needs a shared scalar ring");
    auto dsrc = std::make_shared<const TensoredContext>(tensored_context(alpha.a, c));
    auto ddst = std::make_shared<const TensoredContext>(tensored_context(alpha.b, c));
    KKRepresentative s;
    s.label = "delta(" + alpha.label + ")";
    s.first = std::make_shared<const KKRepresentative>(alpha);
    s.dsrc = dsrc;
    s.ddst = ddst;
    s.a = dsrc->prod;
    s.b = ddst->prod;
    s.depth = alpha.depth;
    s.sphere = alpha.sphere;
    s.k = alpha.k;
    s.j_shifts = alpha.j_shifts;
    s.loop_shifts = alpha.loop_shifts;
    s.carrier = s.sphere == 0 ? s.b : loop_power(s.b, s.sphere).ext;
    s.coeff_map = RingMap{s.a->scalars, s.carrier->scalars, alpha.coeff_map.images};
    for (size_t o = 0; o < dsrc->prod->objects.size(); ++o) {
        auto [ia, ic] = dsrc->split_object(static_cast<int>(o));
        ObjectSequence sq;
        for (int x : alpha.seq_of[ia].objs) sq.objs.push_back(ddst->pair_object(x, ic));
        s.seq_of.push_back(sq);
    }
    if (alpha.depth == 0) {
        s.kind = KKKind::Explicit;
        for (const auto& [nm, pr] : dsrc->split_name) {
            const MatMor& m = alpha.images.at(pr.first);
            auto home = dsrc->prod->basis_home.at(nm);
            MatMor big = mat_zero(*s.carrier, s.seq_of[home.first], s.seq_of[home.second]);
            for (int i = 0; i < m.dst.size(); ++i)
                for (int j = 0; j < m.src.size(); ++j)
                    big.entries[i][j] = tensor_entry(*ddst, *s.carrier, m.entries[i][j], pr.second);
            s.images[nm] = big;
        }
    } else {
        s.kind = KKKind::DeltaOne;
    }
    return s;
}

KKRepresentative shift(const KKRepresentative& r, const std::string& direction) {
    KKRepresentative s = r;
    if (direction == "J") {
        if (s.depth == s.j_shifts) s = eta_step(s);
        s.j_shifts += 1;
    } else if (direction == "loop") {
        if (s.sphere == s.loop_shifts) s = eta_step(s);
        s.loop_shifts += 1;
    } else {
        throw RingError("unknown shift direction");
    }
    s.label = direction + "-shift(" + r.label + ")";
    return s;
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

void report_fail(CertificateReport& rep, const std::string& line, const std::string& witness) {
    rep.ok = false;
    rep.lines.push_back(line);
    if (rep.witness.empty()) rep.witness = witness;
}

// Prefix padding of f by zero blocks so its sequences match target.
std::optional<MatHom> pad_to(const MatHom& f, const std::vector<ObjectSequence>& target) {
    std::vector<ObjectSequence> rests;
    for (size_t o = 0; o < f.seq_of.size(); ++o) {
        const auto& have = f.seq_of[o].objs;
        const auto& want = target[o].objs;
        if (have.size() > want.size() ||
            !std::equal(have.begin(), have.end(), want.begin()))
            return std::nullopt;
        ObjectSequence rest;
        rest.objs.assign(want.begin() + have.size(), want.end());
        rests.push_back(rest);
    }
    return oplus(f, zero_mat_hom(f.a, f.b, rests));
}

} // namespace

CertificateReport verify_certificate(const HomotopyCertificate& c, const std::vector<Mor>& tests) {
    CertificateReport rep;
    if (c.chain.empty()) {
        report_fail(rep, "the chain is empty", "");
        return rep;
    }
    for (size_t i = 0; i < c.chain.size(); ++i) {
        const MatHom& h = c.chain[i].h;
        const Algebroid& a = *h.a;
        const Algebroid& bt = *h.b;
        for (const auto& x : tests)
            for (const auto& y : tests) {
                if (x.dst == y.src) {
                    MatMor lhs = h.apply(a.compose(y, x));
                    MatMor rhs = mat_compose(bt, h.apply(y), h.apply(x));
                    if (!(lhs == rhs))
                        report_fail(rep,
                                    "segment " + std::to_string(i) +
                                        " is not multiplicative on a test pair",
                                    a.str(x) + " then " + a.str(y));
                }
                if (x.src == y.src && x.dst == y.dst) {
                    MatMor lhs = h.apply(a.add(x, y));
                    MatMor rhs = mat_add(bt, h.apply(x), h.apply(y));
                    if (!(lhs == rhs))
                        report_fail(rep,
                                    "segment " + std::to_string(i) +
                                        " is not additive on a test pair",
                                    a.str(x) + " plus " + a.str(y));
                }
            }
        if (i + 1 < c.chain.size()) {
            MatHom left = c.chain[i].at(1);
            MatHom right = c.chain[i + 1].at(0);
            for (const auto& x : tests)
                if (!(left.apply(x) == right.apply(x)))
                    report_fail(rep,
                                "segments " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                    " do not chain",
                                a.str(x));
        }
    }
    if (rep.ok)
        rep.lines.push_back("chain of " + std::to_string(c.chain.size()) +
                            " segments replays on " + std::to_string(tests.size()) +
                            " test elements; only the exhibited chain is certified");
    return rep;
}

CertificateReport verify_certificate(const KKEquivalenceCertificate& c,
                                     const std::vector<Mor>& tests_a,
                                     const std::vector<Mor>& tests_b) {
    CertificateReport rep;
    auto check_round = [&](const KKRepresentative& f, const KKRepresentative& g,
                           const HomotopyCertificate& round, const std::vector<Mor>& tests,
                           const char* side) {
        KKRepresentative comp = sharp(f, g);
        if (comp.depth != 0 || comp.sphere != 0) {
            report_fail(rep, std::string("round trip ") + side + " is not explicit", "");
            return;
        }
        MatHom cm = as_mat_hom(comp);
        CertificateReport sub = verify_certificate(round, tests);
        for (const auto& l : sub.lines) rep.lines.push_back(std::string(side) + ": " + l);
        if (!sub.ok) {
            rep.ok = false;
            if (rep.witness.empty()) rep.witness = sub.witness;
            return;
        }
        MatHom st = round.start();
        MatHom fi = round.finish();
        auto padded = pad_to(cm, st.seq_of);
        if (!padded) {
            report_fail(rep, std::string("round trip ") + side + " does not embed in the chain start",
                        "");
            return;
        }
        for (const auto& x : tests)
            if (!(st.apply(x) == padded->apply(x)))
                report_fail(rep, std::string(side) + ": chain does not start at the padded round trip",
                            comp.a->str(x));
        MatHom idh = mat_hom_of(identity_hom(f.a));
        auto pid = pad_to(idh, fi.seq_of);
        if (!pid) {
            report_fail(rep, std::string("identity does not embed in the chain finish on ") + side,
                        "");
            return;
        }
        for (const auto& x : tests)
            if (!(fi.apply(x) == pid->apply(x)))
                report_fail(rep, std::string(side) + ": chain does not finish at the padded identity",
                            comp.a->str(x));
    };
    check_round(c.forward, c.backward, c.round_a, tests_a, "side a");
    check_round(c.backward, c.forward, c.round_b, tests_b, "side b");
    if (rep.ok)
        rep.lines.push_back("both round trips replay; equality of classes is not decided");
    return rep;
}

// ---------------------------------------------------------------------------
// Homomorphism spaces

HomSpaceLevel hom_space(AlgebroidPtr a, AlgebroidPtr b, int n, int k,
                        const std::vector<MatHom>& verts,
                        const std::vector<HomotopyCertificate>& edges) {
    require(n >= 0 && n <= 1, "simplex dimension is capped at one");
    require(k >= 0, "subdivision level is nonnegative");
    for (const auto& v : verts) {
        require(same_algebroid(v.a, a) && same_algebroid(v.b, b), "invalid candidate: wrong endpoints");
        v.validate();
    }
    if (n == 0) require(edges.empty(), "dimension zero carries vertices only");
    for (const auto& e : edges) {
        require(e.chain.size() == static_cast<size_t>(1) << k, "edge chains carry 2^k segments");
        for (size_t i = 0; i < e.chain.size(); ++i) {
            require(same_algebroid(e.chain[i].h.a, a) && same_algebroid(e.chain[i].plain, b),
                    "invalid candidate: wrong endpoints");
            e.chain[i].h.validate();
            if (i + 1 < e.chain.size())
                require(mat_hom_equal(e.chain[i].at(1), e.chain[i + 1].at(0)),
                        "edge chain does not link");
        }
    }
    return HomSpaceLevel{a, b, n, k, verts, edges};
}

MatHom hom_face(const HomSpaceLevel& hs, int edge, int i) {
    require(hs.n == 1, "faces act on edges");
    require(edge >= 0 && edge < static_cast<int>(hs.edges.size()), "no such edge");
    require(i == 0 || i == 1, "faces of an edge are 0 and 1");
    return i == 0 ? hs.edges[edge].finish() : hs.edges[edge].start();
}

HomotopyCertificate hom_degeneracy(const HomSpaceLevel& hs, int vert) {
    require(vert >= 0 && vert < static_cast<int>(hs.verts.size()), "no such vertex");
    const MatHom& v = hs.verts[vert];
    PolyRing rbt = v.b->scalars;
    rbt.vars.push_back(fresh_var_name(rbt, "s"));
    int tvar = v.b->scalars.nvars();
    AlgebroidPtr bt = extend_scalars(*v.b, rbt);
    RingMap lift = prefix_map(v.b->scalars, rbt);
    MatHom lifted;
    lifted.a = v.a;
    lifted.b = bt;
    lifted.seq_of = v.seq_of;
    for (const auto& [nm, m] : v.images) lifted.images[nm] = mat_map_coefficients(lift, m);
    if (v.scalar_map)
        lifted.scalar_map = v.scalar_map->then(lift);
    else
        lifted.scalar_map = prefix_map(v.a->scalars, rbt);
    HomotopyCertificate c;
    for (int i = 0; i < (1 << hs.k); ++i)
        c.chain.push_back(ElementaryHomotopy{lifted, v.b, tvar});
    return c;
}

} // namespace kkalg
