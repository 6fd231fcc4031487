#include "kkalg/completion.hpp"

#include <algorithm>
#include <set>

namespace kkalg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw RingError(what);
}

} // namespace

MatMor mat_zero(const Algebroid& a, const ObjectSequence& src, const ObjectSequence& dst) {
    MatMor m;
    m.src = src;
    m.dst = dst;
    m.entries.resize(dst.size());
    for (int i = 0; i < dst.size(); ++i)
        for (int j = 0; j < src.size(); ++j)
            m.entries[i].push_back(a.zero_mor(src.objs[j], dst.objs[i]));
    return m;
}

MatMor mat_identity(const Algebroid& a, const ObjectSequence& s) {
    MatMor m = mat_zero(a, s, s);
    for (int i = 0; i < s.size(); ++i) m.entries[i][i] = a.unit(s.objs[i]);
    return m;
}

MatMor mat_add(const Algebroid& a, const MatMor& u, const MatMor& v) {
    require(u.src == v.src && u.dst == v.dst, "matrix sum shape mismatch");
    MatMor m = u;
    for (int i = 0; i < u.dst.size(); ++i)
        for (int j = 0; j < u.src.size(); ++j)
            m.entries[i][j] = a.add(u.entries[i][j], v.entries[i][j]);
    return m;
}

MatMor mat_sub(const Algebroid& a, const MatMor& u, const MatMor& v) {
    return mat_add(a, u, mat_scale(a, a.scalars.constant(Rat(-1)), v));
}

MatMor mat_scale(const Algebroid& a, const Poly& c, const MatMor& u) {
    MatMor m = u;
    for (auto& row : m.entries)
        for (auto& e : row) e = a.scale(c, e);
    return m;
}

MatMor mat_compose(const Algebroid& a, const MatMor& y, const MatMor& x) {
    require(x.dst == y.src, "matrix composition shape mismatch");
    MatMor m = mat_zero(a, x.src, y.dst);
    for (int i = 0; i < y.dst.size(); ++i)
        for (int j = 0; j < x.src.size(); ++j)
            for (int t = 0; t < y.src.size(); ++t)
                m.entries[i][j] =
                    a.add(m.entries[i][j], a.compose(y.entries[i][t], x.entries[t][j]));
    return m;
}

MatMor mat_direct_sum(const Algebroid& a, const MatMor& u, const MatMor& v) {
    ObjectSequence src, dst;
    src.objs = u.src.objs;
    src.objs.insert(src.objs.end(), v.src.objs.begin(), v.src.objs.end());
    dst.objs = u.dst.objs;
    dst.objs.insert(dst.objs.end(), v.dst.objs.begin(), v.dst.objs.end());
    MatMor m = mat_zero(a, src, dst);
    for (int i = 0; i < u.dst.size(); ++i)
        for (int j = 0; j < u.src.size(); ++j) m.entries[i][j] = u.entries[i][j];
    for (int i = 0; i < v.dst.size(); ++i)
        for (int j = 0; j < v.src.size(); ++j)
            m.entries[u.dst.size() + i][u.src.size() + j] = v.entries[i][j];
    return m;
}

MatMor alpha_oplus(const AlgHom& h, const MatMor& u) {
    MatMor m;
    for (int o : u.src.objs) m.src.objs.push_back(h.object_map[o]);
    for (int o : u.dst.objs) m.dst.objs.push_back(h.object_map[o]);
    m.entries.resize(u.dst.size());
    for (int i = 0; i < u.dst.size(); ++i)
        for (int j = 0; j < u.src.size(); ++j) m.entries[i].push_back(h.apply(u.entries[i][j]));
    return m;
}

namespace {

std::string seq_name(const Algebroid& a, const ObjectSequence& s) {
    std::string out = "[";
    for (int i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += a.objects[s.objs[i]];
    }
    return out + "]";
}

std::string entry_name(int i, int j, int s, int t, const std::string& base) {
    return "E[" + std::to_string(i) + "," + std::to_string(j) + ";" + std::to_string(s) + ">" +
           std::to_string(t) + "]" + base;
}

} // namespace

int AdditiveCompletion::seq_index(const ObjectSequence& s) const {
    for (size_t i = 0; i < seqs.size(); ++i)
        if (seqs[i] == s) return static_cast<int>(i);
    throw RingError("sequence not materialized in this completion");
}

Mor AdditiveCompletion::to_element(const MatMor& m) const {
    int s = seq_index(m.src), t = seq_index(m.dst);
    Mor u = alg->zero_mor(s, t);
    for (int i = 0; i < m.dst.size(); ++i)
        for (int j = 0; j < m.src.size(); ++j)
            for (const auto& [name, c] : m.entries[i][j].coeffs)
                u.coeffs[entry_name(i, j, s, t, name)] = c;
    return u;
}

MatMor AdditiveCompletion::from_element(const Mor& u) const {
    MatMor m = mat_zero(*base, seqs[u.src], seqs[u.dst]);
    for (const auto& [name, c] : u.coeffs) {
        // Parse E[i,j;s>t]base back apart.
        size_t comma = name.find(','), semi = name.find(';'), close = name.find(']');
        int i = std::stoi(name.substr(2, comma - 2));
        int j = std::stoi(name.substr(comma + 1, semi - comma - 1));
        std::string inner = name.substr(close + 1);
        m.entries[i][j].coeffs[inner] = c;
    }
    return m;
}

AdditiveCompletion additive_completion(AlgebroidPtr a, const std::vector<ObjectSequence>& seqs) {
    require(a && !a->moduloid, "additive completion is defined for algebroids");
    for (const auto& s : seqs)
        for (int o : s.objs)
            require(o >= 0 && o < static_cast<int>(a->objects.size()),
                    "sequence names a missing object");
    for (size_t i = 0; i < seqs.size(); ++i)
        for (size_t j = i + 1; j < seqs.size(); ++j)
            require(!(seqs[i] == seqs[j]), "duplicate sequence in completion");
    AdditiveCompletion c;
    c.base = a;
    c.seqs = seqs;
    auto alg = std::make_shared<Algebroid>();
    alg->scalars = a->scalars;
    for (const auto& s : seqs) alg->objects.push_back(seq_name(*a, s));
    int ns = static_cast<int>(seqs.size());
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < ns; ++t) {
            std::vector<std::string> names;
            for (int i = 0; i < seqs[t].size(); ++i)
                for (int j = 0; j < seqs[s].size(); ++j)
                    for (const auto& bn : a->basis(seqs[s].objs[j], seqs[t].objs[i])) {
                        std::string nm = entry_name(i, j, s, t, bn);
                        names.push_back(nm);
                        alg->basis_home[nm] = {s, t};
                    }
            if (!names.empty()) alg->hom_basis[{s, t}] = names;
        }
    // Structure constants: matrix-unit bookkeeping over the base constants.
    for (int s = 0; s < ns; ++s)
        for (int t = 0; t < ns; ++t)
            for (int u = 0; u < ns; ++u) {
                // y: t -> u composed after x: s -> t.
                for (int k = 0; k < seqs[u].size(); ++k)
                    for (int l = 0; l < seqs[t].size(); ++l)
                        for (const auto& yn : a->basis(seqs[t].objs[l], seqs[u].objs[k]))
                            for (int j = 0; j < seqs[s].size(); ++j)
                                for (const auto& xn :
                                     a->basis(seqs[s].objs[j], seqs[t].objs[l])) {
                                    auto it = a->structure.find({yn, xn});
                                    if (it == a->structure.end()) continue;
                                    std::map<std::string, Poly> coeffs;
                                    for (const auto& [zn, zc] : it->second)
                                        coeffs[entry_name(k, j, s, u, zn)] = zc;
                                    if (!coeffs.empty())
                                        alg->structure[{entry_name(k, l, t, u, yn),
                                                        entry_name(l, j, s, t, xn)}] = coeffs;
                                }
            }
    if (a->units) {
        std::vector<Mor> units;
        for (int s = 0; s < ns; ++s) {
            Mor u{s, s, {}};
            for (int i = 0; i < seqs[s].size(); ++i)
                for (const auto& [bn, bc] : a->unit(seqs[s].objs[i]).coeffs)
                    u.coeffs[entry_name(i, i, s, s, bn)] = bc;
            units.push_back(u);
        }
        alg->units = units;
    }
    c.alg = alg;
    return c;
}

AlgHom alpha_oplus_hom(const AdditiveCompletion& ca, const AdditiveCompletion& cb,
                       const AlgHom& h) {
    require(ca.base == h.from && cb.base == h.to, "completion bases disagree with homomorphism");
    AlgHom out;
    out.from = ca.alg;
    out.to = cb.alg;
    out.scalar_map = h.scalar_map;
    for (const auto& s : ca.seqs) {
        ObjectSequence mapped;
        for (int o : s.objs) mapped.objs.push_back(h.object_map[o]);
        out.object_map.push_back(cb.seq_index(mapped));
    }
    for (const auto& [name, home] : ca.alg->basis_home) {
        (void)home;
        MatMor m = ca.from_element(ca.alg->basis_mor(name));
        out.images[name] = cb.to_element(alpha_oplus(h, m));
    }
    return out;
}

HElem ColimitAlgebra::add(const HElem& u, const HElem& v) const {
    HElem r = u;
    for (const auto& [key, m] : v.entries) {
        auto it = r.entries.find(key);
        if (it == r.entries.end()) {
            r.entries[key] = m;
        } else {
            it->second = base->add(it->second, m);
            if (it->second.zero()) r.entries.erase(it);
        }
    }
    return r;
}

HElem ColimitAlgebra::sub(const HElem& u, const HElem& v) const {
    return add(u, scale(base->scalars.constant(Rat(-1)), v));
}

HElem ColimitAlgebra::scale(const Poly& c, const HElem& u) const {
    HElem r;
    for (const auto& [key, m] : u.entries) {
        Mor e = base->scale(c, m);
        if (!e.zero()) r.entries[key] = e;
    }
    return r;
}

HElem ColimitAlgebra::mul(const HElem& y, const HElem& x) const {
    HElem r;
    for (const auto& [ky, my] : y.entries)
        for (const auto& [kx, mx] : x.entries) {
            if (!(ky.second == kx.first)) continue;
            std::pair<HKey, HKey> key = {ky.first, kx.second};
            Mor prod = base->compose(my, mx);
            auto it = r.entries.find(key);
            if (it == r.entries.end()) {
                if (!prod.zero()) r.entries[key] = prod;
            } else {
                it->second = base->add(it->second, prod);
                if (it->second.zero()) r.entries.erase(it);
            }
        }
    return r;
}

ColimitAlgebra colimit_algebra(AlgebroidPtr a) {
    require(a && !a->moduloid, "colimit algebra is defined for algebroids");
    return ColimitAlgebra{a};
}

std::vector<HKey> canonical_keys(const ObjectSequence& s) {
    std::vector<HKey> keys;
    for (int k = 0; k < s.size(); ++k) {
        long long copy = 0;
        for (int l = 0; l < k; ++l)
            if (s.objs[l] == s.objs[k]) ++copy;
        keys.push_back(HKey{copy, s.objs[k]});
    }
    return keys;
}

HElem embed_H(const ColimitAlgebra& h, const MatMor& m) {
    return embed_H_keys(h, canonical_keys(m.dst), canonical_keys(m.src), m);
}

HElem embed_H_keys(const ColimitAlgebra& h, const std::vector<HKey>& dst_keys,
                   const std::vector<HKey>& src_keys, const MatMor& m) {
    (void)h;
    require(static_cast<int>(dst_keys.size()) == m.dst.size() &&
                static_cast<int>(src_keys.size()) == m.src.size(),
            "corner keys do not match the matrix shape");
    for (int i = 0; i < m.dst.size(); ++i)
        require(dst_keys[i].obj == m.dst.objs[i], "corner key names the wrong object");
    for (int j = 0; j < m.src.size(); ++j)
        require(src_keys[j].obj == m.src.objs[j], "corner key names the wrong object");
    HElem r;
    for (int i = 0; i < m.dst.size(); ++i)
        for (int j = 0; j < m.src.size(); ++j)
            if (!m.entries[i][j].zero()) r.entries[{dst_keys[i], src_keys[j]}] = m.entries[i][j];
    return r;
}

HElem HomIntoH::apply(const Mor& u) const {
    HElem r;
    for (const auto& [name, c] : u.coeffs)
        r = target.add(r, target.scale(c, images.at(name)));
    return r;
}

void HomIntoH::validate() const {
    require(from && target.base, "homomorphism missing endpoints");
    require(from->scalars == target.base->scalars,
            "homomorphism into colimit needs matching scalar rings");
    for (const auto& [name, home] : from->basis_home) {
        auto it = images.find(name);
        require(it != images.end(), "missing image for basis element " + name);
        for (const auto& [key, m] : it->second.entries)
            require(m.src == key.second.obj && m.dst == key.first.obj && !m.zero(),
                    "image of " + name + " has ill-typed entries");
        (void)home;
    }
    for (const auto& [xn, xh] : from->basis_home)
        for (const auto& [yn, yh] : from->basis_home) {
            if (xh.second != yh.first) continue;
            HElem lhs = apply(from->compose(from->basis_mor(yn), from->basis_mor(xn)));
            HElem rhs = target.mul(images.at(yn), images.at(xn));
            if (!(lhs == rhs))
                throw RingError("homomorphism into colimit not multiplicative on (" + yn + ", " +
                                xn + ")");
        }
}

MatMor HomIntoCompletion::apply(const Mor& u) const {
    MatMor r = mat_zero(*to_base, seq_of[u.src], seq_of[u.dst]);
    for (const auto& [name, c] : u.coeffs)
        r = mat_add(*to_base, r, mat_scale(*to_base, c, images.at(name)));
    return r;
}

void HomIntoCompletion::validate() const {
    require(from && to_base, "factorisation missing endpoints");
    for (const auto& [xn, xh] : from->basis_home) {
        auto it = images.find(xn);
        require(it != images.end(), "missing image for basis element " + xn);
        require(it->second.src == seq_of[xh.first] && it->second.dst == seq_of[xh.second],
                "image of " + xn + " has the wrong sequences");
    }
    for (const auto& [xn, xh] : from->basis_home)
        for (const auto& [yn, yh] : from->basis_home) {
            if (xh.second != yh.first) continue;
            MatMor lhs = apply(from->compose(from->basis_mor(yn), from->basis_mor(xn)));
            MatMor rhs = mat_compose(*to_base, images.at(yn), images.at(xn));
            if (!(lhs == rhs))
                throw RingError("factorisation not multiplicative on (" + yn + ", " + xn + ")");
        }
}

HomIntoCompletion factor(const HomIntoH& alpha) {
    int n = static_cast<int>(alpha.from->objects.size());
    std::vector<std::set<HKey>> support(n);
    for (const auto& [name, img] : alpha.images) {
        auto home = alpha.from->basis_home.at(name);
        for (const auto& [key, m] : img.entries) {
            (void)m;
            support[home.second].insert(key.first);
            support[home.first].insert(key.second);
        }
    }
    HomIntoCompletion out;
    out.from = alpha.from;
    out.to_base = alpha.target.base;
    out.seq_of.resize(n);
    out.corner.resize(n);
    for (int o = 0; o < n; ++o)
        for (const HKey& k : support[o]) {
            out.corner[o].push_back(k);
            out.seq_of[o].objs.push_back(k.obj);
        }
    for (const auto& [name, img] : alpha.images) {
        auto home = alpha.from->basis_home.at(name);
        MatMor m = mat_zero(*out.to_base, out.seq_of[home.first], out.seq_of[home.second]);
        for (int i = 0; i < static_cast<int>(out.corner[home.second].size()); ++i)
            for (int j = 0; j < static_cast<int>(out.corner[home.first].size()); ++j) {
                auto it = img.entries.find({out.corner[home.second][i], out.corner[home.first][j]});
                if (it != img.entries.end()) m.entries[i][j] = it->second;
            }
        out.images[name] = m;
    }
    return out;
}

} // namespace kkalg
