#include "kkalg/algebroid.hpp"

#include <algorithm>

namespace kkalg {

namespace {

const std::vector<std::string> kNoBasis;

void require(bool ok, const std::string& what) {
    if (!ok) throw RingError(what);
}

} // namespace

int Algebroid::object_index(const std::string& name) const {
    for (size_t i = 0; i < objects.size(); ++i)
        if (objects[i] == name) return static_cast<int>(i);
    throw RingError("unknown object: " + name);
}

const std::vector<std::string>& Algebroid::basis(int a, int b) const {
    auto it = hom_basis.find({a, b});
    return it == hom_basis.end() ? kNoBasis : it->second;
}

Mor Algebroid::zero_mor(int a, int b) const {
    require(a >= 0 && a < static_cast<int>(objects.size()) && b >= 0 &&
                b < static_cast<int>(objects.size()),
            "object index out of range");
    return Mor{a, b, {}};
}

Mor Algebroid::basis_mor(const std::string& name) const {
    auto it = basis_home.find(name);
    require(it != basis_home.end(), "unknown basis element: " + name);
    Mor m{it->second.first, it->second.second, {}};
    m.coeffs[name] = scalars.one();
    return m;
}

Mor Algebroid::unit(int a) const {
    require(unital(), "algebroid has no units");
    return (*units)[a];
}

Mor Algebroid::add(const Mor& u, const Mor& v) const {
    require(u.src == v.src && u.dst == v.dst, "sum of morphisms with different endpoints");
    Mor r = u;
    for (const auto& [name, c] : v.coeffs) {
        auto it = r.coeffs.find(name);
        if (it == r.coeffs.end()) {
            r.coeffs[name] = c;
        } else {
            it->second = scalars.add(it->second, c);
            if (it->second.is_zero()) r.coeffs.erase(it);
        }
    }
    return r;
}

Mor Algebroid::sub(const Mor& u, const Mor& v) const { return add(u, scale_rat(Rat(-1), v)); }

Mor Algebroid::scale(const Poly& c, const Mor& u) const {
    Mor r{u.src, u.dst, {}};
    if (c.is_zero()) return r;
    for (const auto& [name, c0] : u.coeffs) {
        Poly p = scalars.mul(c, c0);
        if (!p.is_zero()) r.coeffs[name] = p;
    }
    return r;
}

Mor Algebroid::scale_rat(const Rat& c, const Mor& u) const {
    return scale(scalars.constant(c), u);
}

Mor Algebroid::compose(const Mor& y, const Mor& x) const {
    require(!moduloid, "moduloid has no composition law");
    require(x.dst == y.src, "composition endpoint mismatch");
    Mor r = zero_mor(x.src, y.dst);
    for (const auto& [yn, yc] : y.coeffs)
        for (const auto& [xn, xc] : x.coeffs) {
            auto it = structure.find({yn, xn});
            if (it == structure.end()) continue;
            Poly c = scalars.mul(yc, xc);
            for (const auto& [zn, zc] : it->second) {
                Poly add_c = scalars.mul(c, zc);
                auto jt = r.coeffs.find(zn);
                if (jt == r.coeffs.end()) {
                    if (!add_c.is_zero()) r.coeffs[zn] = add_c;
                } else {
                    jt->second = scalars.add(jt->second, add_c);
                    if (jt->second.is_zero()) r.coeffs.erase(jt);
                }
            }
        }
    return r;
}

std::string Algebroid::str(const Mor& u) const {
    if (u.coeffs.empty()) return "0";
    std::string out;
    for (const auto& [name, c] : u.coeffs) {
        if (!out.empty()) out += " + ";
        out += "(" + scalars.str(c) + ")*" + name;
    }
    return out;
}

void check_algebroid(const Algebroid& a) {
    int n = static_cast<int>(a.objects.size());
    require(n > 0, "algebroid needs at least one object");
    // Basis names are globally unique and the lookup tables agree.
    std::map<std::string, int> seen;
    for (const auto& [pair, names] : a.hom_basis) {
        require(pair.first >= 0 && pair.first < n && pair.second >= 0 && pair.second < n,
                "hom pair indexes a missing object");
        for (const auto& name : names) {
            require(++seen[name] == 1, "duplicate basis name: " + name);
            auto it = a.basis_home.find(name);
            require(it != a.basis_home.end() && it->second == pair,
                    "basis_home disagrees with hom_basis for " + name);
        }
    }
    require(seen.size() == a.basis_home.size(), "basis_home has extra entries");
    auto check_coeffs = [&](const std::map<std::string, Poly>& coeffs, int src, int dst,
                            const std::string& where) {
        const auto& names = a.basis(src, dst);
        for (const auto& [zn, zc] : coeffs) {
            require(std::find(names.begin(), names.end(), zn) != names.end(),
                    where + ": coefficient on foreign basis element " + zn);
            require(zc.nvars == a.scalars.nvars(), where + ": coefficient in wrong ring");
            require(!zc.is_zero(), where + ": stored zero coefficient");
        }
    };
    if (a.moduloid) {
        require(a.structure.empty(), "moduloid with structure constants");
        require(!a.units, "moduloid with units");
        return;
    }
    for (const auto& [key, coeffs] : a.structure) {
        auto yit = a.basis_home.find(key.first);
        auto xit = a.basis_home.find(key.second);
        require(yit != a.basis_home.end() && xit != a.basis_home.end(),
                "structure constant on unknown basis name");
        require(xit->second.second == yit->second.first,
                "structure constant on non-composable pair " + key.first + ", " + key.second);
        check_coeffs(coeffs, xit->second.first, yit->second.second,
                     "compose(" + key.first + ", " + key.second + ")");
    }
    // Associativity on every basis triple.
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
            for (int aa = 0; aa < n; ++aa)
                for (int d = 0; d < n; ++d)
                    for (const auto& xn : a.basis(aa, b))
                        for (const auto& yn : a.basis(b, c))
                            for (const auto& zn : a.basis(c, d)) {
                                Mor x = a.basis_mor(xn), y = a.basis_mor(yn), z = a.basis_mor(zn);
                                if (!(a.compose(z, a.compose(y, x)) ==
                                      a.compose(a.compose(z, y), x)))
                                    throw RingError("associativity fails on (" + zn + ", " + yn +
                                                    ", " + xn + ")");
                            }
    if (a.units) {
        require(static_cast<int>(a.units->size()) == n, "one unit per object required");
        for (int o = 0; o < n; ++o) {
            const Mor& u = (*a.units)[o];
            require(u.src == o && u.dst == o, "unit endpoints wrong");
            check_coeffs(u.coeffs, o, o, "unit of " + a.objects[o]);
        }
        for (const auto& [name, home] : a.basis_home) {
            Mor x = a.basis_mor(name);
            if (!(a.compose(x, a.unit(home.first)) == x))
                throw RingError("right unit law fails on " + name);
            if (!(a.compose(a.unit(home.second), x) == x))
                throw RingError("left unit law fails on " + name);
        }
    }
}

Poly AlgHom::map_scalar(const Poly& c) const {
    if (!scalar_map) return c;
    return scalar_map->apply(c);
}

Mor AlgHom::apply(const Mor& u) const {
    Mor r = to->zero_mor(object_map[u.src], object_map[u.dst]);
    for (const auto& [name, c] : u.coeffs)
        r = to->add(r, to->scale(map_scalar(c), images.at(name)));
    return r;
}

void AlgHom::validate() const {
    require(from && to, "homomorphism missing endpoints");
    require(object_map.size() == from->objects.size(), "object map has wrong size");
    for (int o : object_map)
        require(o >= 0 && o < static_cast<int>(to->objects.size()), "object map out of range");
    if (scalar_map) {
        require(scalar_map->from == from->scalars && scalar_map->to == to->scalars,
                "scalar map endpoints disagree with the algebroids");
    } else {
        require(from->scalars == to->scalars,
                "scalar rings differ but no scalar map was given");
    }
    for (const auto& [name, home] : from->basis_home) {
        auto it = images.find(name);
        require(it != images.end(), "missing image for basis element " + name);
        require(it->second.src == object_map[home.first] &&
                    it->second.dst == object_map[home.second],
                "image endpoints wrong for " + name);
        for (const auto& [bn, c] : it->second.coeffs) {
            auto bh = to->basis_home.find(bn);
            require(bh != to->basis_home.end() && !c.is_zero() &&
                        c.nvars == to->scalars.nvars(),
                    "image of " + name + " is not a valid target element");
            require(bh->second.first == it->second.src && bh->second.second == it->second.dst,
                    "image of " + name + " mixes hom modules");
        }
    }
    if (from->moduloid) return;
    for (const auto& [xn, xh] : from->basis_home)
        for (const auto& [yn, yh] : from->basis_home) {
            if (xh.second != yh.first) continue;
            Mor lhs = apply(from->compose(from->basis_mor(yn), from->basis_mor(xn)));
            Mor rhs = to->compose(apply(from->basis_mor(yn)), apply(from->basis_mor(xn)));
            if (!(lhs == rhs))
                throw RingError("homomorphism not compatible with compose on (" + yn + ", " + xn +
                                ")");
        }
}

void AlgHom::validate_units() const {
    require(from->unital() && to->unital(), "unit check needs unital algebroids");
    for (size_t o = 0; o < from->objects.size(); ++o)
        if (!(apply(from->unit(static_cast<int>(o))) == to->unit(object_map[o])))
            throw RingError("unit of " + from->objects[o] + " is not preserved");
}

AlgHom identity_hom(AlgebroidPtr a) {
    AlgHom h;
    h.from = a;
    h.to = a;
    h.object_map.resize(a->objects.size());
    for (size_t i = 0; i < a->objects.size(); ++i) h.object_map[i] = static_cast<int>(i);
    for (const auto& [name, home] : a->basis_home) {
        (void)home;
        h.images[name] = a->basis_mor(name);
    }
    return h;
}

AlgHom compose_hom(const AlgHom& beta, const AlgHom& alpha) {
    require(alpha.to == beta.from ||
                (alpha.to && beta.from && alpha.to->objects == beta.from->objects &&
                 alpha.to->basis_home == beta.from->basis_home),
            "homomorphisms not composable");
    AlgHom h;
    h.from = alpha.from;
    h.to = beta.to;
    for (int o : alpha.object_map) h.object_map.push_back(beta.object_map[o]);
    for (const auto& [name, img] : alpha.images) h.images[name] = beta.apply(img);
    if (alpha.scalar_map && beta.scalar_map)
        h.scalar_map = alpha.scalar_map->then(*beta.scalar_map);
    else if (alpha.scalar_map)
        h.scalar_map = alpha.scalar_map;
    else if (beta.scalar_map)
        h.scalar_map = beta.scalar_map;
    return h;
}

AlgebroidPtr one_object_ring_algebroid(const PolyRing& scalars, const std::string& objname) {
    auto a = std::make_shared<Algebroid>();
    a->scalars = scalars;
    a->objects = {objname};
    a->hom_basis[{0, 0}] = {"1"};
    a->basis_home["1"] = {0, 0};
    a->structure[{"1", "1"}] = {{"1", scalars.one()}};
    Mor u{0, 0, {{"1", scalars.one()}}};
    a->units = std::vector<Mor>{u};
    return a;
}

namespace {

std::string matrix_unit_name(int row, int col) {
    return "E[" + std::to_string(row) + "," + std::to_string(col) + "]";
}

} // namespace

AlgebroidPtr matrix_pattern_algebroid(const PolyRing& scalars, int n) {
    require(n >= 1, "matrix pattern needs a positive size");
    auto a = std::make_shared<Algebroid>();
    a->scalars = scalars;
    for (int i = 0; i < n; ++i) a->objects.push_back("o" + std::to_string(i));
    // E[j,i] spans Hom(i,j); E[k,j] after E[j,i] = E[k,i].
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a->hom_basis[{i, j}] = {matrix_unit_name(j, i)};
            a->basis_home[matrix_unit_name(j, i)] = {i, j};
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                a->structure[{matrix_unit_name(k, j), matrix_unit_name(j, i)}] = {
                    {matrix_unit_name(k, i), scalars.one()}};
    std::vector<Mor> units;
    for (int i = 0; i < n; ++i)
        units.push_back(Mor{i, i, {{matrix_unit_name(i, i), scalars.one()}}});
    a->units = units;
    return a;
}

AlgebroidPtr extend_scalars(const Algebroid& a, const PolyRing& bigger) {
    require(bigger.base == a.scalars.base, "scalar extension must keep the base ring");
    require(bigger.nvars() >= a.scalars.nvars(), "scalar extension cannot drop generators");
    for (int i = 0; i < a.scalars.nvars(); ++i)
        require(bigger.vars[i] == a.scalars.vars[i],
                "old generators must be a prefix of the new ones");
    RingMap inc;
    inc.from = a.scalars;
    inc.to = bigger;
    for (int i = 0; i < a.scalars.nvars(); ++i) inc.images.push_back(bigger.var(i));
    auto out = std::make_shared<Algebroid>(a);
    out->scalars = bigger;
    for (auto& [key, coeffs] : out->structure) {
        (void)key;
        for (auto& [zn, zc] : coeffs) {
            (void)zn;
            zc = inc.apply(zc);
        }
    }
    if (out->units)
        for (Mor& u : *out->units)
            for (auto& [name, c] : u.coeffs) {
                (void)name;
                c = inc.apply(c);
            }
    return out;
}

AlgHom scalar_extension_hom(AlgebroidPtr from, AlgebroidPtr extended) {
    AlgHom h = identity_hom(from);
    h.to = extended;
    RingMap inc;
    inc.from = from->scalars;
    inc.to = extended->scalars;
    for (int i = 0; i < from->scalars.nvars(); ++i) inc.images.push_back(extended->scalars.var(i));
    h.scalar_map = inc;
    for (auto& [name, img] : h.images) {
        (void)name;
        for (auto& [bn, c] : img.coeffs) {
            (void)bn;
            c = inc.apply(c);
        }
    }
    return h;
}

std::string tensor_basis_name(const std::string& x, const std::string& y) {
    return x + "(x)" + y;
}

AlgebroidPtr tensor_product(const Algebroid& a, const Algebroid& b) {
    require(a.scalars == b.scalars, "tensor product needs a common scalar ring");
    require(a.moduloid == b.moduloid, "tensor product mixes moduloid and algebroid");
    auto t = std::make_shared<Algebroid>();
    t->scalars = a.scalars;
    t->moduloid = a.moduloid;
    int nb = static_cast<int>(b.objects.size());
    auto pair_index = [nb](int i, int j) { return i * nb + j; };
    for (const auto& oa : a.objects)
        for (const auto& ob : b.objects) t->objects.push_back("(" + oa + "|" + ob + ")");
    for (const auto& [pa, na] : a.hom_basis)
        for (const auto& [pb, nbs] : b.hom_basis) {
            std::pair<int, int> key = {pair_index(pa.first, pb.first),
                                       pair_index(pa.second, pb.second)};
            for (const auto& xa : na)
                for (const auto& xb : nbs) {
                    t->hom_basis[key].push_back(tensor_basis_name(xa, xb));
                    t->basis_home[tensor_basis_name(xa, xb)] = key;
                }
        }
    if (!t->moduloid) {
        for (const auto& [ka, ca] : a.structure)
            for (const auto& [kb, cb] : b.structure) {
                std::map<std::string, Poly> coeffs;
                for (const auto& [za, pa] : ca)
                    for (const auto& [zb, pb] : cb) {
                        Poly c = t->scalars.mul(pa, pb);
                        if (!c.is_zero()) coeffs[tensor_basis_name(za, zb)] = c;
                    }
                if (!coeffs.empty())
                    t->structure[{tensor_basis_name(ka.first, kb.first),
                                  tensor_basis_name(ka.second, kb.second)}] = coeffs;
            }
        if (a.units && b.units) {
            std::vector<Mor> units;
            for (size_t i = 0; i < a.objects.size(); ++i)
                for (size_t j = 0; j < b.objects.size(); ++j) {
                    int o = pair_index(static_cast<int>(i), static_cast<int>(j));
                    Mor u{o, o, {}};
                    for (const auto& [xa, pa] : (*a.units)[i].coeffs)
                        for (const auto& [xb, pb] : (*b.units)[j].coeffs) {
                            Poly c = t->scalars.mul(pa, pb);
                            if (!c.is_zero()) u.coeffs[tensor_basis_name(xa, xb)] = c;
                        }
                    units.push_back(u);
                }
            t->units = units;
        }
    }
    return t;
}

namespace {

std::string tagged(const std::string& name, int side) {
    return name + "#" + std::to_string(side);
}

} // namespace

DirectSum direct_sum_algebroid(AlgebroidPtr a) {
    require(!a->moduloid, "direct sum is defined for algebroids");
    auto s = std::make_shared<Algebroid>();
    s->scalars = a->scalars;
    s->objects = a->objects;
    for (const auto& [pair, names] : a->hom_basis)
        for (int side = 0; side < 2; ++side)
            for (const auto& name : names) {
                s->hom_basis[pair].push_back(tagged(name, side));
                s->basis_home[tagged(name, side)] = pair;
            }
    for (const auto& [key, coeffs] : a->structure)
        for (int side = 0; side < 2; ++side) {
            std::map<std::string, Poly> c;
            for (const auto& [zn, zc] : coeffs) c[tagged(zn, side)] = zc;
            s->structure[{tagged(key.first, side), tagged(key.second, side)}] = c;
        }
    if (a->units) {
        std::vector<Mor> units;
        for (size_t o = 0; o < a->objects.size(); ++o) {
            Mor u{static_cast<int>(o), static_cast<int>(o), {}};
            for (int side = 0; side < 2; ++side)
                for (const auto& [name, c] : (*a->units)[o].coeffs)
                    u.coeffs[tagged(name, side)] = c;
            units.push_back(u);
        }
        s->units = units;
    }
    DirectSum d;
    d.sum = s;
    auto make_incl = [&](int side) {
        AlgHom h;
        h.from = a;
        h.to = s;
        h.object_map = identity_hom(a).object_map;
        for (const auto& [name, home] : a->basis_home) {
            Mor img = s->zero_mor(home.first, home.second);
            img.coeffs[tagged(name, side)] = a->scalars.one();
            h.images[name] = img;
        }
        return h;
    };
    auto make_proj = [&](int side) {
        AlgHom h;
        h.from = s;
        h.to = a;
        h.object_map = identity_hom(a).object_map;
        for (const auto& [name, home] : a->basis_home)
            for (int t = 0; t < 2; ++t)
                h.images[tagged(name, t)] =
                    t == side ? a->basis_mor(name) : a->zero_mor(home.first, home.second);
        return h;
    };
    d.incl0 = make_incl(0);
    d.incl1 = make_incl(1);
    d.proj0 = make_proj(0);
    d.proj1 = make_proj(1);
    return d;
}

AlgebroidPtr as_moduloid(const Algebroid& a) {
    auto m = std::make_shared<Algebroid>();
    m->scalars = a.scalars;
    m->objects = a.objects;
    m->moduloid = true;
    m->hom_basis = a.hom_basis;
    m->basis_home = a.basis_home;
    return m;
}

} // namespace kkalg
