#include "kkalg/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kkalg {

namespace {

struct SimplicialError : RingError {
    explicit SimplicialError(const std::string& what) : RingError(what) {}
};

bool surjective_onto(const std::vector<int>& v, int k) {
    std::vector<bool> hit(k + 1, false);
    for (int x : v) {
        if (x < 0 || x > k) return false;
        hit[x] = true;
    }
    for (bool b : hit)
        if (!b) return false;
    return true;
}

// Positions t >= 1 where the surjection repeats (the degenerate directions).
std::vector<int> repeat_positions(const std::vector<int>& surj) {
    std::vector<int> r;
    for (size_t t = 1; t < surj.size(); ++t)
        if (surj[t] == surj[t - 1]) r.push_back(static_cast<int>(t));
    return r;
}

} // namespace

Simplex identity_simplex(int dim, int cell) {
    Simplex s;
    s.cell_dim = dim;
    s.cell = cell;
    s.surj.resize(dim + 1);
    std::iota(s.surj.begin(), s.surj.end(), 0);
    return s;
}

Simplex degenerate_point(int vertex, int dim) {
    Simplex s;
    s.cell_dim = 0;
    s.cell = vertex;
    s.surj.assign(dim + 1, 0);
    return s;
}

int FiniteSimplicialSet::total_cells() const {
    int n = 0;
    for (const auto& level : faces) n += static_cast<int>(level.size());
    return n;
}

Simplex face_once(const FiniteSimplicialSet& x, const Simplex& s, int i) {
    int m = s.dim();
    if (m < 1 || i < 0 || i > m) throw SimplicialError("face index out of range");
    std::vector<int> g;
    g.reserve(m);
    for (int t = 0; t <= m; ++t)
        if (t != i) g.push_back(s.surj[t]);
    if (surjective_onto(g, s.cell_dim)) return Simplex{s.cell_dim, s.cell, std::move(g)};
    // Dropping one argument of a surjection misses exactly one value v.
    int v = -1;
    {
        std::vector<bool> hit(s.cell_dim + 1, false);
        for (int t : g) hit[t] = true;
        for (int u = 0; u <= s.cell_dim; ++u)
            if (!hit[u]) v = u;
    }
    std::vector<int> reduced;
    reduced.reserve(g.size());
    for (int t : g) reduced.push_back(t > v ? t - 1 : t);
    const Simplex& f = x.faces[s.cell_dim][s.cell][v];
    std::vector<int> composed;
    composed.reserve(reduced.size());
    for (int t : reduced) composed.push_back(f.surj[t]);
    return Simplex{f.cell_dim, f.cell, std::move(composed)};
}

Simplex degeneracy_once(const Simplex& s, int j) {
    int m = s.dim();
    if (j < 0 || j > m) throw SimplicialError("degeneracy index out of range");
    Simplex r = s;
    r.surj.clear();
    r.surj.reserve(m + 2);
    for (int t = 0; t <= m + 1; ++t) r.surj.push_back(s.surj[t <= j ? t : t - 1]);
    return r;
}

Simplex vertex_of(const FiniteSimplicialSet& x, const Simplex& s, int i) {
    Simplex cur = s;
    int target = i;
    while (cur.dim() > 0) {
        int m = cur.dim();
        if (target < m) {
            cur = face_once(x, cur, m);
        } else {
            cur = face_once(x, cur, 0);
            --target;
        }
    }
    return cur;
}

std::vector<Simplex> simplices_of_dim(const FiniteSimplicialSet& x, int m) {
    std::vector<Simplex> out;
    for (int k = 0; k <= std::min(m, x.dim()); ++k) {
        // Surjections [m] ->> [k]: pick the m-k positions (in 1..m) that repeat.
        std::vector<std::vector<int>> surjs;
        std::vector<bool> mask(m, false);
        std::fill(mask.end() - (m - k), mask.end(), true);
        do {
            std::vector<int> surj(m + 1, 0);
            for (int t = 1; t <= m; ++t) surj[t] = surj[t - 1] + (mask[t - 1] ? 0 : 1);
            surjs.push_back(std::move(surj));
        } while (std::next_permutation(mask.begin(), mask.end()));
        std::sort(surjs.begin(), surjs.end());
        for (int c = 0; c < x.cell_count(k); ++c)
            for (const auto& surj : surjs) out.push_back(Simplex{k, c, surj});
    }
    return out;
}

void FiniteSimplicialSet::validate() const {
    if (names.size() != faces.size()) throw SimplicialError("name table shape mismatch");
    for (int d = 0; d <= dim(); ++d)
        if (names[d].size() != faces[d].size()) throw SimplicialError("name table shape mismatch");
    if (basepoint && (*basepoint < 0 || *basepoint >= cell_count(0)))
        throw SimplicialError("basepoint is not a vertex");
    for (int d = 1; d <= dim(); ++d) {
        for (int c = 0; c < cell_count(d); ++c) {
            if (static_cast<int>(faces[d][c].size()) != d + 1)
                throw SimplicialError("cell needs d+1 faces");
            for (const auto& f : faces[d][c]) {
                if (f.dim() != d - 1) throw SimplicialError("face dimension mismatch");
                if (f.cell_dim < 0 || f.cell_dim > dim() || f.cell < 0 ||
                    f.cell >= cell_count(f.cell_dim))
                    throw SimplicialError("face refers to missing cell");
            }
        }
    }
    for (int d = 2; d <= dim(); ++d)
        for (int c = 0; c < cell_count(d); ++c) {
            Simplex s = identity_simplex(d, c);
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    Simplex lhs = face_once(*this, face_once(*this, s, j), i);
                    Simplex rhs = face_once(*this, face_once(*this, s, i), j - 1);
                    if (!(lhs == rhs))
                        throw SimplicialError("simplicial identity fails on cell " + names[d][c]);
                }
        }
}

Simplex SimplicialMap::apply(const Simplex& s) const {
    const Simplex& img = images[s.cell_dim][s.cell];
    std::vector<int> composed;
    composed.reserve(s.surj.size());
    for (int t : s.surj) composed.push_back(img.surj[t]);
    return Simplex{img.cell_dim, img.cell, std::move(composed)};
}

void SimplicialMap::validate() const {
    if (!from || !to) throw SimplicialError("simplicial map missing endpoints");
    for (int d = 0; d <= from->dim(); ++d) {
        if (static_cast<int>(images[d].size()) != from->cell_count(d))
            throw SimplicialError("simplicial map image table shape mismatch");
        for (int c = 0; c < from->cell_count(d); ++c) {
            if (images[d][c].dim() != d) throw SimplicialError("simplicial map must preserve dimension");
            for (int i = 0; i <= d && d >= 1; ++i) {
                Simplex lhs = apply(face_once(*from, identity_simplex(d, c), i));
                Simplex rhs = face_once(*to, images[d][c], i);
                if (!(lhs == rhs)) throw SimplicialError("simplicial map does not commute with faces");
            }
        }
    }
}

SimplicialMap identity_simplicial_map(const FiniteSimplicialSet& x) {
    SimplicialMap m;
    m.from = &x;
    m.to = &x;
    m.images.resize(x.dim() + 1);
    for (int d = 0; d <= x.dim(); ++d)
        for (int c = 0; c < x.cell_count(d); ++c) m.images[d].push_back(identity_simplex(d, c));
    return m;
}

FiniteSimplicialSet delta_complex(int n) {
    FiniteSimplicialSet x;
    x.faces.resize(n + 1);
    x.names.resize(n + 1);
    // Cells in dim d: (d+1)-subsets of {0..n} in lexicographic order.
    std::vector<std::vector<std::vector<int>>> subsets(n + 1);
    for (int d = 0; d <= n; ++d) {
        std::vector<std::vector<int>> all;
        std::vector<bool> m2(n + 1, false);
        std::fill(m2.end() - (d + 1), m2.end(), true);
        do {
            std::vector<int> sub;
            for (int i = 0; i <= n; ++i)
                if (m2[i]) sub.push_back(i);
            all.push_back(sub);
        } while (std::next_permutation(m2.begin(), m2.end()));
        std::sort(all.begin(), all.end());
        subsets[d] = all;
    }
    auto index_of = [&](int d, const std::vector<int>& sub) {
        auto it = std::lower_bound(subsets[d].begin(), subsets[d].end(), sub);
        return static_cast<int>(it - subsets[d].begin());
    };
    for (int d = 0; d <= n; ++d) {
        for (const auto& sub : subsets[d]) {
            std::string name;
            for (int v : sub) name += std::to_string(v);
            x.names[d].push_back(name);
            std::vector<Simplex> fs;
            if (d >= 1)
                for (int i = 0; i <= d; ++i) {
                    std::vector<int> sub2 = sub;
                    sub2.erase(sub2.begin() + i);
                    fs.push_back(identity_simplex(d - 1, index_of(d - 1, sub2)));
                }
            x.faces[d].push_back(std::move(fs));
        }
    }
    return x;
}

FiniteSimplicialSet point_complex() {
    FiniteSimplicialSet x;
    x.faces.resize(1);
    x.names.resize(1);
    x.faces[0].push_back({});
    x.names[0].push_back("pt");
    x.basepoint = 0;
    return x;
}

FiniteSimplicialSet circle_complex() {
    FiniteSimplicialSet x;
    x.faces.resize(2);
    x.names.resize(2);
    x.faces[0].push_back({});
    x.names[0].push_back("v");
    x.faces[1].push_back({identity_simplex(0, 0), identity_simplex(0, 0)});
    x.names[1].push_back("e");
    x.basepoint = 0;
    return x;
}

namespace {

std::string simplex_label(const FiniteSimplicialSet& x, const Simplex& s) {
    std::string out;
    auto reps = repeat_positions(s.surj);
    for (auto it = reps.rbegin(); it != reps.rend(); ++it) out += "s" + std::to_string(*it - 1) + "(";
    out += x.cell_name(s.cell_dim, s.cell);
    out += std::string(reps.size(), ')');
    return out;
}

} // namespace

FiniteSimplicialSet product_complex(const FiniteSimplicialSet& x, const FiniteSimplicialSet& y) {
    FiniteSimplicialSet p;
    int top = x.dim() + y.dim();
    p.faces.resize(top + 1);
    p.names.resize(top + 1);
    std::map<std::pair<Simplex, Simplex>, int> index;
    std::vector<std::vector<std::pair<Simplex, Simplex>>> cells(top + 1);

    for (int m = 0; m <= top; ++m) {
        for (const auto& sx : simplices_of_dim(x, m))
            for (const auto& sy : simplices_of_dim(y, m)) {
                auto rx = repeat_positions(sx.surj);
                auto ry = repeat_positions(sy.surj);
                std::vector<int> common;
                std::set_intersection(rx.begin(), rx.end(), ry.begin(), ry.end(),
                                      std::back_inserter(common));
                if (!common.empty()) continue; // jointly degenerate
                index[{sx, sy}] = static_cast<int>(cells[m].size());
                cells[m].push_back({sx, sy});
                p.names[m].push_back("(" + simplex_label(x, sx) + "," + simplex_label(y, sy) + ")");
            }
    }
    for (int m = 0; m <= top; ++m) {
        for (const auto& [sx, sy] : cells[m]) {
            std::vector<Simplex> fs;
            for (int i = 0; m >= 1 && i <= m; ++i) {
                Simplex fx = face_once(x, sx, i);
                Simplex fy = face_once(y, sy, i);
                // Strip the common degeneracies to reach the underlying cell.
                auto rx = repeat_positions(fx.surj);
                auto ry = repeat_positions(fy.surj);
                std::vector<int> common;
                std::set_intersection(rx.begin(), rx.end(), ry.begin(), ry.end(),
                                      std::back_inserter(common));
                int md = m - 1;
                std::vector<int> sigma(md + 1, 0);
                for (int t = 1; t <= md; ++t) {
                    bool collapse = std::binary_search(common.begin(), common.end(), t);
                    sigma[t] = sigma[t - 1] + (collapse ? 0 : 1);
                }
                int q = sigma.empty() ? 0 : sigma.back();
                auto strip = [&](const Simplex& s) {
                    std::vector<int> surj(q + 1, -1);
                    for (int t = 0; t <= md; ++t) surj[sigma[t]] = s.surj[t];
                    return Simplex{s.cell_dim, s.cell, std::move(surj)};
                };
                Simplex cx = strip(fx);
                Simplex cy = strip(fy);
                auto it = index.find({cx, cy});
                if (it == index.end()) throw RingError("product face lookup failed");
                fs.push_back(Simplex{q, it->second, sigma});
            }
            p.faces[m].push_back(std::move(fs));
        }
    }
    if (x.basepoint && y.basepoint) {
        auto it = index.find({identity_simplex(0, *x.basepoint), identity_simplex(0, *y.basepoint)});
        if (it != index.end()) p.basepoint = it->second;
    }
    // Drop empty top levels (the product of low-dimensional factors).
    while (p.faces.size() > 1 && p.faces.back().empty()) {
        p.faces.pop_back();
        p.names.pop_back();
    }
    return p;
}

PushoutResult pushout_complex(const FiniteSimplicialSet& x,
                              const std::vector<std::vector<bool>>& in_b,
                              const FiniteSimplicialSet& c, const SimplicialMap& f) {
    // f maps the subcomplex B (flagged cells of X) into C; images for cells
    // outside B are ignored.
    for (int d = 1; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i) {
            if (!in_b[d][i]) continue;
            for (const auto& face : x.faces[d][i])
                if (!in_b[face.cell_dim][face.cell])
                    throw RingError("pushout: B is not face-closed");
        }
    int top = std::max(x.dim(), c.dim());
    PushoutResult out;
    out.space.faces.resize(top + 1);
    out.space.names.resize(top + 1);
    std::vector<std::vector<int>> px(x.dim() + 1), pc(c.dim() + 1);
    for (int d = 0; d <= c.dim(); ++d)
        for (int i = 0; i < c.cell_count(d); ++i) {
            pc[d].push_back(static_cast<int>(out.space.faces[d].size()));
            out.space.faces[d].push_back({}); // filled below
            out.space.names[d].push_back(c.cell_name(d, i));
        }
    for (int d = 0; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i) {
            if (in_b[d][i]) {
                px[d].push_back(-1);
                continue;
            }
            px[d].push_back(static_cast<int>(out.space.faces[d].size()));
            out.space.faces[d].push_back({});
            out.space.names[d].push_back(x.cell_name(d, i));
        }
    auto reroute_x = [&](const Simplex& s) {
        if (in_b[s.cell_dim][s.cell]) {
            Simplex img = f.apply(s); // lands in C
            img.cell = pc[img.cell_dim][img.cell];
            return img;
        }
        Simplex r = s;
        r.cell = px[r.cell_dim][r.cell];
        return r;
    };
    for (int d = 1; d <= c.dim(); ++d)
        for (int i = 0; i < c.cell_count(d); ++i) {
            std::vector<Simplex> fs;
            for (const auto& face : c.faces[d][i]) {
                Simplex r = face;
                r.cell = pc[r.cell_dim][r.cell];
                fs.push_back(r);
            }
            out.space.faces[d][pc[d][i]] = std::move(fs);
        }
    for (int d = 1; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i) {
            if (in_b[d][i]) continue;
            std::vector<Simplex> fs;
            for (const auto& face : x.faces[d][i]) fs.push_back(reroute_x(face));
            out.space.faces[d][px[d][i]] = std::move(fs);
        }
    out.from_x.from = &x;
    out.from_x.to = &out.space;
    out.from_x.images.resize(x.dim() + 1);
    for (int d = 0; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i)
            out.from_x.images[d].push_back(reroute_x(identity_simplex(d, i)));
    out.from_c.from = &c;
    out.from_c.to = &out.space;
    out.from_c.images.resize(c.dim() + 1);
    for (int d = 0; d <= c.dim(); ++d)
        for (int i = 0; i < c.cell_count(d); ++i) {
            Simplex s = identity_simplex(d, i);
            s.cell = pc[d][i];
            out.from_c.images[d].push_back(s);
        }
    if (c.basepoint)
        out.space.basepoint = pc[0][*c.basepoint];
    else if (x.basepoint && px[0][*x.basepoint] >= 0)
        out.space.basepoint = px[0][*x.basepoint];
    while (out.space.faces.size() > 1 && out.space.faces.back().empty()) {
        out.space.faces.pop_back();
        out.space.names.pop_back();
    }
    return out;
}

SubcomplexResult subcomplex(const FiniteSimplicialSet& x,
                            const std::vector<std::vector<bool>>& flags) {
    SubcomplexResult out;
    std::vector<std::vector<int>> idx(x.dim() + 1);
    int top = 0;
    for (int d = 0; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i)
            if (flags[d][i]) top = std::max(top, d);
    out.space.faces.resize(top + 1);
    out.space.names.resize(top + 1);
    for (int d = 0; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i) {
            if (!flags[d][i]) {
                idx[d].push_back(-1);
                continue;
            }
            idx[d].push_back(static_cast<int>(out.space.faces[d].size()));
            out.space.faces[d].push_back({});
            out.space.names[d].push_back(x.cell_name(d, i));
        }
    for (int d = 1; d <= x.dim(); ++d)
        for (int i = 0; i < x.cell_count(d); ++i) {
            if (!flags[d][i]) continue;
            std::vector<Simplex> fs;
            for (const auto& face : x.faces[d][i]) {
                if (!flags[face.cell_dim][face.cell])
                    throw RingError("subcomplex flags are not face-closed");
                Simplex r = face;
                r.cell = idx[face.cell_dim][face.cell];
                fs.push_back(r);
            }
            out.space.faces[d][idx[d][i]] = std::move(fs);
        }
    if (x.basepoint && flags[0][*x.basepoint]) out.space.basepoint = idx[0][*x.basepoint];
    out.inclusion.from = nullptr;
    out.inclusion.to = nullptr;
    out.inclusion.images.resize(top + 1);
    for (int d = 0; d <= top; ++d)
        for (int i = 0; i < x.cell_count(d); ++i)
            if (flags[d][i]) out.inclusion.images[d].push_back(identity_simplex(d, i));
    return out;
}

FiniteSimplicialSet smash_complex(const FiniteSimplicialSet& x, const FiniteSimplicialSet& y) {
    if (!x.basepoint || !y.basepoint) throw RingError("smash needs pointed complexes");
    FiniteSimplicialSet prod = product_complex(x, y);
    // Wedge cells: product cells whose label pair degenerates a basepoint on
    // either side.  Recover the pair structure by reconstructing it the same
    // way product_complex enumerated cells.
    std::vector<std::vector<bool>> in_b(prod.dim() + 1);
    {
        std::map<std::pair<Simplex, Simplex>, std::pair<int, int>> index;
        int top = x.dim() + y.dim();
        std::vector<int> counts(top + 1, 0);
        for (int m = 0; m <= top; ++m) {
            for (const auto& sx : simplices_of_dim(x, m))
                for (const auto& sy : simplices_of_dim(y, m)) {
                    auto rx = repeat_positions(sx.surj);
                    auto ry = repeat_positions(sy.surj);
                    std::vector<int> common;
                    std::set_intersection(rx.begin(), rx.end(), ry.begin(), ry.end(),
                                          std::back_inserter(common));
                    if (!common.empty()) continue;
                    if (m <= prod.dim()) {
                        bool bx = sx.cell_dim == 0 && sx.cell == *x.basepoint;
                        bool by = sy.cell_dim == 0 && sy.cell == *y.basepoint;
                        if (static_cast<int>(in_b[m].size()) <= counts[m]) in_b[m].resize(counts[m] + 1);
                        in_b[m][counts[m]] = bx || by;
                    }
                    ++counts[m];
                }
        }
        for (int m = 0; m <= prod.dim(); ++m) in_b[m].resize(prod.cell_count(m), false);
    }
    FiniteSimplicialSet pt = point_complex();
    SimplicialMap collapse;
    collapse.from = &prod;
    collapse.to = &pt;
    collapse.images.resize(prod.dim() + 1);
    for (int d = 0; d <= prod.dim(); ++d)
        for (int i = 0; i < prod.cell_count(d); ++i)
            collapse.images[d].push_back(degenerate_point(0, d));
    PushoutResult pr = pushout_complex(prod, in_b, pt, collapse);
    return pr.space;
}

FiniteSimplicialSet sphere_complex(int n) {
    if (n < 0) throw RingError("sphere dimension must be nonnegative");
    if (n == 0) {
        FiniteSimplicialSet x;
        x.faces.resize(1);
        x.names.resize(1);
        x.faces[0].push_back({});
        x.faces[0].push_back({});
        x.names[0].push_back("base");
        x.names[0].push_back("free");
        x.basepoint = 0;
        return x;
    }
    FiniteSimplicialSet s = circle_complex();
    for (int i = 1; i < n; ++i) s = smash_complex(s, circle_complex());
    return s;
}

Subdivision subdivide(const FiniteSimplicialSet& x) {
    if (x.dim() > 1) throw RingError("subdivision implemented for complexes of dimension <= 1");
    Subdivision out;
    FiniteSimplicialSet& s = out.space;
    int nv = x.cell_count(0);
    int ne = x.dim() >= 1 ? x.cell_count(1) : 0;
    s.faces.resize(ne > 0 ? 2 : 1);
    s.names.resize(ne > 0 ? 2 : 1);
    for (int v = 0; v < nv; ++v) {
        s.faces[0].push_back({});
        s.names[0].push_back(x.cell_name(0, v));
    }
    for (int e = 0; e < ne; ++e) {
        s.faces[0].push_back({});
        s.names[0].push_back("b(" + x.cell_name(1, e) + ")");
    }
    for (int e = 0; e < ne; ++e) {
        const Simplex va = x.faces[1][e][1]; // d1 = source vertex
        const Simplex vb = x.faces[1][e][0]; // d0 = target vertex
        int bary = nv + e;
        s.faces[1].push_back({identity_simplex(0, bary), identity_simplex(0, va.cell)});
        s.names[1].push_back(x.cell_name(1, e) + ":lo");
        s.faces[1].push_back({identity_simplex(0, bary), identity_simplex(0, vb.cell)});
        s.names[1].push_back(x.cell_name(1, e) + ":hi");
    }
    s.basepoint = x.basepoint;

    out.last_vertex.from = &out.space;
    out.last_vertex.to = &x;
    out.last_vertex.images.resize(s.dim() + 1);
    for (int v = 0; v < nv; ++v) out.last_vertex.images[0].push_back(identity_simplex(0, v));
    for (int e = 0; e < ne; ++e)
        out.last_vertex.images[0].push_back(identity_simplex(0, x.faces[1][e][0].cell));
    for (int e = 0; e < ne; ++e) {
        // lo edge: from source vertex to barycenter, image = the edge itself.
        out.last_vertex.images[1].push_back(identity_simplex(1, e));
        // hi edge: from target vertex to barycenter, image degenerates.
        out.last_vertex.images[1].push_back(degenerate_point(x.faces[1][e][0].cell, 1));
    }
    return out;
}

SubdivisionTower subdivision_tower(const FiniteSimplicialSet& x, int depth) {
    SubdivisionTower t;
    t.levels.push_back(x);
    for (int k = 0; k < depth; ++k) {
        Subdivision sd = subdivide(t.levels.back());
        t.levels.push_back(std::move(sd.space));
        t.maps.push_back(std::move(sd.last_vertex));
    }
    // Re-point the map endpoints at the stored levels.
    for (int k = 0; k < depth; ++k) {
        t.maps[k].from = &t.levels[k + 1];
        t.maps[k].to = &t.levels[k];
    }
    return t;
}

std::vector<int> path_components(const FiniteSimplicialSet& x) {
    int nv = x.cell_count(0);
    std::vector<int> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto join = [&](int a, int b) { parent[find(a)] = find(b); };
    for (int d = 1; d <= x.dim(); ++d)
        for (int c = 0; c < x.cell_count(d); ++c) {
            Simplex s = identity_simplex(d, c);
            Simplex v0 = vertex_of(x, s, 0);
            for (int i = 1; i <= d; ++i) join(v0.cell, vertex_of(x, s, i).cell);
        }
    std::vector<int> comp(nv, -1);
    int next = 0;
    for (int v = 0; v < nv; ++v) {
        int r = find(v);
        if (comp[r] < 0) comp[r] = next++;
        comp[v] = comp[r];
    }
    return comp;
}

FiniteSimplicialSet build_complex(const std::string& kind) {
    if (kind == "point" || kind == "delta0") return point_complex();
    if (kind == "circle" || kind == "S1" || kind == "s1") return circle_complex();
    if (kind.size() == 6 && kind.rfind("delta", 0) == 0) {
        int n = kind[5] - '0';
        if (n >= 0 && n <= 6) return delta_complex(n);
    }
    if ((kind.size() == 2) && (kind[0] == 'S' || kind[0] == 's')) {
        int n = kind[1] - '0';
        if (n >= 0 && n <= 4) return sphere_complex(n);
    }
    throw RingError("unknown complex kind: " + kind);
}

} // namespace kkalg
