#pragma once

#include "kkalg/base.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kkalg {

// A (possibly degenerate) simplex in Eilenberg-Zilber normal form: a
// nondegenerate cell together with the monotone surjection [dim] ->> [cell_dim]
// that degenerates it.  The decomposition is unique, so equality is structural.
struct Simplex {
    int cell_dim = 0;
    int cell = 0;
    std::vector<int> surj; // size dim()+1, monotone onto 0..cell_dim

    int dim() const { return static_cast<int>(surj.size()) - 1; }
    bool degenerate() const { return dim() != cell_dim; }

    bool operator==(const Simplex& o) const {
        return cell_dim == o.cell_dim && cell == o.cell && surj == o.surj;
    }
    bool operator<(const Simplex& o) const {
        if (cell_dim != o.cell_dim) return cell_dim < o.cell_dim;
        if (cell != o.cell) return cell < o.cell;
        return o.surj.size() != surj.size() ? surj.size() < o.surj.size() : surj < o.surj;
    }
};

Simplex identity_simplex(int dim, int cell);
Simplex degenerate_point(int vertex, int dim);

// Finite simplicial set presented by nondegenerate cells and face incidence.
struct FiniteSimplicialSet {
    // faces[d][i] lists the d+1 faces of the i-th nondegenerate d-cell.
    std::vector<std::vector<std::vector<Simplex>>> faces;
    std::vector<std::vector<std::string>> names;
    std::optional<int> basepoint; // index of a vertex

    int dim() const { return static_cast<int>(faces.size()) - 1; }
    int cell_count(int d) const {
        return d >= 0 && d <= dim() ? static_cast<int>(faces[d].size()) : 0;
    }
    int total_cells() const;
    const std::string& cell_name(int d, int i) const { return names[d][i]; }

    void validate() const; // simplicial identities on every cell
};

// d_i of a simplex, resolved through the stored face incidence.
Simplex face_once(const FiniteSimplicialSet& x, const Simplex& s, int i);
// s_j of a simplex.
Simplex degeneracy_once(const Simplex& s, int j);
// Vertex i of a simplex (as a Simplex of dimension 0).
Simplex vertex_of(const FiniteSimplicialSet& x, const Simplex& s, int i);

// All simplices of dimension m (cells plus their degeneracies).
std::vector<Simplex> simplices_of_dim(const FiniteSimplicialSet& x, int m);

struct SimplicialMap {
    const FiniteSimplicialSet* from = nullptr;
    const FiniteSimplicialSet* to = nullptr;
    // images[d][i]: image of the i-th d-cell, a Simplex of `to` of dimension d.
    std::vector<std::vector<Simplex>> images;

    Simplex apply(const Simplex& s) const;
    void validate() const; // commutes with faces
};

SimplicialMap identity_simplicial_map(const FiniteSimplicialSet& x);

// Standard complexes.
FiniteSimplicialSet delta_complex(int n);
FiniteSimplicialSet point_complex();
FiniteSimplicialSet circle_complex(); // Delta^1 / boundary: one vertex, one edge
FiniteSimplicialSet product_complex(const FiniteSimplicialSet& x, const FiniteSimplicialSet& y);

// Pushout X cup_B C: B is the face-closed set of X-cells `in_b`, glued along f.
// Also returns the two canonical maps X -> pushout and C -> pushout.  The maps
// point at this struct's own `space`; keep the struct in place while using them.
struct PushoutResult {
    FiniteSimplicialSet space;
    SimplicialMap from_x;
    SimplicialMap from_c;
};
PushoutResult pushout_complex(const FiniteSimplicialSet& x,
                              const std::vector<std::vector<bool>>& in_b,
                              const FiniteSimplicialSet& c, const SimplicialMap& f);

// Face-closed set of cells as a standalone complex with its inclusion map.
struct SubcomplexResult {
    FiniteSimplicialSet space;
    SimplicialMap inclusion; // space -> ambient; endpoints set by the caller
};
SubcomplexResult subcomplex(const FiniteSimplicialSet& x,
                            const std::vector<std::vector<bool>>& flags);

// Smash product of pointed complexes (quotient of the product by the wedge).
FiniteSimplicialSet smash_complex(const FiniteSimplicialSet& x, const FiniteSimplicialSet& y);
// Smash power of the circle; n = 1 gives circle_complex().
FiniteSimplicialSet sphere_complex(int n);

// Barycentric subdivision with its last-vertex map (dimension <= 1 only).
struct Subdivision {
    FiniteSimplicialSet space;
    SimplicialMap last_vertex; // sd X -> X
};
Subdivision subdivide(const FiniteSimplicialSet& x);

struct SubdivisionTower {
    std::vector<FiniteSimplicialSet> levels; // levels[0] = X
    std::vector<SimplicialMap> maps;         // maps[k]: levels[k+1] -> levels[k]
};
SubdivisionTower subdivision_tower(const FiniteSimplicialSet& x, int depth);

// Union-find partition of vertices induced by cell connectivity.
std::vector<int> path_components(const FiniteSimplicialSet& x); // vertex -> component id

// Named constructor selecting a standard complex by kind.
FiniteSimplicialSet build_complex(const std::string& kind);

} // namespace kkalg
