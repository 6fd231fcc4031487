#pragma once

#include "kkalg/base.hpp"

#include <optional>
#include <vector>

namespace kkalg {

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

Mat mat_mul(const BaseRing& ring, const Mat& x, const Mat& y);
Mat mat_add(const BaseRing& ring, const Mat& x, const Mat& y);
Mat mat_sub(const BaseRing& ring, const Mat& x, const Mat& y);
Mat transpose(const Mat& x);

// Reduced row echelon form over a field (Q or Z/p).
struct Rref {
    Mat r;
    std::vector<int> pivots; // column of the pivot in each nonzero row
};
Rref rref(const BaseRing& field, Mat m);

// Hermite normal form: u * m = h with u unimodular, h upper staircase.
struct Hnf {
    Mat h;
    Mat u;
    std::vector<int> pivots;
};
Hnf hnf(const Mat& m);

// Smith normal form: u * m * v = d, d diagonal with d1 | d2 | ...
struct Snf {
    Mat d;
    Mat u;
    Mat v;
    std::vector<long long> invariant_factors; // nonzero diagonal entries
};
Snf snf(const Mat& m);

// Solve m * x = b over the ring (Z uses HNF/SNF; Z/m lifts to Z).
std::optional<std::vector<Rat>> solve(const BaseRing& ring, const Mat& m,
                                      const std::vector<Rat>& b);

// Generating set for { x : m * x = 0 } over the ring.  Over a field this is
// a basis; over Z and Z/m it is a finite generating set of the solution module.
std::vector<std::vector<Rat>> kernel_gens(const BaseRing& ring, const Mat& m);

// Span utilities: vectors are columns.
Mat columns(const std::vector<std::vector<Rat>>& vs, int dim);
bool span_contains(const BaseRing& ring, const std::vector<std::vector<Rat>>& gens,
                   const std::vector<Rat>& v);
bool spans_equal(const BaseRing& ring, const std::vector<std::vector<Rat>>& a,
                 const std::vector<std::vector<Rat>>& b, int dim);

} // namespace kkalg
