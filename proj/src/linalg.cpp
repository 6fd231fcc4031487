#include "kkalg/linalg.hpp"

#include <algorithm>

namespace kkalg {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rat(1);
    return m;
}

Mat mat_mul(const BaseRing& ring, const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw RingError("matrix product shape mismatch");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.at(i, k).is_zero()) continue;
            for (int j = 0; j < y.cols; ++j) {
                if (y.at(k, j).is_zero()) continue;
                r.at(i, j) = ring.add(r.at(i, j), ring.mul(x.at(i, k), y.at(k, j)));
            }
        }
    return r;
}

Mat mat_add(const BaseRing& ring, const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw RingError("matrix sum shape mismatch");
    Mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = ring.add(x.a[i], y.a[i]);
    return r;
}

Mat mat_sub(const BaseRing& ring, const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw RingError("matrix diff shape mismatch");
    Mat r(x.rows, x.cols);
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = ring.sub(x.a[i], y.a[i]);
    return r;
}

Mat transpose(const Mat& x) {
    Mat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

Rref rref(const BaseRing& field, Mat m) {
    if (!field.is_field()) throw RingError("rref needs a field");
    Rref out;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i)
            if (!field.normalize(m.at(i, col)).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
        Rat inv = field.inv(m.at(row, col));
        for (int j = 0; j < m.cols; ++j) m.at(row, j) = field.mul(inv, m.at(row, j));
        for (int i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            Rat f = field.normalize(m.at(i, col));
            if (f.is_zero()) continue;
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = field.sub(m.at(i, j), field.mul(f, m.at(row, j)));
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.r = std::move(m);
    return out;
}

namespace {

long long int_of(const Rat& x) {
    if (x.den != 1) throw RingError("integer matrix routine fed a non-integer");
    return x.num;
}

// Row operations tracked in u so that u * original = current.
struct RowOps {
    Mat m;
    Mat u;

    void swap_rows(int i, int j) {
        for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void negate_row(int i) {
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = Rat(checked_neg(int_of(m.at(i, c))));
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = Rat(checked_neg(int_of(u.at(i, c))));
    }
    void add_multiple(int dst, int src, long long f) {
        if (f == 0) return;
        for (int c = 0; c < m.cols; ++c)
            m.at(dst, c) =
                Rat(checked_add(int_of(m.at(dst, c)), checked_mul(f, int_of(m.at(src, c)))));
        for (int c = 0; c < u.cols; ++c)
            u.at(dst, c) =
                Rat(checked_add(int_of(u.at(dst, c)), checked_mul(f, int_of(u.at(src, c)))));
    }
};

} // namespace

Hnf hnf(const Mat& m) {
    RowOps ops{m, Mat::identity(m.rows)};
    int row = 0;
    Hnf out;
    for (int col = 0; col < m.cols && row < ops.m.rows; ++col) {
        // Euclidean reduction in this column below `row`.
        while (true) {
            int piv = -1;
            long long best = 0;
            for (int i = row; i < ops.m.rows; ++i) {
                long long v = int_of(ops.m.at(i, col));
                if (v == 0) continue;
                long long av = v < 0 ? -v : v;
                if (piv < 0 || av < best) {
                    piv = i;
                    best = av;
                }
            }
            if (piv < 0) break;
            ops.swap_rows(piv, row);
            if (int_of(ops.m.at(row, col)) < 0) ops.negate_row(row);
            bool clean = true;
            long long p = int_of(ops.m.at(row, col));
            for (int i = row + 1; i < ops.m.rows; ++i) {
                long long v = int_of(ops.m.at(i, col));
                if (v == 0) continue;
                long long q = v / p;
                // Round toward -inf so remainders are nonnegative and < p.
                if (v % p < 0) q -= 1;
                ops.add_multiple(i, row, checked_neg(q));
                if (int_of(ops.m.at(i, col)) != 0) clean = false;
            }
            if (clean) break;
        }
        if (int_of(ops.m.at(row, col)) != 0) {
            // Reduce entries above the pivot into [0, pivot).
            long long p = int_of(ops.m.at(row, col));
            for (int i = 0; i < row; ++i) {
                long long v = int_of(ops.m.at(i, col));
                long long q = v / p;
                if (v % p < 0) q -= 1;
                ops.add_multiple(i, row, checked_neg(q));
            }
            out.pivots.push_back(col);
            ++row;
        }
    }
    out.h = std::move(ops.m);
    out.u = std::move(ops.u);
    return out;
}

Snf snf(const Mat& m) {
    Mat d = m;
    Mat u = Mat::identity(m.rows);
    Mat v = Mat::identity(m.cols);

    auto row_add = [&](int dst, int src, long long f) {
        if (f == 0) return;
        for (int c = 0; c < d.cols; ++c)
            d.at(dst, c) = Rat(checked_add(int_of(d.at(dst, c)), checked_mul(f, int_of(d.at(src, c)))));
        for (int c = 0; c < u.cols; ++c)
            u.at(dst, c) = Rat(checked_add(int_of(u.at(dst, c)), checked_mul(f, int_of(u.at(src, c)))));
    };
    auto col_add = [&](int dst, int src, long long f) {
        if (f == 0) return;
        for (int r = 0; r < d.rows; ++r)
            d.at(r, dst) = Rat(checked_add(int_of(d.at(r, dst)), checked_mul(f, int_of(d.at(r, src)))));
        for (int r = 0; r < v.rows; ++r)
            v.at(r, dst) = Rat(checked_add(int_of(v.at(r, dst)), checked_mul(f, int_of(v.at(r, src)))));
    };
    auto row_swap = [&](int i, int j) {
        for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    };
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    };
    auto row_neg = [&](int i) {
        for (int c = 0; c < d.cols; ++c) d.at(i, c) = Rat(checked_neg(int_of(d.at(i, c))));
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = Rat(checked_neg(int_of(u.at(i, c))));
    };

    int n = std::min(d.rows, d.cols);
    for (int k = 0; k < n; ++k) {
        while (true) {
            // Find the nonzero entry of least magnitude in the trailing block.
            int pi = -1, pj = -1;
            long long best = 0;
            for (int i = k; i < d.rows; ++i)
                for (int j = k; j < d.cols; ++j) {
                    long long x = int_of(d.at(i, j));
                    if (x == 0) continue;
                    long long ax = x < 0 ? -x : x;
                    if (pi < 0 || ax < best) {
                        pi = i;
                        pj = j;
                        best = ax;
                    }
                }
            if (pi < 0) break;
            row_swap(pi, k);
            col_swap(pj, k);
            if (int_of(d.at(k, k)) < 0) row_neg(k);
            long long p = int_of(d.at(k, k));
            bool dirty = false;
            for (int i = k + 1; i < d.rows; ++i) {
                long long x = int_of(d.at(i, k));
                if (x == 0) continue;
                long long q = x / p;
                if (x % p < 0) q -= 1;
                row_add(i, k, checked_neg(q));
                if (int_of(d.at(i, k)) != 0) dirty = true;
            }
            for (int j = k + 1; j < d.cols; ++j) {
                long long x = int_of(d.at(k, j));
                if (x == 0) continue;
                long long q = x / p;
                if (x % p < 0) q -= 1;
                col_add(j, k, checked_neg(q));
                if (int_of(d.at(k, j)) != 0) dirty = true;
            }
            if (dirty) continue;
            // Divisibility pass: the pivot must divide every later entry.
            bool fixed = false;
            for (int i = k + 1; i < d.rows && !fixed; ++i)
                for (int j = k + 1; j < d.cols && !fixed; ++j)
                    if (int_of(d.at(i, j)) % p != 0) {
                        row_add(k, i, 1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
    }
    Snf out;
    for (int k = 0; k < n; ++k) {
        long long x = int_of(d.at(k, k));
        if (x != 0) out.invariant_factors.push_back(x);
    }
    out.d = std::move(d);
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

namespace {

std::optional<std::vector<Rat>> solve_field(const BaseRing& field, const Mat& m,
                                            const std::vector<Rat>& b) {
    Mat aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    Rref rr = rref(field, aug);
    std::vector<Rat> x(m.cols, Rat(0));
    for (size_t r = 0; r < rr.pivots.size(); ++r) {
        if (rr.pivots[r] == m.cols) return std::nullopt; // pivot in the constant column
        x[rr.pivots[r]] = rr.r.at(static_cast<int>(r), m.cols);
    }
    return x;
}

std::optional<std::vector<Rat>> solve_integers(const Mat& m, const std::vector<Rat>& b) {
    Snf s = snf(m);
    // m = u^-1 d v^-1, so m x = b iff d y = u b with x = v y.
    std::vector<Rat> ub(m.rows, Rat(0));
    for (int i = 0; i < m.rows; ++i) {
        long long acc = 0;
        for (int j = 0; j < m.rows; ++j)
            acc = checked_add(acc, checked_mul(int_of(s.u.at(i, j)), int_of(b[j])));
        ub[i] = Rat(acc);
    }
    int n = std::min(m.rows, m.cols);
    std::vector<Rat> y(m.cols, Rat(0));
    for (int i = 0; i < m.rows; ++i) {
        long long di = i < n ? int_of(s.d.at(i, i)) : 0;
        long long bi = int_of(ub[i]);
        if (di == 0) {
            if (bi != 0) return std::nullopt;
        } else {
            if (bi % di != 0) return std::nullopt;
            y[i] = Rat(bi / di);
        }
    }
    std::vector<Rat> x(m.cols, Rat(0));
    for (int i = 0; i < m.cols; ++i) {
        long long acc = 0;
        for (int j = 0; j < m.cols; ++j)
            acc = checked_add(acc, checked_mul(int_of(s.v.at(i, j)), int_of(y[j])));
        x[i] = Rat(acc);
    }
    return x;
}

Mat lift_mod(const BaseRing& ring, const Mat& m) {
    // Append mod * identity columns so Z-solutions mod out the modulus.
    Mat lifted(m.rows, m.cols + m.rows);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) lifted.at(i, j) = ring.normalize(m.at(i, j));
        lifted.at(i, m.cols + i) = Rat(ring.mod);
    }
    return lifted;
}

} // namespace

std::optional<std::vector<Rat>> solve(const BaseRing& ring, const Mat& m,
                                      const std::vector<Rat>& b) {
    if (static_cast<int>(b.size()) != m.rows) throw RingError("solve: shape mismatch");
    switch (ring.kind) {
        case RingKind::rationals:
            return solve_field(ring, m, b);
        case RingKind::integers:
            return solve_integers(m, b);
        case RingKind::mod: {
            Mat lifted = lift_mod(ring, m);
            std::vector<Rat> bb(b.size());
            for (size_t i = 0; i < b.size(); ++i) bb[i] = ring.normalize(b[i]);
            auto x = solve_integers(lifted, bb);
            if (!x) return std::nullopt;
            std::vector<Rat> out(m.cols);
            for (int j = 0; j < m.cols; ++j) out[j] = ring.normalize((*x)[j]);
            return out;
        }
    }
    throw RingError("solve: unknown ring");
}

std::vector<std::vector<Rat>> kernel_gens(const BaseRing& ring, const Mat& m) {
    std::vector<std::vector<Rat>> out;
    if (ring.kind == RingKind::rationals) {
        Rref rr = rref(ring, m);
        std::vector<bool> is_pivot(m.cols, false);
        for (int p : rr.pivots) is_pivot[p] = true;
        for (int j = 0; j < m.cols; ++j) {
            if (is_pivot[j]) continue;
            std::vector<Rat> v(m.cols, Rat(0));
            v[j] = Rat(1);
            for (size_t r = 0; r < rr.pivots.size(); ++r)
                v[rr.pivots[r]] = ring.neg(rr.r.at(static_cast<int>(r), j));
            out.push_back(std::move(v));
        }
        return out;
    }
    if (ring.kind == RingKind::integers) {
        Snf s = snf(m);
        int n = std::min(m.rows, m.cols);
        for (int j = 0; j < m.cols; ++j) {
            bool free_col = j >= n || int_of(s.d.at(j, j)) == 0;
            if (!free_col) continue;
            std::vector<Rat> v(m.cols);
            for (int i = 0; i < m.cols; ++i) v[i] = s.v.at(i, j);
            out.push_back(std::move(v));
        }
        return out;
    }
    // Z/m: x = v y with d y = 0 mod m; each y_j ranges over multiples of
    // m / gcd(d_j, m), and columns past the rank are free.
    Mat mm(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) mm.at(i, j) = ring.normalize(m.at(i, j));
    Snf s = snf(mm);
    int n = std::min(m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j) {
        long long dj = j < n ? int_of(s.d.at(j, j)) : 0;
        long long step = dj == 0 ? 1 : ring.mod / gcd_ll(dj, ring.mod);
        if (step == ring.mod && dj != 0 && gcd_ll(dj, ring.mod) == 1) continue; // only y_j = 0
        std::vector<Rat> v(m.cols);
        for (int i = 0; i < m.cols; ++i)
            v[i] = ring.normalize(Rat(checked_mul(int_of(s.v.at(i, j)), step)));
        bool zero = true;
        for (const auto& x : v) zero = zero && x.is_zero();
        if (!zero) out.push_back(std::move(v));
    }
    return out;
}

Mat columns(const std::vector<std::vector<Rat>>& vs, int dim) {
    Mat m(dim, static_cast<int>(vs.size()));
    for (size_t j = 0; j < vs.size(); ++j) {
        if (static_cast<int>(vs[j].size()) != dim) throw RingError("columns: shape mismatch");
        for (int i = 0; i < dim; ++i) m.at(i, static_cast<int>(j)) = vs[j][i];
    }
    return m;
}

bool span_contains(const BaseRing& ring, const std::vector<std::vector<Rat>>& gens,
                   const std::vector<Rat>& v) {
    bool zero = true;
    for (const auto& x : v)
        if (!ring.normalize(x).is_zero()) zero = false;
    if (zero) return true;
    if (gens.empty()) return false;
    Mat m = columns(gens, static_cast<int>(v.size()));
    return solve(ring, m, v).has_value();
}

bool spans_equal(const BaseRing& ring, const std::vector<std::vector<Rat>>& a,
                 const std::vector<std::vector<Rat>>& b, int dim) {
    (void)dim;
    for (const auto& v : a)
        if (!span_contains(ring, b, v)) return false;
    for (const auto& v : b)
        if (!span_contains(ring, a, v)) return false;
    return true;
}

} // namespace kkalg
