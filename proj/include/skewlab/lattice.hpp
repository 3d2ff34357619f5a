#ifndef SKEWLAB_LATTICE_HPP
#define SKEWLAB_LATTICE_HPP

// Exact integer lattices: Hermite normal form over cpp_int, membership
// tests, lattice equality and integer kernels. Row convention: a lattice is
// spanned by the rows of its basis matrix.

#include <utility>
#include <vector>

#include "errors.hpp"
#include "numbers.hpp"

namespace skewlab {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

inline Int floordiv(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// row Hermite normal form: echelon, positive pivots, entries above each
// pivot reduced into [0, pivot); zero rows dropped. The result is the
// canonical basis of the row span.
inline IntMat hnf_rows(IntMat a) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // clear column c below r by gcd steps
        while (true) {
            size_t best = rows;
            for (size_t i = r; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                if (best == rows || abs(a[i][c]) < abs(a[best][c])) best = i;
            }
            if (best == rows) break;
            std::swap(a[r], a[best]);
            bool cleared = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] == 0) continue;
                Int q = floordiv(a[i][c], a[r][c]);
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) a[r][j] = -a[r][j];
        for (size_t i = 0; i < r; ++i) {
            Int q = floordiv(a[i][c], a[r][c]);
            if (q == 0) continue;
            for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

class IntLattice {
  public:
    IntLattice() = default;

    static IntLattice from_generators(size_t dim, const IntMat& gens) {
        IntLattice l;
        l.dim_ = dim;
        IntMat rows;
        for (const auto& g : gens) {
            if (g.size() != dim) throw ValidationError("lattice generator has wrong dimension");
            rows.push_back(g);
        }
        l.basis_ = hnf_rows(std::move(rows));
        return l;
    }

    size_t dim() const { return dim_; }
    size_t rank() const { return basis_.size(); }
    const IntMat& basis() const { return basis_; }

    bool contains(IntVec v) const {
        if (v.size() != dim_) throw ValidationError("vector has wrong dimension");
        for (const auto& row : basis_) {
            size_t c = 0;
            while (c < dim_ && row[c] == 0) ++c;
            if (c == dim_) continue;
            if (v[c] % row[c] != 0) return false;
            Int q = v[c] / row[c];
            if (q != 0)
                for (size_t j = 0; j < dim_; ++j) v[j] -= q * row[j];
        }
        for (const auto& x : v)
            if (x != 0) return false;
        return true;
    }

    bool contains_all(const IntMat& vs) const {
        for (const auto& v : vs)
            if (!contains(v)) return false;
        return true;
    }

    bool operator==(const IntLattice& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }
    bool operator!=(const IntLattice& o) const { return !(*this == o); }

  private:
    size_t dim_ = 0;
    IntMat basis_;
};

// basis (as rows) of {x in Z^m : A x = 0}, A given as rows of length m
inline IntMat integer_kernel(const IntMat& a_rows) {
    const size_t n = a_rows.size();
    const size_t m = n == 0 ? 0 : a_rows[0].size();
    // work on [A^T | I_m]; row operations preserve the relation
    // row_left = (combination coefficients applied to columns of A)
    IntMat w(m, IntVec(n + m, Int(0)));
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) w[i][j] = a_rows[j][i];
        w[i][n + i] = 1;
    }
    // eliminate the left block only
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; ++c) {
        while (true) {
            size_t best = m;
            for (size_t i = r; i < m; ++i) {
                if (w[i][c] == 0) continue;
                if (best == m || abs(w[i][c]) < abs(w[best][c])) best = i;
            }
            if (best == m) break;
            std::swap(w[r], w[best]);
            bool cleared = true;
            for (size_t i = r + 1; i < m; ++i) {
                if (w[i][c] == 0) continue;
                Int q = floordiv(w[i][c], w[r][c]);
                for (size_t j = 0; j < n + m; ++j) w[i][j] -= q * w[r][j];
                if (w[i][c] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (w[r][c] != 0) ++r;
    }
    IntMat kernel;
    for (size_t i = r; i < m; ++i) {
        bool left_zero = true;
        for (size_t j = 0; j < n; ++j)
            if (w[i][j] != 0) {
                left_zero = false;
                break;
            }
        if (!left_zero) continue;
        kernel.emplace_back(w[i].begin() + n, w[i].end());
    }
    return hnf_rows(std::move(kernel));
}

}  // namespace skewlab

#endif
