#ifndef SKEWLAB_LINALG_HPP
#define SKEWLAB_LINALG_HPP

// Exact dense linear algebra over a field, used to decide module
// similarity, compute fixed subspaces of automorphisms and invert algebra
// elements. Matrices are row-major vectors of FieldElem.

#include <optional>
#include <vector>

#include "field.hpp"

namespace skewlab {

using FVec = std::vector<FieldElem>;
using FMat = std::vector<FVec>;

// prime subfield F_p, or Q, as a Field
inline FieldPtr base_field(const FieldPtr& f) {
    return f->characteristic() != 0 ? Field::prime(f->characteristic()) : Field::rationals();
}

// lift base-field coordinates back into the extension
inline FieldElem lift_from_base(const FieldPtr& f, const FVec& coords) {
    if (f->characteristic() != 0) {
        std::vector<int64_t> digits;
        digits.reserve(coords.size());
        for (const auto& c : coords) digits.push_back(c.digits()[0]);
        return f->from_coords_fin(digits);
    }
    std::vector<Rational> co;
    co.reserve(coords.size());
    for (const auto& c : coords) co.push_back(c.coords()[0]);
    return f->from_coords_q(co);
}

// column t = base coordinates of phi(basis_t)
inline FMat auto_matrix(const FieldPtr& f, const FieldAuto& phi) {
    FieldPtr b = base_field(f);
    int64_t k = f->basis_size();
    FMat m(static_cast<size_t>(k), FVec(static_cast<size_t>(k), b->zero()));
    FieldElem g = f->generator();
    FieldElem basis = f->one();
    for (int64_t t = 0; t < k; ++t) {
        FVec col = phi(basis).base_coords(b);
        for (int64_t r = 0; r < k; ++r) m[static_cast<size_t>(r)][static_cast<size_t>(t)] = col[static_cast<size_t>(r)];
        basis = basis * g;
    }
    return m;
}

// Gaussian elimination: returns a basis of {x : A x = 0}
inline std::vector<FVec> kernel_basis(const FieldPtr& scalars, FMat a) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    std::vector<int64_t> pivot_of_col(cols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && a[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        FieldElem inv = a[rank][c].inverse();
        for (size_t j = c; j < cols; ++j) a[rank][j] = a[rank][j] * inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c].is_zero()) continue;
            FieldElem factor = a[r][c];
            for (size_t j = c; j < cols; ++j) a[r][j] = a[r][j] - factor * a[rank][j];
        }
        pivot_of_col[c] = static_cast<int64_t>(rank);
        ++rank;
    }
    std::vector<FVec> basis;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        FVec v(cols, scalars->zero());
        v[c] = scalars->one();
        for (size_t j = 0; j < cols; ++j) {
            if (pivot_of_col[j] < 0) continue;
            v[j] = -a[static_cast<size_t>(pivot_of_col[j])][c];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// one solution of A x = b, if any
inline std::optional<FVec> solve_linear(const FieldPtr& scalars, FMat a, FVec b) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    for (size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
    std::vector<int64_t> pivot_of_col(cols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && a[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        FieldElem inv = a[rank][c].inverse();
        for (size_t j = c; j <= cols; ++j) a[rank][j] = a[rank][j] * inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c].is_zero()) continue;
            FieldElem factor = a[r][c];
            for (size_t j = c; j <= cols; ++j) a[r][j] = a[r][j] - factor * a[rank][j];
        }
        pivot_of_col[c] = static_cast<int64_t>(rank);
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (!a[r][cols].is_zero()) return std::nullopt;
    FVec x(cols, scalars->zero());
    for (size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] >= 0) x[c] = a[static_cast<size_t>(pivot_of_col[c])][cols];
    return x;
}

// basis (as field elements of f) of the subspace fixed by every listed
// automorphism
inline std::vector<FieldElem> fixed_subspace(const FieldPtr& f, const std::vector<FieldAuto>& autos) {
    FieldPtr b = base_field(f);
    int64_t k = f->basis_size();
    FMat stacked;
    for (const auto& phi : autos) {
        FMat m = auto_matrix(f, phi);
        for (int64_t r = 0; r < k; ++r) {
            FVec row = m[static_cast<size_t>(r)];
            row[static_cast<size_t>(r)] = row[static_cast<size_t>(r)] - b->one();
            stacked.push_back(std::move(row));
        }
    }
    if (stacked.empty()) stacked.assign(1, FVec(static_cast<size_t>(k), b->zero()));
    std::vector<FieldElem> out;
    for (const auto& v : kernel_basis(b, stacked)) out.push_back(lift_from_base(f, v));
    return out;
}

}  // namespace skewlab

#endif
