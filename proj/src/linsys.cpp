#include "qmc/linsys.hpp"

#include <algorithm>

namespace qmc {

std::optional<std::vector<KElem>> nullspace_k(const FieldTower& t, const KMatrix& M) {
    if (M.empty()) throw std::invalid_argument("nullspace_k: empty matrix");
    size_t rows = M.size(), cols = M[0].size();
    for (const auto& r : M)
        if (r.size() != cols) throw std::invalid_argument("nullspace_k: ragged matrix");

    KMatrix A = M;
    std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && A[piv][col].v == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[rank], A[piv]);
        KElem inv = t.inv(A[rank][col]);
        for (size_t c = col; c < cols; ++c) A[rank][c] = t.mul(A[rank][c], inv);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][col].v == 0) continue;
            KElem f = A[r][col];
            for (size_t c = col; c < cols; ++c) A[r][c] = t.sub(A[r][c], t.mul(f, A[rank][c]));
        }
        pivots.push_back({rank, col});
        ++rank;
    }
    if (rank == cols) return std::nullopt;

    std::vector<bool> is_pivot(cols, false);
    for (auto [r, c] : pivots) is_pivot[c] = true;
    size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;

    std::vector<KElem> x(cols, t.zero());
    x[free_col] = t.one();
    for (auto [r, c] : pivots) x[c] = t.neg(A[r][free_col]);
    return x;
}

PolyNullspace nullspace_polyz(const FieldTower& t, const ZMatrix& M) {
    if (M.empty()) throw std::invalid_argument("nullspace_polyz: empty matrix");
    size_t rows = M.size(), cols = M[0].size();
    uint32_t mz = M[0].empty() ? 1 : M[0][0].arity();
    for (const auto& r : M) {
        if (r.size() != cols) throw std::invalid_argument("nullspace_polyz: ragged matrix");
        for (const auto& e : r)
            if (e.arity() != mz) throw std::invalid_argument("nullspace_polyz: mixed arities");
    }
    if (cols <= rows) throw std::invalid_argument("nullspace_polyz: needs cols > rows");

    ZMatrix A = M;
    MultiPoly one = MultiPoly::constant(mz, t.one());
    MultiPoly prev = one;
    std::vector<bool> used(rows, false);
    std::vector<std::pair<size_t, size_t>> pivots;  // (row, col)

    auto div_exact = [&](const MultiPoly& num, const MultiPoly& den) {
        if (den == one) return num;
        auto q = exact_divide(t, num, den);
        if (!q) throw std::logic_error("nullspace_polyz: inexact division");
        return *q;
    };

    for (size_t col = 0; col < cols && pivots.size() < rows; ++col) {
        // candidate with the lowest Z-degree, first row on ties
        size_t best = rows;
        int best_deg = 0;
        for (size_t r = 0; r < rows; ++r) {
            if (used[r] || A[r][col].is_zero()) continue;
            int d = A[r][col].total_degree();
            if (best == rows || d < best_deg) {
                best = r;
                best_deg = d;
            }
        }
        if (best == rows) continue;  // free column
        const size_t pr = best;
        MultiPoly piv = A[pr][col];
        for (size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            MultiPoly coef = A[r][col];
            for (size_t c = 0; c < cols; ++c) {
                MultiPoly num = coef.is_zero() ? mul(t, piv, A[r][c])
                                               : sub(t, mul(t, piv, A[r][c]), mul(t, coef, A[pr][c]));
                A[r][c] = div_exact(num, prev);
            }
        }
        used[pr] = true;
        pivots.push_back({pr, col});
        prev = piv;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto [r, c] : pivots) is_pivot[c] = true;
    size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;

    PolyNullspace out;
    out.v.assign(cols, MultiPoly(mz));
    out.v[free_col] = prev;  // the final pivot; 1 when there were no pivots
    for (auto [r, c] : pivots) out.v[c] = neg(t, A[r][free_col]);
    for (const auto& e : out.v)
        if (!e.is_zero()) out.max_degz = std::max(out.max_degz, e.total_degree());
    return out;
}

AffineExpr ae_add(const FieldTower& t, const AffineExpr& a, const AffineExpr& b) {
    if (a.lin.size() != b.lin.size()) throw std::invalid_argument("ae_add: size mismatch");
    AffineExpr r(a.lin.size());
    r.c0 = t.add(a.c0, b.c0);
    for (size_t i = 0; i < a.lin.size(); ++i) r.lin[i] = t.add(a.lin[i], b.lin[i]);
    return r;
}

AffineExpr ae_sub(const FieldTower& t, const AffineExpr& a, const AffineExpr& b) {
    if (a.lin.size() != b.lin.size()) throw std::invalid_argument("ae_sub: size mismatch");
    AffineExpr r(a.lin.size());
    r.c0 = t.sub(a.c0, b.c0);
    for (size_t i = 0; i < a.lin.size(); ++i) r.lin[i] = t.sub(a.lin[i], b.lin[i]);
    return r;
}

AffineExpr ae_scale(const FieldTower& t, const AffineExpr& a, KElem c) {
    AffineExpr r(a.lin.size());
    if (c.v == 0) return r;
    r.c0 = t.mul(a.c0, c);
    for (size_t i = 0; i < a.lin.size(); ++i) r.lin[i] = t.mul(a.lin[i], c);
    return r;
}

KElem ae_eval(const FieldTower& t, const AffineExpr& a, const std::vector<KElem>& params) {
    if (params.size() != a.lin.size()) throw std::invalid_argument("ae_eval: size mismatch");
    KElem acc = a.c0;
    for (size_t i = 0; i < params.size(); ++i)
        if (a.lin[i].v != 0 && params[i].v != 0) acc = t.add(acc, t.mul(a.lin[i], params[i]));
    return acc;
}

AffineSolution solve_affine_constraints(const FieldTower& t, const std::vector<AffineExpr>& constraints,
                                        size_t nparams) {
    // augmented matrix [lin | rhs], rhs = -c0
    size_t rows = constraints.size();
    std::vector<std::vector<KElem>> A(rows, std::vector<KElem>(nparams + 1, t.zero()));
    for (size_t r = 0; r < rows; ++r) {
        if (constraints[r].lin.size() != nparams)
            throw std::invalid_argument("solve_affine_constraints: size mismatch");
        for (size_t c = 0; c < nparams; ++c) A[r][c] = constraints[r].lin[c];
        A[r][nparams] = t.neg(constraints[r].c0);
    }

    std::vector<std::pair<size_t, size_t>> pivots;
    size_t rank = 0;
    for (size_t col = 0; col < nparams && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && A[piv][col].v == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[rank], A[piv]);
        KElem inv = t.inv(A[rank][col]);
        for (size_t c = col; c <= nparams; ++c) A[rank][c] = t.mul(A[rank][c], inv);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][col].v == 0) continue;
            KElem f = A[r][col];
            for (size_t c = col; c <= nparams; ++c) A[r][c] = t.sub(A[r][c], t.mul(f, A[rank][c]));
        }
        pivots.push_back({rank, col});
        ++rank;
    }

    AffineSolution sol;
    for (size_t r = rank; r < rows; ++r) {
        if (A[r][nparams].v != 0) return sol;  // 0 = nonzero: inconsistent
    }
    sol.consistent = true;
    sol.point.assign(nparams, t.zero());
    std::vector<bool> is_pivot(nparams, false);
    for (auto [r, c] : pivots) {
        sol.point[c] = A[r][nparams];
        is_pivot[c] = true;
    }
    for (size_t free_col = 0; free_col < nparams; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<KElem> dir(nparams, t.zero());
        dir[free_col] = t.one();
        for (auto [r, c] : pivots) dir[c] = t.neg(A[r][free_col]);
        sol.directions.push_back(std::move(dir));
    }
    return sol;
}

}  // namespace qmc
