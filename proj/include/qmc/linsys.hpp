#pragma once

#include <optional>

#include "qmc/poly.hpp"

namespace qmc {

using KMatrix = std::vector<std::vector<KElem>>;  // rectangular, scalar entries
using ZMatrix = std::vector<std::vector<MultiPoly>>;  // rectangular, entries in K[Z]

/// Deterministic nullspace vector of a scalar matrix, or nullopt when the
/// kernel is trivial.  The first pivot-free column gets 1, later free columns
/// get 0, pivot variables follow by back substitution.
std::optional<std::vector<KElem>> nullspace_k(const FieldTower& t, const KMatrix& M);

struct PolyNullspace {
    std::vector<MultiPoly> v;  // entries in K[Z], not all zero, M v = 0 identically
    int max_degz = 0;          // measured from v, exact
};

/// Nullspace vector with polynomial entries via fraction-free Gauss-Jordan
/// elimination (Bareiss cross-multiplication with exact division by the
/// previous pivot).  Pivot rows are chosen preferring the lowest Z-degree.
/// Requires cols > rows.
PolyNullspace nullspace_polyz(const FieldTower& t, const ZMatrix& M);

/// Affine-linear expression c0 + sum_i lin[i] * param_i over K.
struct AffineExpr {
    KElem c0{0};
    std::vector<KElem> lin;

    explicit AffineExpr(size_t nparams = 0) : lin(nparams, KElem{0}) {}
    static AffineExpr constant(size_t nparams, KElem c) {
        AffineExpr e(nparams);
        e.c0 = c;
        return e;
    }
    static AffineExpr param(size_t nparams, size_t i) {
        AffineExpr e(nparams);
        e.lin[i] = KElem{1};
        return e;
    }
    bool is_zero() const {
        if (c0.v != 0) return false;
        for (KElem x : lin)
            if (x.v != 0) return false;
        return true;
    }
    bool operator==(const AffineExpr& o) const { return c0 == o.c0 && lin == o.lin; }
};

AffineExpr ae_add(const FieldTower& t, const AffineExpr& a, const AffineExpr& b);
AffineExpr ae_sub(const FieldTower& t, const AffineExpr& a, const AffineExpr& b);
AffineExpr ae_scale(const FieldTower& t, const AffineExpr& a, KElem c);
KElem ae_eval(const FieldTower& t, const AffineExpr& a, const std::vector<KElem>& params);

/// Solution set of a system of affine constraints (each expression = 0) on
/// the parameters: a particular point plus kernel directions, or empty.
struct AffineSolution {
    bool consistent = false;
    std::vector<KElem> point;                   // one solution, free params set to 0
    std::vector<std::vector<KElem>> directions;  // kernel basis
};

AffineSolution solve_affine_constraints(const FieldTower& t, const std::vector<AffineExpr>& constraints,
                                        size_t nparams);

}  // namespace qmc
