#pragma once

#include <map>

#include "qmc/codes.hpp"
#include "qmc/linsys.hpp"

namespace qmc {

/// Decoder parameters for a given window size r.  d is chosen by the exact
/// counting inequality (number of unknowns must exceed the number of linear
/// constraints); t_min is the exact agreement threshold from the zero-counting
/// bound.  t_stated is the weaker threshold implied by the fractional radius
/// formulas and is carried for reporting only, as is the closed-form
/// paper_d in the multivariate case.
struct DecodeConfig {
    uint32_t r = 1;
    uint32_t d = 1;
    uint64_t t_min = 0;
    uint64_t t_stated = 0;
    int64_t paper_d = -1;
    uint64_t enumeration_cap = 65536;
};

DecodeConfig choose_config_uni(const FieldTower& t, uint64_t n, uint32_t s, uint32_t r, uint32_t k);
DecodeConfig choose_config_multi(const FieldTower& t, uint32_t m, uint64_t a_size, uint32_t s, uint32_t r,
                                 uint32_t k);

// ---------------------------------------------------------------------------
// univariate decoder
// ---------------------------------------------------------------------------

/// Interpolation object P~(X) + sum_j P_j(X) Y_j with coefficients in K.
struct InterpPoly {
    MultiPoly p_tilde{1};
    std::vector<MultiPoly> p;  // slot j holds the coefficient of Y_j

    bool is_zero() const;
};

/// The operator taking P~ + sum P_j Y_j to D P~ + sum (D P_j Y_j + P_j(QX) Y_{j+1}),
/// with Y_s = 0.
InterpPoly delta_uni(const FieldTower& t, const InterpPoly& P, uint32_t s);

/// P(x, block): substitutes the point and the received block for (X, Y).
KElem interp_eval_uni(const FieldTower& t, const InterpPoly& P, KElem x, const std::vector<KElem>& block);

/// P^{[f]} = P~ + sum_j P_j * D^j f.
MultiPoly project_uni(const FieldTower& t, const InterpPoly& P, const MultiPoly& f);

InterpPoly interpolate_uni(const FieldTower& t, const Codeword& w, const CodeParams& p,
                           const DecodeConfig& cfg);

/// Affine space of candidate messages {base + sum c_i basis_i}.
struct AffineSpace {
    bool empty = true;
    MultiPoly base{1};
    std::vector<MultiPoly> basis;

    size_t dim() const { return basis.size(); }
};

AffineSpace solve_uni(const FieldTower& t, const InterpPoly& P, const CodeParams& p, const DecodeConfig& cfg);

bool affine_space_contains(const FieldTower& t, const AffineSpace& space, const MultiPoly& f);

// ---------------------------------------------------------------------------
// multivariate decoder
// ---------------------------------------------------------------------------

/// Polynomial in K[Z][X]: X-monomial keys with Z-polynomial coefficients.
struct ZXPoly {
    uint32_t mx = 1;
    uint32_t mz = 1;
    std::vector<std::pair<uint64_t, MultiPoly>> terms;  // sorted by X key, nonzero Z coefficients

    bool is_zero() const { return terms.empty(); }
    int deg_x() const;
    int deg_z() const;
    const MultiPoly* coeff(uint64_t xkey) const;
};

ZXPoly zx_zero(uint32_t mx, uint32_t mz);
ZXPoly zx_add(const FieldTower& t, const ZXPoly& a, const ZXPoly& b);
ZXPoly zx_mul(const FieldTower& t, const ZXPoly& a, const ZXPoly& b);
/// X-derivative of order e (coefficientwise falling-bracket scaling).
ZXPoly zx_derive(const FieldTower& t, const ZXPoly& a, const ExpVec& e);
/// X_i -> Q^{b_i} X_i.
ZXPoly zx_shift_x(const FieldTower& t, const ZXPoly& a, const ExpVec& b);
/// Substitutes a point of K^m for X; the result lives in K[Z].
MultiPoly zx_eval_x(const FieldTower& t, const ZXPoly& a, const std::vector<KElem>& point);
/// D^e a evaluated at the point, in one pass.
MultiPoly zx_derive_eval(const FieldTower& t, const ZXPoly& a, const ExpVec& e,
                         const std::vector<KElem>& point);

/// Interpolation object P~(X) + sum_j P_j(X) sum_{|g|=j} Y_g Z^g with
/// coefficients in K[Z].
struct InterpPolyZ {
    uint32_t m = 1;
    ZXPoly p_tilde;
    std::vector<ZXPoly> p;
    int measured_degz = 0;

    bool is_zero() const;
};

/// General Y-linear element C~(X,Z) + sum_g C_g(X,Z) Y_g; closed under the
/// derivative-compatible operators below, unlike the restricted interpolation
/// shape.
struct YLinearZ {
    uint32_t m = 1;
    ZXPoly tilde;
    std::map<uint64_t, ZXPoly> yterms;  // packed Y-index -> coefficient
};

YLinearZ to_ylinear(const InterpPolyZ& P);

/// The operator determined by (Delta^(a) P)^{[f]} = D^a (P^{[f]}); indices of
/// weight >= s are dropped.
YLinearZ delta_multi(const FieldTower& t, const YLinearZ& P, const ExpVec& a, uint32_t s,
                     const BracketTable& br);

/// Substitutes a grid point and a received block; the result is in K[Z] and
/// must vanish identically for interpolation constraints.
MultiPoly ylinear_eval(const FieldTower& t, const YLinearZ& P, const std::vector<KElem>& point,
                       const std::vector<KElem>& block, uint32_t s);

/// P^{[f]} in K[Z][X].
ZXPoly project_multi(const FieldTower& t, const InterpPolyZ& P, const MultiPoly& f);

InterpPolyZ interpolate_multi(const FieldTower& t, const Codeword& w, const CodeParams& p,
                              const DecodeConfig& cfg);

/// Instrumentation of one multivariate solve: dual-path agreement and the
/// grid sizes used by the hitting-set verification.
struct SolveStats {
    bool paths_agree = true;
    uint32_t max_hitting_grid = 0;
};

AffineSpace solve_multi(const FieldTower& t, const InterpPolyZ& P, const CodeParams& p,
                        const DecodeConfig& cfg, SolveStats* stats = nullptr);

// ---------------------------------------------------------------------------
// end-to-end list decoding
// ---------------------------------------------------------------------------

struct DecodeResult {
    DecodeConfig config;
    AffineSpace space;
    bool enumerated = false;
    std::vector<std::pair<MultiPoly, uint64_t>> candidates;  // (message, agreement), filtered by t_min
    int measured_degz = -1;     // multivariate only
    bool degz_within_ms = true;  // measured_degz < m*s, reported for the record
    bool paths_agree = true;     // multivariate dual-path comparison
};

/// Runs choose_config -> interpolate -> solve on a received word in the
/// derivative-block domain, then enumerates and filters the affine space when
/// it is small enough.
DecodeResult list_decode(const FieldTower& t, const Codeword& w, const CodeParams& p, uint32_t r,
                         uint64_t enumeration_cap = 65536);

}  // namespace qmc
