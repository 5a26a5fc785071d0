#pragma once

#include "qmc/qcalc.hpp"

namespace qmc {

/// Least k such that some D^g f(a) with |g| = k is nonzero.  Throws
/// std::domain_error for the zero polynomial (whose multiplicity is -inf by
/// convention).
uint32_t q_multiplicity(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& a);

/// Per-point Q-multiplicities of f over the grid A^m, together with the
/// zero-counting bounds they must satisfy.
struct MultiplicityReport {
    uint32_t m = 0;
    uint32_t s = 1;
    std::vector<FqElem> A;
    std::vector<uint32_t> per_point;  // row-major over A^m
    uint64_t total = 0;
    uint64_t count_ge_s = 0;
    uint64_t total_bound = 0;      // deg(f) * |A|^(m-1)
    uint64_t count_bound = 0;      // floor(total_bound / s)
    bool total_ok = false;         // total <= total_bound
    bool count_ok = false;         // count_ge_s <= count_bound

    std::string to_csv() const;
};

MultiplicityReport grid_multiplicity_report(const FieldTower& t, const MultiPoly& f,
                                            const std::vector<FqElem>& A, uint32_t m, uint32_t s);

/// Generators of the ideal of functions vanishing with Q-multiplicity >= s on
/// the grid A^m: one generator per exponent g with |g| = s, of the form
/// prod_i prod_{u < g_i} prod_{a in A} (X_i - Q^u a).
std::vector<MultiPoly> grobner_generators(const FieldTower& t, const std::vector<FqElem>& A, uint32_t m,
                                          uint32_t s);

/// Derivative/restriction multiplicity inequalities at one instance.
struct MultiplicityChecks {
    bool derivative_ok = false;   // mu(D^g f, a) >= mu(f, a) - |g|
    bool restriction_ok = false;  // mu over the last variable dominates
    std::string detail;           // set when a check fails
};

MultiplicityChecks lemma_multiplicity_checks(const FieldTower& t, const MultiPoly& f,
                                             const std::vector<KElem>& a, const ExpVec& g);

/// Row-major enumeration of the grid A^m (index varies fastest in the last
/// coordinate), shared by codes and reports.
std::vector<std::vector<KElem>> grid_points(const FieldTower& t, const std::vector<FqElem>& A, uint32_t m);

}  // namespace qmc
