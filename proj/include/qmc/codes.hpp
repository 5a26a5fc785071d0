#pragma once

#include "qmc/qmult.hpp"

namespace qmc {

/// Parameters of the multiplicity-s, degree-k code over the grid A^m.
/// Construction checks the whole parameter regime, including distinctness of
/// the correlated evaluation points Q^g a.
struct CodeParams {
    uint32_t m = 1;
    uint32_t s = 1;
    uint32_t k = 1;
    std::vector<FqElem> A;
    uint64_t n_blocks = 0;    // |A|^m
    uint32_t block_size = 0;  // C(m+s-1, m)

    bool operator==(const CodeParams& o) const {
        return m == o.m && s == o.s && k == o.k && A == o.A;
    }
};

CodeParams make_code_params(const FieldTower& t, uint32_t m, uint32_t s, uint32_t k,
                            const std::vector<FqElem>& A);

/// Vector in (K^block_size)^{|A|^m}: blocks in row-major grid order, each
/// block indexed over {g : |g| < s} in graded-lex order.  Also used for
/// arbitrary received words.
struct Codeword {
    std::vector<std::vector<KElem>> blocks;

    bool operator==(const Codeword& o) const { return blocks == o.blocks; }
    bool operator!=(const Codeword& o) const { return !(*this == o); }
};

/// Derivative-block encoding: block at a is [D^g f(a)] over |g| < s.
Codeword encode_qmult(const FieldTower& t, const MultiPoly& f, const CodeParams& p);

/// Plain folded evaluation encoding: block at a is [f(Q^g a)] over |g| < s.
Codeword encode_frm(const FieldTower& t, const MultiPoly& f, const CodeParams& p);

enum class BasisDir {
    eval_to_deriv,  // applies nu(a) per block: FRM word -> Qmult word
    deriv_to_eval,  // applies xi(a) per block: Qmult word -> FRM word
};

Codeword basis_change(const FieldTower& t, const Codeword& w, const CodeParams& p, BasisDir dir);

/// K-dimension of the code: lattice points with |a| < k inside the triangle
/// set of the grid.  The closed-form count C(m+k-1, m) is reported separately
/// since it silently assumes the triangle set swallows the whole simplex.
uint64_t dimension(const CodeParams& p);
uint64_t dimension_closed_form(const CodeParams& p);
Rational rate(const CodeParams& p);
Rational distance_lb(const CodeParams& p);

/// Blockwise Hamming distance in [0, 1].
Rational block_distance(const Codeword& u, const Codeword& v);

/// Number of blocks where u and v agree.
uint64_t agreement_count(const Codeword& u, const Codeword& v);

void check_shape(const Codeword& w, const CodeParams& p);

}  // namespace qmc
