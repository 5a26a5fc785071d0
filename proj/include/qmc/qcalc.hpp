#pragma once

#include <map>

#include "qmc/poly.hpp"

namespace qmc {

/// [n]_Q = 1 + Q + ... + Q^{n-1} = (Q^n - 1)/(Q - 1).
KElem q_bracket(const FieldTower& t, uint64_t n);

/// Falling product [k]_Q [k-1]_Q ... [k-t+1]_Q (empty product = 1).
KElem q_falling(const FieldTower& t, uint64_t k, uint64_t steps);

/// Cached Q-brackets, Q-factorials and Gaussian binomials up to n_max.
/// Binomials come from the factorial quotient and are cross-checked against
/// the Pascal-type recurrence at construction.
class BracketTable {
   public:
    BracketTable(const FieldTower& t, uint32_t n_max);

    uint32_t n_max() const { return n_max_; }
    KElem bracket(int64_t n) const;
    /// [n]_Q!; zero for negative n by convention.
    KElem factorial(int64_t n) const;
    /// Gaussian binomial; zero when k < 0 or k > n.
    KElem binom(int64_t n, int64_t k) const;
    /// Product of per-coordinate factorials.
    KElem factorial_vec(const ExpVec& a) const;
    /// Product of per-coordinate Gaussian binomials.
    KElem binom_vec(const ExpVec& a, const ExpVec& b) const;

   private:
    const FieldTower* t_;
    uint32_t n_max_;
    std::vector<KElem> fact_;
    std::vector<KElem> binom_;  // (n_max+1) x (n_max+1), row-major
};

/// Q-derivative, computed coefficientwise: X^k maps to [k]_Q X^{k-1}.
UniPoly q_derive_uni(const FieldTower& t, const UniPoly& f);
UniPoly q_derive_uni_iter(const FieldTower& t, const UniPoly& f, uint32_t steps);

/// Iterated per-variable Q-derivative of order a.
MultiPoly q_derive_multi(const FieldTower& t, const MultiPoly& f, const ExpVec& a);

/// prod_i (X_i - c_i)(X_i - Q c_i) ... (X_i - Q^{a_i - 1} c_i).
MultiPoly q_pochhammer(const FieldTower& t, const std::vector<KElem>& center, const ExpVec& a);

/// Taylor data of f at the point Q^b = (Q^{b_1}, ..., Q^{b_m}):
/// coeffs[a] = D^a f(Q^b), keyed by packed exponent, zero entries omitted.
std::map<uint64_t, KElem> q_taylor_coeffs(const FieldTower& t, const MultiPoly& f, const ExpVec& b);

/// Reassembles sum_a coeffs[a]/[a]_Q! * (X - Q^b)^(a); inverse of the above.
MultiPoly q_taylor_reconstruct(const FieldTower& t, uint32_t m, const std::map<uint64_t, KElem>& coeffs,
                               const ExpVec& b);

/// Change-of-basis matrix at a point a of (K^x)^m between the evaluation
/// blocks [f(Q^g a)] and the derivative blocks [D^g f(a)], indexed by
/// {g : |g| < s} in graded-lex order.  Direction nu maps evaluations to
/// derivatives; xi is its inverse.  nu * xi = I is checked at construction.
class NuXiMatrix {
   public:
    enum class Dir { nu, xi };

    uint32_t m() const { return m_; }
    uint32_t s() const { return s_; }
    Dir dir() const { return dir_; }
    uint32_t size() const { return n_; }
    KElem at(uint32_t row, uint32_t col) const { return e_[size_t(row) * n_ + col]; }

    std::vector<KElem> apply(const FieldTower& t, const std::vector<KElem>& block) const;

    friend NuXiMatrix nu_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s);
    friend NuXiMatrix xi_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s);

   private:
    uint32_t m_ = 0, s_ = 0, n_ = 0;
    Dir dir_ = Dir::nu;
    std::vector<KElem> e_;
};

NuXiMatrix nu_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s);
NuXiMatrix xi_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s);

}  // namespace qmc
