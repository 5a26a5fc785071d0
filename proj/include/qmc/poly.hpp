#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmc/gf.hpp"
#include "qmc/util.hpp"

namespace qmc {

/// Exponent vector in N^m.
using ExpVec = std::vector<uint32_t>;

/// Degree of the zero polynomial (stands in for -infinity).
constexpr int kNegInfDeg = INT_MIN;

constexpr uint32_t kMaxArity = 4;
constexpr uint32_t kMaxExp = 4095;  // 12-bit packed exponent fields

/// Packs an exponent vector into a uint64 key whose natural integer order is
/// exactly graded-lex (ascending weight, ties by lex on the coordinates).
uint64_t pack_exp(const ExpVec& e);
ExpVec unpack_exp(uint64_t key, uint32_t m);
uint32_t exp_weight(const ExpVec& e);
inline uint32_t key_weight(uint64_t key) { return uint32_t(key >> 48); }
bool exp_leq(const ExpVec& a, const ExpVec& b);  // componentwise a <= b

/// All exponent vectors with |e| < s, in graded-lex order.
std::vector<ExpVec> exps_below(uint32_t m, uint32_t s);
/// All exponent vectors with |e| = w, in lex order.
std::vector<ExpVec> exps_of_weight(uint32_t m, uint32_t w);
/// Number of exponent vectors with |e| < s, i.e. C(m+s-1, m).
uint64_t count_below(uint32_t m, uint32_t s);

/// Bijection {e : |e| < s} -> [0, C(m+s-1, m)) in graded-lex order.
uint64_t graded_lex_index(const ExpVec& e, uint32_t s);
ExpVec graded_lex_unindex(uint64_t idx, uint32_t m, uint32_t s);

/// Sparse m-variate polynomial over K.  Terms are kept sorted by packed
/// graded-lex key with no explicit zero coefficients; the zero polynomial is
/// the empty term list.
class MultiPoly {
   public:
    using Term = std::pair<uint64_t, KElem>;

    explicit MultiPoly(uint32_t m = 1);
    static MultiPoly constant(uint32_t m, KElem c);
    static MultiPoly monomial(uint32_t m, const ExpVec& e, KElem c);
    /// Builds from unsorted (possibly repeated) terms, combining duplicates.
    static MultiPoly from_terms(uint32_t m, std::vector<Term> terms, const FieldTower& t);
    /// Builds from strictly ascending keys with nonzero coefficients.
    static MultiPoly from_sorted_terms(uint32_t m, std::vector<Term> terms);

    uint32_t arity() const { return m_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    int total_degree() const { return terms_.empty() ? kNegInfDeg : int(key_weight(terms_.back().first)); }
    size_t term_count() const { return terms_.size(); }
    KElem coeff_key(uint64_t key) const;
    KElem coeff(const ExpVec& e) const { return coeff_key(pack_exp(e)); }
    /// Leading term under graded-lex.
    Term leading_term() const;

    bool operator==(const MultiPoly& o) const { return m_ == o.m_ && terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    friend MultiPoly add(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
    friend MultiPoly sub(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
    friend MultiPoly neg(const FieldTower& t, const MultiPoly& f);
    friend MultiPoly mul(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
    friend MultiPoly scale(const FieldTower& t, const MultiPoly& f, KElem c);
    friend MultiPoly mul_monomial(const FieldTower& t, const MultiPoly& f, const ExpVec& e, KElem c);

   private:
    uint32_t m_;
    std::vector<Term> terms_;
};

MultiPoly add(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
MultiPoly sub(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
MultiPoly neg(const FieldTower& t, const MultiPoly& f);
MultiPoly mul(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);
MultiPoly scale(const FieldTower& t, const MultiPoly& f, KElem c);
MultiPoly mul_monomial(const FieldTower& t, const MultiPoly& f, const ExpVec& e, KElem c);

/// Substitution homomorphism at a point of K^m.
KElem eval(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& point);

/// f(c_1 X_1, ..., c_m X_m); every c_i must be nonzero.
MultiPoly scale_vars(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& c);

/// Uniformly random coefficients on all exponents with |e| < k.
MultiPoly random_poly(const FieldTower& t, uint32_t m, uint32_t k, Rng& rng);

/// Exact division: returns f/g when g divides f exactly, nullopt otherwise.
std::optional<MultiPoly> exact_divide(const FieldTower& t, const MultiPoly& f, const MultiPoly& g);

/// Text form `m=<m>; <coeff>@<e1,..,em>; ...` with terms in graded-lex order.
std::string poly_to_string(const MultiPoly& f);
MultiPoly poly_parse(const std::string& s);

/// Dense univariate polynomial over K, low degree first, no trailing zeros.
class UniPoly {
   public:
    UniPoly() = default;
    explicit UniPoly(std::vector<KElem> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(KElem c) { return UniPoly(std::vector<KElem>{c}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? kNegInfDeg : int(c_.size()) - 1; }
    KElem coeff(size_t i) const { return i < c_.size() ? c_[i] : KElem{0}; }
    const std::vector<KElem>& coeffs() const { return c_; }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }

    friend UniPoly add(const FieldTower& t, const UniPoly& f, const UniPoly& g);
    friend UniPoly sub(const FieldTower& t, const UniPoly& f, const UniPoly& g);
    friend UniPoly mul(const FieldTower& t, const UniPoly& f, const UniPoly& g);
    friend UniPoly scale(const FieldTower& t, const UniPoly& f, KElem s);

   private:
    void trim() {
        while (!c_.empty() && c_.back().v == 0) c_.pop_back();
    }
    std::vector<KElem> c_;
};

UniPoly add(const FieldTower& t, const UniPoly& f, const UniPoly& g);
UniPoly sub(const FieldTower& t, const UniPoly& f, const UniPoly& g);
UniPoly mul(const FieldTower& t, const UniPoly& f, const UniPoly& g);
UniPoly scale(const FieldTower& t, const UniPoly& f, KElem s);
KElem eval(const FieldTower& t, const UniPoly& f, KElem x);

UniPoly to_unipoly(const MultiPoly& f);
MultiPoly to_multipoly(const UniPoly& f);

}  // namespace qmc
