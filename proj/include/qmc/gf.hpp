#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qmc/util.hpp"

namespace qmc {

/// Element of the base field F_q, encoded as an integer in [0, q): base-p
/// digits are the coefficients in the polynomial basis of F_q over F_p.
struct FqElem {
    uint32_t v = 0;
    friend bool operator==(FqElem a, FqElem b) { return a.v == b.v; }
    friend bool operator!=(FqElem a, FqElem b) { return a.v != b.v; }
    friend bool operator<(FqElem a, FqElem b) { return a.v < b.v; }
};

/// Element of K = F_{q^3}, encoded as an integer in [0, q^3): base-q digits
/// are the coefficients in the polynomial basis of K over F_q.
struct KElem {
    uint32_t v = 0;
    friend bool operator==(KElem a, KElem b) { return a.v == b.v; }
    friend bool operator!=(KElem a, KElem b) { return a.v != b.v; }
    friend bool operator<(KElem a, KElem b) { return a.v < b.v; }
};

/// The field pair F_q < K = F_{q^3} with a canonical multiplicative generator
/// Q of K^x.  Moduli and generator are chosen by ascending-encoding scans, so
/// the same (p, e) always yields the same tower.
///
/// Immutable after construction; all element operations are const and pure.
class FieldTower {
   public:
    /// Builds the canonical tower for q = p^e.  Requires p prime, p^e >= 4.
    static FieldTower build(uint32_t p, uint32_t e);

    /// Builds a tower from explicit moduli and generator (as found in file
    /// headers), revalidating irreducibility and the generator order.
    static FieldTower from_parts(uint32_t p, uint32_t e, const std::vector<uint32_t>& fq_modulus,
                                 const std::vector<FqElem>& k_modulus, KElem q_gen);

    uint32_t p() const { return p_; }
    uint32_t e() const { return e_; }
    uint32_t q() const { return q_; }
    uint32_t k_size() const { return k_size_; }          // q^3
    uint64_t group_order() const { return k_size_ - 1; }  // q^3 - 1
    uint64_t bracket3_int() const { return 1ull + q_ + uint64_t(q_) * q_; }  // [3]_q as an integer
    KElem q_gen() const { return q_gen_; }
    const std::vector<uint32_t>& fq_modulus() const { return fq_modulus_; }
    const std::vector<FqElem>& k_modulus() const { return k_modulus_; }

    // ---- F_q arithmetic ----
    FqElem fq_add(FqElem a, FqElem b) const { return {fq_add_[a.v * q_ + b.v]}; }
    FqElem fq_sub(FqElem a, FqElem b) const { return fq_add(a, fq_neg(b)); }
    FqElem fq_neg(FqElem a) const { return {fq_neg_[a.v]}; }
    FqElem fq_mul(FqElem a, FqElem b) const { return {fq_mul_[a.v * q_ + b.v]}; }
    FqElem fq_inv(FqElem a) const;

    // ---- K arithmetic ----
    KElem zero() const { return {0}; }
    KElem one() const { return {1}; }
    KElem add(KElem a, KElem b) const;
    KElem sub(KElem a, KElem b) const { return add(a, neg(b)); }
    KElem neg(KElem a) const;
    KElem mul(KElem a, KElem b) const {
        if (a.v == 0 || b.v == 0) return {0};
        return k_exp_[k_log_[a.v] + k_log_[b.v]];
    }
    KElem inv(KElem a) const;
    KElem pow(KElem a, int64_t t) const;

    /// Q^t for any integer t (reduced mod q^3 - 1).
    KElem q_power(int64_t t) const;

    KElem embed(FqElem a) const { return {a.v}; }
    /// True iff x lies in the subfield F_q, tested as x^q = x.
    bool in_subfield(KElem x) const;

    /// Multiplicative order of a nonzero element.
    uint64_t order(KElem a) const;

    /// Discrete log base Q of a nonzero element.
    uint64_t dlog(KElem a) const;

    /// Header string `QMC1 p=.. e=.. fqmod=.. kmod=.. Q=..` identifying the tower.
    std::string header_line() const;
    static FieldTower parse_header(const std::string& line);

   private:
    FieldTower() = default;
    void init_tables();

    uint32_t p_ = 0, e_ = 0, q_ = 0, k_size_ = 0;
    std::vector<uint32_t> fq_modulus_;  // length e+1, low degree first, monic over F_p
    std::vector<FqElem> k_modulus_;     // length 4, low degree first, monic over F_q
    KElem q_gen_{0};

    std::vector<uint32_t> fq_add_, fq_mul_, fq_neg_, fq_inv_;
    std::vector<KElem> k_exp_;     // Q^t for t in [0, 2(q^3-1))
    std::vector<uint32_t> k_log_;  // dlog of nonzero elements
};

/// Prime factorization by trial division (desk-scale inputs).
std::vector<uint64_t> prime_factors(uint64_t n);

bool is_prime(uint64_t n);

}  // namespace qmc
