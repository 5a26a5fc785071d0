#include "qmc/qcalc.hpp"

#include <algorithm>

namespace qmc {

KElem q_bracket(const FieldTower& t, uint64_t n) {
    // (Q^n - 1) / (Q - 1)
    KElem num = t.sub(t.q_power(int64_t(n)), t.one());
    KElem den = t.sub(t.q_gen(), t.one());
    return t.mul(num, t.inv(den));
}

KElem q_falling(const FieldTower& t, uint64_t k, uint64_t steps) {
    KElem r = t.one();
    for (uint64_t i = 0; i < steps; ++i) {
        if (i > k) return t.zero();
        r = t.mul(r, q_bracket(t, k - i));
        if (r.v == 0) return r;
    }
    return r;
}

BracketTable::BracketTable(const FieldTower& t, uint32_t n_max) : t_(&t), n_max_(n_max) {
    if (uint64_t(n_max) >= t.group_order())
        throw std::out_of_range("BracketTable: n_max >= q^3-1 (a bracket factor vanishes)");
    fact_.resize(n_max + 1);
    fact_[0] = t.one();
    for (uint32_t n = 1; n <= n_max; ++n) fact_[n] = t.mul(fact_[n - 1], q_bracket(t, n));

    binom_.assign(size_t(n_max + 1) * (n_max + 1), t.zero());
    auto b = [&](uint32_t n, uint32_t k) -> KElem& { return binom_[size_t(n) * (n_max_ + 1) + k]; };
    for (uint32_t n = 0; n <= n_max; ++n) {
        for (uint32_t k = 0; k <= n; ++k) {
            KElem quotient = t.mul(fact_[n], t.inv(t.mul(fact_[k], fact_[n - k])));
            // Pascal-type recurrence over the Gaussian binomials
            KElem pascal;
            if (k == 0 || k == n) {
                pascal = t.one();
            } else {
                pascal = t.add(b(n - 1, k - 1), t.mul(t.q_power(k), b(n - 1, k)));
            }
            if (quotient != pascal) throw std::logic_error("BracketTable: factorial/Pascal mismatch");
            b(n, k) = quotient;
        }
    }
}

KElem BracketTable::bracket(int64_t n) const {
    if (n < 0) throw std::invalid_argument("bracket: negative index");
    return q_bracket(*t_, uint64_t(n));
}

KElem BracketTable::factorial(int64_t n) const {
    if (n < 0) return t_->zero();
    if (n > n_max_) throw std::out_of_range("factorial: beyond table bound");
    return fact_[size_t(n)];
}

KElem BracketTable::binom(int64_t n, int64_t k) const {
    if (k < 0 || k > n || n < 0) return t_->zero();
    if (n > n_max_) throw std::out_of_range("binom: beyond table bound");
    return binom_[size_t(n) * (n_max_ + 1) + size_t(k)];
}

KElem BracketTable::factorial_vec(const ExpVec& a) const {
    KElem r = t_->one();
    for (uint32_t x : a) r = t_->mul(r, factorial(x));
    return r;
}

KElem BracketTable::binom_vec(const ExpVec& a, const ExpVec& b) const {
    if (a.size() != b.size()) throw std::invalid_argument("binom_vec: arity mismatch");
    KElem r = t_->one();
    for (size_t i = 0; i < a.size(); ++i) {
        r = t_->mul(r, binom(a[i], b[i]));
        if (r.v == 0) return r;
    }
    return r;
}

UniPoly q_derive_uni(const FieldTower& t, const UniPoly& f) {
    if (f.degree() <= 0) return UniPoly();
    std::vector<KElem> c(size_t(f.degree()), t.zero());
    for (size_t k = 1; k < f.coeffs().size(); ++k) c[k - 1] = t.mul(q_bracket(t, k), f.coeffs()[k]);
    return UniPoly(std::move(c));
}

UniPoly q_derive_uni_iter(const FieldTower& t, const UniPoly& f, uint32_t steps) {
    UniPoly g = f;
    for (uint32_t i = 0; i < steps; ++i) g = q_derive_uni(t, g);
    return g;
}

MultiPoly q_derive_multi(const FieldTower& t, const MultiPoly& f, const ExpVec& a) {
    if (a.size() != f.arity()) throw std::invalid_argument("q_derive_multi: arity mismatch");
    std::vector<MultiPoly::Term> acc;
    acc.reserve(f.term_count());
    for (const auto& tm : f.terms()) {
        ExpVec e = unpack_exp(tm.first, f.arity());
        KElem c = tm.second;
        bool alive = true;
        for (size_t i = 0; i < e.size() && alive; ++i) {
            if (e[i] < a[i]) {
                alive = false;
                break;
            }
            if (a[i] > 0) c = t.mul(c, q_falling(t, e[i], a[i]));
            if (c.v == 0) alive = false;
        }
        if (!alive) continue;
        ExpVec ne(e.size());
        for (size_t i = 0; i < e.size(); ++i) ne[i] = e[i] - a[i];
        acc.push_back({pack_exp(ne), c});
    }
    return MultiPoly::from_terms(f.arity(), std::move(acc), t);
}

MultiPoly q_pochhammer(const FieldTower& t, const std::vector<KElem>& center, const ExpVec& a) {
    uint32_t m = uint32_t(center.size());
    if (a.size() != m) throw std::invalid_argument("q_pochhammer: arity mismatch");
    MultiPoly r = MultiPoly::constant(m, t.one());
    for (uint32_t i = 0; i < m; ++i) {
        ExpVec xi(m, 0);
        xi[i] = 1;
        for (uint32_t s = 0; s < a[i]; ++s) {
            KElem root = t.mul(t.q_power(s), center[i]);
            MultiPoly factor = add(t, MultiPoly::monomial(m, xi, t.one()), MultiPoly::constant(m, t.neg(root)));
            r = mul(t, r, factor);
        }
    }
    return r;
}

std::map<uint64_t, KElem> q_taylor_coeffs(const FieldTower& t, const MultiPoly& f, const ExpVec& b) {
    if (b.size() != f.arity()) throw std::invalid_argument("q_taylor_coeffs: arity mismatch");
    int deg = f.total_degree();
    if (deg != kNegInfDeg && uint64_t(deg) > t.bracket3_int() - 1)
        throw std::out_of_range("q_taylor_coeffs: degree too large for bracket-factorial inverses");
    std::vector<KElem> point(b.size());
    for (size_t i = 0; i < b.size(); ++i) point[i] = t.q_power(b[i]);
    std::map<uint64_t, KElem> out;
    if (f.is_zero()) return out;
    for (const ExpVec& a : exps_below(f.arity(), uint32_t(deg) + 1)) {
        KElem v = eval(t, q_derive_multi(t, f, a), point);
        if (v.v != 0) out[pack_exp(a)] = v;
    }
    return out;
}

MultiPoly q_taylor_reconstruct(const FieldTower& t, uint32_t m, const std::map<uint64_t, KElem>& coeffs,
                               const ExpVec& b) {
    if (b.size() != m) throw std::invalid_argument("q_taylor_reconstruct: arity mismatch");
    uint32_t maxw = 0;
    for (const auto& [key, c] : coeffs) maxw = std::max(maxw, key_weight(key));
    if (!coeffs.empty() && uint64_t(maxw) > t.bracket3_int() - 1)
        throw std::out_of_range("q_taylor_reconstruct: degree too large for bracket-factorial inverses");
    std::vector<KElem> center(m);
    for (uint32_t i = 0; i < m; ++i) center[i] = t.q_power(b[i]);
    BracketTable br(t, maxw);
    MultiPoly r(m);
    for (const auto& [key, c] : coeffs) {
        if (c.v == 0) continue;
        ExpVec a = unpack_exp(key, m);
        KElem w = t.mul(c, t.inv(br.factorial_vec(a)));
        r = add(t, r, scale(t, q_pochhammer(t, center, a), w));
    }
    return r;
}

namespace {

// Scalar parts c[k][t] of the univariate change-of-basis rows, defined by
// D^k f(X) = sum_t (c[k][t] / X^k) f(Q^t X) and computed by iterating the
// difference quotient, not from a closed form.
std::vector<std::vector<KElem>> nu_scalar_rows(const FieldTower& t, uint32_t s) {
    std::vector<std::vector<KElem>> c(s);
    c[0] = {t.one()};
    KElem qm1_inv = t.inv(t.sub(t.q_gen(), t.one()));
    for (uint32_t k = 1; k < s; ++k) {
        c[k].assign(k + 1, t.zero());
        KElem qk_inv = t.q_power(-int64_t(k - 1));
        for (uint32_t j = 0; j <= k; ++j) {
            KElem prev_shift = j > 0 ? t.mul(c[k - 1][j - 1], qk_inv) : t.zero();
            KElem prev_same = j < k ? c[k - 1][j] : t.zero();
            c[k][j] = t.mul(t.sub(prev_shift, prev_same), qm1_inv);
        }
    }
    return c;
}

}  // namespace

NuXiMatrix nu_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s) {
    uint32_t m = uint32_t(a.size());
    if (m == 0 || s == 0) throw std::invalid_argument("nu_matrix: empty point or s = 0");
    if (s > t.q()) throw RegimeError("nu_matrix: s <= q required");
    for (KElem ai : a)
        if (ai.v == 0) throw std::invalid_argument("nu_matrix: zero coordinate");

    auto rows = nu_scalar_rows(t, s);
    auto idx = exps_below(m, s);
    uint32_t n = uint32_t(idx.size());
    NuXiMatrix M;
    M.m_ = m;
    M.s_ = s;
    M.n_ = n;
    M.dir_ = NuXiMatrix::Dir::nu;
    M.e_.assign(size_t(n) * n, t.zero());
    for (uint32_t i = 0; i < n; ++i) {
        const ExpVec& al = idx[i];
        KElem apow = t.one();
        for (uint32_t v = 0; v < m; ++v) apow = t.mul(apow, t.pow(a[v], -int64_t(al[v])));
        for (uint32_t j = 0; j < n; ++j) {
            const ExpVec& be = idx[j];
            if (!exp_leq(be, al)) continue;
            KElem prod = apow;
            for (uint32_t v = 0; v < m && prod.v != 0; ++v) prod = t.mul(prod, rows[al[v]][be[v]]);
            M.e_[size_t(i) * n + j] = prod;
        }
    }
    return M;
}

NuXiMatrix xi_matrix(const FieldTower& t, const std::vector<KElem>& a, uint32_t s) {
    NuXiMatrix nu = nu_matrix(t, a, s);
    uint32_t n = nu.size();
    NuXiMatrix xi;
    xi.m_ = nu.m();
    xi.s_ = s;
    xi.n_ = n;
    xi.dir_ = NuXiMatrix::Dir::xi;
    xi.e_.assign(size_t(n) * n, t.zero());
    auto nuat = [&](uint32_t i, uint32_t j) { return nu.at(i, j); };
    auto xiat = [&](uint32_t i, uint32_t j) -> KElem& { return xi.e_[size_t(i) * n + j]; };
    // invert the lower-triangular matrix by forward substitution
    for (uint32_t j = 0; j < n; ++j) {
        KElem diag_inv = t.inv(nuat(j, j));
        xiat(j, j) = diag_inv;
        for (uint32_t i = j + 1; i < n; ++i) {
            KElem acc = t.zero();
            for (uint32_t k = j; k < i; ++k) acc = t.add(acc, t.mul(nuat(i, k), xiat(k, j)));
            xiat(i, j) = t.neg(t.mul(acc, t.inv(nuat(i, i))));
        }
    }
    // nu * xi = I, by construction; fail loudly if not
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < n; ++j) {
            KElem acc = t.zero();
            for (uint32_t k = 0; k < n; ++k) acc = t.add(acc, t.mul(nu.at(i, k), xi.at(k, j)));
            if (acc != (i == j ? t.one() : t.zero())) throw std::logic_error("xi_matrix: inverse check failed");
        }
    }
    return xi;
}

std::vector<KElem> NuXiMatrix::apply(const FieldTower& t, const std::vector<KElem>& block) const {
    if (block.size() != n_) throw std::invalid_argument("NuXiMatrix::apply: size mismatch");
    std::vector<KElem> out(n_, t.zero());
    for (uint32_t i = 0; i < n_; ++i) {
        KElem acc = t.zero();
        for (uint32_t j = 0; j < n_; ++j) {
            KElem e = e_[size_t(i) * n_ + j];
            if (e.v != 0 && block[j].v != 0) acc = t.add(acc, t.mul(e, block[j]));
        }
        out[i] = acc;
    }
    return out;
}

}  // namespace qmc
