#include "qmc/decode.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace qmc {

namespace {

uint64_t ceil_div(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

uint64_t ipow(uint64_t base, uint32_t e) {
    uint64_t r = 1;
    for (uint32_t i = 0; i < e; ++i) r *= base;
    return r;
}

// all b with b <= a componentwise
std::vector<ExpVec> exps_leq(const ExpVec& a) {
    std::vector<ExpVec> out{ExpVec(a.size(), 0)};
    for (size_t i = 0; i < a.size(); ++i) {
        std::vector<ExpVec> next;
        next.reserve(out.size() * (a[i] + 1));
        for (const ExpVec& e : out) {
            for (uint32_t v = 0; v <= a[i]; ++v) {
                ExpVec e2 = e;
                e2[i] = v;
                next.push_back(std::move(e2));
            }
        }
        out = std::move(next);
    }
    return out;
}

// D^d (X^e) evaluated at a point
KElem mono_deriv_eval(const FieldTower& t, const ExpVec& e, const ExpVec& d,
                      const std::vector<KElem>& point) {
    KElem r = t.one();
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] < d[i]) return t.zero();
        if (d[i] > 0) {
            r = t.mul(r, q_falling(t, e[i], d[i]));
            if (r.v == 0) return r;
        }
        if (e[i] > d[i]) r = t.mul(r, t.pow(point[i], int64_t(e[i] - d[i])));
    }
    return r;
}

}  // namespace

DecodeConfig choose_config_uni(const FieldTower& t, uint64_t n, uint32_t s, uint32_t r, uint32_t k) {
    if (r < 1 || r > s) throw RegimeError("choose_config: r in [1, s] required");
    if (k < 1 || uint64_t(k) > uint64_t(s) * n) throw RegimeError("choose_config: k in [1, s n] required");
    DecodeConfig cfg;
    cfg.r = r;
    int64_t num = int64_t(n) * (s - r + 1) - int64_t(r) - int64_t(k) + 1;
    int64_t d = num <= 0 ? 1 : (num + r) / (r + 1);
    if (d < 1) d = 1;
    cfg.d = uint32_t(d);
    if (uint64_t(cfg.d) + k - 1 >= t.bracket3_int())
        throw RegimeError("choose_config: d + k - 1 < [3]_q required");
    if (uint64_t(cfg.d) + k > kMaxExp) throw RegimeError("choose_config: degrees exceed the packed-exponent limit");
    cfg.t_min = (uint64_t(cfg.d) + k - 1) / (s - r + 1) + 1;
    cfg.t_stated = ceil_div(n * (s - r + 1) + uint64_t(k) * (r + 1), uint64_t(r + 1) * (s - r + 1));
    cfg.paper_d = -1;
    return cfg;
}

DecodeConfig choose_config_multi(const FieldTower& t, uint32_t m, uint64_t a_size, uint32_t s, uint32_t r,
                                 uint32_t k) {
    if (r < 1 || r > s) throw RegimeError("choose_config: r in [1, s] required");
    if (k < 1 || uint64_t(k) > uint64_t(s) * a_size) throw RegimeError("choose_config: k in [1, s|A|] required");
    uint64_t constraints = ipow(a_size, m) * binomial(m + s - r, m);
    DecodeConfig cfg;
    cfg.r = r;
    uint32_t d = 0;
    for (;;) {
        ++d;
        if (uint64_t(d) + k - 1 >= t.bracket3_int() || uint64_t(d) + k > kMaxExp)
            throw RegimeError("choose_config: no admissible d with d + k - 1 < [3]_q");
        uint64_t unknowns = binomial(m + d + k - 1, m) + uint64_t(r) * binomial(m + d, m);
        if (unknowns > constraints) break;
    }
    cfg.d = d;
    uint64_t apow = ipow(a_size, m - 1);
    cfg.t_min = (uint64_t(d) + k - 1) * apow / (s - r + 1) + 1;
    long double lead = 5.0L * powl(1.0L / (r + 1), 1.0L / m);
    cfg.paper_d = int64_t(ceill(lead * (s - r + 1) * a_size));
    cfg.t_stated = uint64_t(ceill(lead * apow + (long double)k / (s - r + 1)));
    return cfg;
}

// ---------------------------------------------------------------------------
// univariate decoder
// ---------------------------------------------------------------------------

bool InterpPoly::is_zero() const {
    if (!p_tilde.is_zero()) return false;
    for (const auto& pj : p)
        if (!pj.is_zero()) return false;
    return true;
}

InterpPoly delta_uni(const FieldTower& t, const InterpPoly& P, uint32_t s) {
    if (P.p.size() > s) throw std::invalid_argument("delta_uni: too many Y slots");
    InterpPoly out;
    out.p_tilde = q_derive_multi(t, P.p_tilde, {1});
    size_t top = std::min<size_t>(P.p.size() + 1, s);  // Y_s = 0
    out.p.assign(top, MultiPoly(1));
    std::vector<KElem> qvec{t.q_gen()};
    for (size_t j = 0; j < top; ++j) {
        MultiPoly v(1);
        if (j < P.p.size()) v = q_derive_multi(t, P.p[j], {1});
        if (j >= 1) v = add(t, v, scale_vars(t, P.p[j - 1], qvec));
        out.p[j] = v;
    }
    return out;
}

KElem interp_eval_uni(const FieldTower& t, const InterpPoly& P, KElem x, const std::vector<KElem>& block) {
    if (block.size() < P.p.size()) throw std::invalid_argument("interp_eval_uni: block too short");
    KElem acc = eval(t, P.p_tilde, {x});
    for (size_t j = 0; j < P.p.size(); ++j) {
        if (P.p[j].is_zero() || block[j].v == 0) continue;
        acc = t.add(acc, t.mul(eval(t, P.p[j], {x}), block[j]));
    }
    return acc;
}

MultiPoly project_uni(const FieldTower& t, const InterpPoly& P, const MultiPoly& f) {
    if (f.arity() != 1) throw std::invalid_argument("project_uni: arity mismatch");
    MultiPoly acc = P.p_tilde;
    MultiPoly df = f;
    for (size_t j = 0; j < P.p.size(); ++j) {
        if (!P.p[j].is_zero()) acc = add(t, acc, mul(t, P.p[j], df));
        df = q_derive_multi(t, df, {1});
    }
    return acc;
}

InterpPoly interpolate_uni(const FieldTower& t, const Codeword& w, const CodeParams& cp,
                           const DecodeConfig& cfg) {
    if (cp.m != 1) throw std::invalid_argument("interpolate_uni: m = 1 required");
    check_shape(w, cp);
    const uint32_t s = cp.s, r = cfg.r, d = cfg.d, k = cp.k;
    const uint64_t n = cp.n_blocks;
    auto points = grid_points(t, cp.A, 1);

    const size_t cols = (d + k) + size_t(r) * (d + 1);
    const size_t rows = n * (s - r + 1);
    KMatrix M(rows, std::vector<KElem>(cols, t.zero()));

    size_t col = 0;
    auto add_column = [&](InterpPoly B) {
        for (uint32_t lvl = 0; lvl <= s - r; ++lvl) {
            for (uint64_t i = 0; i < n; ++i)
                M[size_t(lvl) * n + i][col] = interp_eval_uni(t, B, points[i][0], w.blocks[i]);
            if (lvl < s - r) B = delta_uni(t, B, s);
        }
        ++col;
    };

    for (uint32_t i = 0; i < d + k; ++i) {
        InterpPoly B;
        B.p_tilde = MultiPoly::monomial(1, {i}, t.one());
        add_column(std::move(B));
    }
    for (uint32_t j = 0; j < r; ++j) {
        for (uint32_t i = 0; i <= d; ++i) {
            InterpPoly B;
            B.p.assign(j + 1, MultiPoly(1));
            B.p[j] = MultiPoly::monomial(1, {i}, t.one());
            add_column(std::move(B));
        }
    }

    auto v = nullspace_k(t, M);
    if (!v) throw std::logic_error("interpolate_uni: no nonzero solution despite the counting inequality");

    InterpPoly P;
    {
        std::vector<MultiPoly::Term> terms;
        for (uint32_t i = 0; i < d + k; ++i)
            if ((*v)[i].v != 0) terms.push_back({pack_exp({i}), (*v)[i]});
        P.p_tilde = MultiPoly::from_sorted_terms(1, std::move(terms));
    }
    P.p.assign(r, MultiPoly(1));
    for (uint32_t j = 0; j < r; ++j) {
        std::vector<MultiPoly::Term> terms;
        for (uint32_t i = 0; i <= d; ++i) {
            KElem c = (*v)[(d + k) + size_t(j) * (d + 1) + i];
            if (c.v != 0) terms.push_back({pack_exp({i}), c});
        }
        P.p[j] = MultiPoly::from_sorted_terms(1, std::move(terms));
    }

    // the vanishing conditions must hold exactly
    InterpPoly B = P;
    for (uint32_t lvl = 0; lvl <= s - r; ++lvl) {
        for (uint64_t i = 0; i < n; ++i)
            if (interp_eval_uni(t, B, points[i][0], w.blocks[i]).v != 0)
                throw std::logic_error("interpolate_uni: nonzero constraint residual");
        if (lvl < s - r) B = delta_uni(t, B, s);
    }
    return P;
}

AffineSpace solve_uni(const FieldTower& t, const InterpPoly& P, const CodeParams& cp,
                      const DecodeConfig& cfg) {
    const uint32_t k = cp.k;
    size_t rp = P.p.size();
    while (rp > 0 && P.p[rp - 1].is_zero()) --rp;
    if (rp == 0) {
        if (P.p_tilde.is_zero()) throw std::invalid_argument("solve_uni: zero interpolation polynomial");
        return AffineSpace{};  // P^{[f]} = P~ != 0 for every f
    }

    // equation window: all Pochhammer coefficients of P^{[f]} live below here
    uint64_t dk = uint64_t(cfg.d) + k - 1;
    if (P.p_tilde.total_degree() > int(dk)) dk = uint64_t(P.p_tilde.total_degree());
    for (size_t j = 0; j < rp; ++j)
        if (!P.p[j].is_zero() && P.p[j].total_degree() + int(k) - 1 > int(dk))
            dk = uint64_t(P.p[j].total_degree() + int(k) - 1);
    if (dk >= t.bracket3_int()) throw RegimeError("solve_uni: degree window reaches [3]_q");

    // base exponent with a root-free window
    const uint64_t ord = t.group_order();
    UniPoly plead = to_unipoly(P.p[rp - 1]);
    std::vector<bool> nonzero_at(ord);
    for (uint64_t x = 0; x < ord; ++x) nonzero_at[x] = eval(t, plead, t.q_power(int64_t(x))).v != 0;
    int64_t b = -1;
    for (uint64_t cand = 0; cand < ord; ++cand) {
        bool ok = true;
        for (uint64_t h = 0; h <= dk && ok; ++h) ok = nonzero_at[(cand + h) % ord];
        if (ok) {
            b = int64_t(cand);
            break;
        }
    }
    if (b < 0) throw RegimeError("solve_uni: no base exponent avoids the roots");

    // iterated derivatives of P~ and the P_j
    std::vector<std::vector<UniPoly>> der(rp + 1);  // slot rp holds P~
    for (size_t j = 0; j <= rp; ++j) {
        der[j].resize(dk + 1);
        der[j][0] = j == rp ? to_unipoly(P.p_tilde) : to_unipoly(P.p[j]);
        for (uint64_t o = 1; o <= dk; ++o) der[j][o] = q_derive_uni(t, der[j][o - 1]);
    }
    auto val = [&](size_t j, uint64_t order, int64_t expnt) {
        return eval(t, der[j][order], t.q_power(expnt));
    };

    BracketTable br(t, uint32_t(dk));
    const size_t nparams = std::min<size_t>(rp - 1, k);
    const uint64_t top_index = dk + rp;  // one past the largest Newton index used
    std::vector<AffineExpr> newton(top_index, AffineExpr(nparams));
    for (size_t i = 0; i < nparams; ++i) newton[i] = AffineExpr::param(nparams, i);
    // indices in [k, rp-2], when any, stay zero: derivatives of order >= k vanish

    std::vector<AffineExpr> constraints;
    for (uint64_t h = 0; h <= dk; ++h) {
        AffineExpr rhs = AffineExpr::constant(nparams, val(rp, h, b));
        for (size_t j = 0; j < rp; ++j) {
            for (uint64_t c = 0; c <= h; ++c) {
                if (j == rp - 1 && c == h) continue;
                KElem qb = br.binom(int64_t(h), int64_t(c));
                if (qb.v == 0) continue;
                KElem pv = val(j, h - c, int64_t(c) + b);
                if (pv.v == 0) continue;
                const AffineExpr& fe = newton[c + j];
                if (fe.is_zero()) continue;
                rhs = ae_add(t, rhs, ae_scale(t, fe, t.mul(qb, pv)));
            }
        }
        uint64_t ti = h + rp - 1;
        if (ti < k) {
            KElem lead = val(rp - 1, 0, int64_t(h) + b);
            newton[ti] = ae_scale(t, rhs, t.neg(t.inv(lead)));
        } else if (!rhs.is_zero()) {
            constraints.push_back(rhs);
        }
    }

    auto sol = solve_affine_constraints(t, constraints, nparams);
    if (!sol.consistent) return AffineSpace{};

    auto reconstruct = [&](const std::vector<KElem>& prm) {
        std::map<uint64_t, KElem> coeffs;
        for (uint32_t i = 0; i < k; ++i) {
            KElem v = ae_eval(t, newton[i], prm);
            if (v.v != 0) coeffs[pack_exp({i})] = v;
        }
        return q_taylor_reconstruct(t, 1, coeffs, {uint32_t(b)});
    };

    AffineSpace out;
    out.empty = false;
    out.base = reconstruct(sol.point);
    for (const auto& dir : sol.directions) {
        std::vector<KElem> pt(nparams);
        for (size_t i = 0; i < nparams; ++i) pt[i] = t.add(sol.point[i], dir[i]);
        out.basis.push_back(sub(t, reconstruct(pt), out.base));
    }

    // every member of the affine span must project to zero; affine combination
    // of the checks below covers the whole space
    if (!project_uni(t, P, out.base).is_zero()) throw std::logic_error("solve_uni: base fails projection");
    for (const auto& bp : out.basis)
        if (!project_uni(t, P, add(t, out.base, bp)).is_zero())
            throw std::logic_error("solve_uni: basis member fails projection");
    if (out.basis.size() + 1 > rp) throw std::logic_error("solve_uni: dimension bound exceeded");
    return out;
}

bool affine_space_contains(const FieldTower& t, const AffineSpace& space, const MultiPoly& f) {
    if (space.empty) return false;
    MultiPoly diff = sub(t, f, space.base);
    // constraints over the combination coefficients, one per monomial
    std::map<uint64_t, AffineExpr> rows;
    size_t n = space.basis.size();
    auto touch = [&](uint64_t key) -> AffineExpr& {
        auto it = rows.find(key);
        if (it == rows.end()) it = rows.emplace(key, AffineExpr(n)).first;
        return it->second;
    };
    for (const auto& tm : diff.terms()) touch(tm.first).c0 = t.neg(tm.second);
    for (size_t i = 0; i < n; ++i)
        for (const auto& tm : space.basis[i].terms()) touch(tm.first).lin[i] = tm.second;
    std::vector<AffineExpr> cs;
    cs.reserve(rows.size());
    for (auto& [key, e] : rows) cs.push_back(std::move(e));
    return solve_affine_constraints(t, cs, n).consistent;
}

// ---------------------------------------------------------------------------
// multivariate decoder
// ---------------------------------------------------------------------------

int ZXPoly::deg_x() const { return terms.empty() ? kNegInfDeg : int(key_weight(terms.back().first)); }

int ZXPoly::deg_z() const {
    int d = kNegInfDeg;
    for (const auto& [key, z] : terms) d = std::max(d, z.total_degree());
    return d;
}

const MultiPoly* ZXPoly::coeff(uint64_t xkey) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), xkey,
                               [](const auto& tm, uint64_t k) { return tm.first < k; });
    if (it != terms.end() && it->first == xkey) return &it->second;
    return nullptr;
}

ZXPoly zx_zero(uint32_t mx, uint32_t mz) {
    ZXPoly z;
    z.mx = mx;
    z.mz = mz;
    return z;
}

ZXPoly zx_add(const FieldTower& t, const ZXPoly& a, const ZXPoly& b) {
    if (a.mx != b.mx || a.mz != b.mz) throw std::invalid_argument("zx_add: arity mismatch");
    ZXPoly r = zx_zero(a.mx, a.mz);
    size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
        if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
            r.terms.push_back(a.terms[i++]);
        } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
            r.terms.push_back(b.terms[j++]);
        } else {
            MultiPoly s = add(t, a.terms[i].second, b.terms[j].second);
            if (!s.is_zero()) r.terms.push_back({a.terms[i].first, std::move(s)});
            ++i;
            ++j;
        }
    }
    return r;
}

ZXPoly zx_mul(const FieldTower& t, const ZXPoly& a, const ZXPoly& b) {
    if (a.mx != b.mx || a.mz != b.mz) throw std::invalid_argument("zx_mul: arity mismatch");
    std::map<uint64_t, MultiPoly> acc;
    for (const auto& [ka, za] : a.terms) {
        for (const auto& [kb, zb] : b.terms) {
            MultiPoly prod = mul(t, za, zb);
            if (prod.is_zero()) continue;
            auto it = acc.find(ka + kb);
            if (it == acc.end())
                acc.emplace(ka + kb, std::move(prod));
            else
                it->second = add(t, it->second, prod);
        }
    }
    ZXPoly r = zx_zero(a.mx, a.mz);
    for (auto& [key, z] : acc)
        if (!z.is_zero()) r.terms.push_back({key, std::move(z)});
    return r;
}

ZXPoly zx_derive(const FieldTower& t, const ZXPoly& a, const ExpVec& e) {
    if (e.size() != a.mx) throw std::invalid_argument("zx_derive: arity mismatch");
    ZXPoly r = zx_zero(a.mx, a.mz);
    for (const auto& [key, z] : a.terms) {
        ExpVec x = unpack_exp(key, a.mx);
        KElem factor = t.one();
        bool alive = true;
        for (size_t i = 0; i < x.size() && alive; ++i) {
            if (x[i] < e[i]) {
                alive = false;
                break;
            }
            if (e[i] > 0) {
                factor = t.mul(factor, q_falling(t, x[i], e[i]));
                if (factor.v == 0) alive = false;
            }
        }
        if (!alive) continue;
        ExpVec nx(x.size());
        for (size_t i = 0; i < x.size(); ++i) nx[i] = x[i] - e[i];
        r.terms.push_back({pack_exp(nx), scale(t, z, factor)});
    }
    return r;
}

ZXPoly zx_shift_x(const FieldTower& t, const ZXPoly& a, const ExpVec& b) {
    if (b.size() != a.mx) throw std::invalid_argument("zx_shift_x: arity mismatch");
    ZXPoly r = zx_zero(a.mx, a.mz);
    r.terms.reserve(a.terms.size());
    for (const auto& [key, z] : a.terms) {
        ExpVec x = unpack_exp(key, a.mx);
        int64_t expnt = 0;
        for (size_t i = 0; i < x.size(); ++i) expnt += int64_t(x[i]) * b[i];
        r.terms.push_back({key, scale(t, z, t.q_power(expnt))});
    }
    return r;
}

MultiPoly zx_eval_x(const FieldTower& t, const ZXPoly& a, const std::vector<KElem>& point) {
    return zx_derive_eval(t, a, ExpVec(a.mx, 0), point);
}

MultiPoly zx_derive_eval(const FieldTower& t, const ZXPoly& a, const ExpVec& e,
                         const std::vector<KElem>& point) {
    if (e.size() != a.mx || point.size() != a.mx) throw std::invalid_argument("zx_derive_eval: arity mismatch");
    std::vector<MultiPoly::Term> acc;
    for (const auto& [key, z] : a.terms) {
        ExpVec x = unpack_exp(key, a.mx);
        KElem factor = mono_deriv_eval(t, x, e, point);
        if (factor.v == 0) continue;
        for (const auto& [zkey, c] : z.terms()) acc.push_back({zkey, t.mul(c, factor)});
    }
    return MultiPoly::from_terms(a.mz, std::move(acc), t);
}

bool InterpPolyZ::is_zero() const {
    if (!p_tilde.is_zero()) return false;
    for (const auto& pj : p)
        if (!pj.is_zero()) return false;
    return true;
}

YLinearZ to_ylinear(const InterpPolyZ& P) {
    YLinearZ y;
    y.m = P.m;
    y.tilde = P.p_tilde;
    for (size_t j = 0; j < P.p.size(); ++j) {
        if (P.p[j].is_zero()) continue;
        for (const ExpVec& g : exps_of_weight(P.m, uint32_t(j))) {
            ZXPoly c = P.p[j];
            for (auto& [key, z] : c.terms) {
                // attach the Z-monomial carrying this Y index
                std::vector<MultiPoly::Term> shifted;
                shifted.reserve(z.term_count());
                uint64_t zshift = pack_exp(g);
                for (const auto& [zkey, zc] : z.terms()) shifted.push_back({zkey + zshift, zc});
                z = MultiPoly::from_sorted_terms(P.m, std::move(shifted));
            }
            y.yterms[pack_exp(g)] = std::move(c);
        }
    }
    return y;
}

namespace {

ZXPoly zx_scale_k(const FieldTower& t, const ZXPoly& a, KElem c) {
    ZXPoly r = zx_zero(a.mx, a.mz);
    if (c.v == 0) return r;
    r.terms.reserve(a.terms.size());
    for (const auto& [key, z] : a.terms) r.terms.push_back({key, scale(t, z, c)});
    return r;
}

}  // namespace

YLinearZ delta_multi(const FieldTower& t, const YLinearZ& P, const ExpVec& a, uint32_t s,
                     const BracketTable& br) {
    if (a.size() != P.m) throw std::invalid_argument("delta_multi: arity mismatch");
    uint32_t max_in = 0;
    for (const auto& [key, c] : P.yterms)
        if (!c.is_zero()) max_in = std::max(max_in, key_weight(key) + 1);
    YLinearZ out;
    out.m = P.m;
    out.tilde = zx_derive(t, P.tilde, a);
    for (const auto& [dkey, C] : P.yterms) {
        if (C.is_zero()) continue;
        ExpVec d = unpack_exp(dkey, P.m);
        for (const ExpVec& b : exps_leq(a)) {
            ExpVec nd(P.m);
            uint32_t w = 0;
            for (uint32_t i = 0; i < P.m; ++i) {
                nd[i] = d[i] + b[i];
                w += nd[i];
            }
            if (w >= s) continue;  // Y indices of weight >= s are zero
            KElem qb = br.binom_vec(a, b);
            if (qb.v == 0) continue;
            ExpVec amb(P.m);
            for (uint32_t i = 0; i < P.m; ++i) amb[i] = a[i] - b[i];
            ZXPoly piece = zx_scale_k(t, zx_shift_x(t, zx_derive(t, C, amb), b), qb);
            if (piece.is_zero()) continue;
            uint64_t nkey = pack_exp(nd);
            auto it = out.yterms.find(nkey);
            if (it == out.yterms.end())
                out.yterms.emplace(nkey, std::move(piece));
            else
                it->second = zx_add(t, it->second, piece);
        }
    }
    // window property: indices grow by at most |a|
    for (const auto& [key, c] : out.yterms)
        if (!c.is_zero() && key_weight(key) >= max_in + exp_weight(a))
            throw std::logic_error("delta_multi: window property violated");
    return out;
}

MultiPoly ylinear_eval(const FieldTower& t, const YLinearZ& P, const std::vector<KElem>& point,
                       const std::vector<KElem>& block, uint32_t s) {
    MultiPoly acc = zx_eval_x(t, P.tilde, point);
    for (const auto& [dkey, C] : P.yterms) {
        if (C.is_zero()) continue;
        uint64_t idx = graded_lex_index(unpack_exp(dkey, P.m), s);
        if (idx >= block.size()) throw std::invalid_argument("ylinear_eval: block too short");
        if (block[idx].v == 0) continue;
        acc = add(t, acc, scale(t, zx_eval_x(t, C, point), block[idx]));
    }
    return acc;
}

ZXPoly project_multi(const FieldTower& t, const InterpPolyZ& P, const MultiPoly& f) {
    if (f.arity() != P.m) throw std::invalid_argument("project_multi: arity mismatch");
    ZXPoly acc = P.p_tilde;
    for (size_t j = 0; j < P.p.size(); ++j) {
        if (P.p[j].is_zero()) continue;
        // sum over |g| = j of D^g f(X) Z^g
        ZXPoly gpart = zx_zero(P.m, P.m);
        std::map<uint64_t, std::vector<MultiPoly::Term>> by_xkey;
        for (const ExpVec& g : exps_of_weight(P.m, uint32_t(j))) {
            MultiPoly df = q_derive_multi(t, f, g);
            uint64_t zkey = pack_exp(g);
            for (const auto& [xkey, c] : df.terms()) by_xkey[xkey].push_back({zkey, c});
        }
        for (auto& [xkey, zterms] : by_xkey)
            gpart.terms.push_back({xkey, MultiPoly::from_terms(P.m, std::move(zterms), t)});
        acc = zx_add(t, acc, zx_mul(t, P.p[j], gpart));
    }
    return acc;
}

InterpPolyZ interpolate_multi(const FieldTower& t, const Codeword& w, const CodeParams& cp,
                              const DecodeConfig& cfg) {
    check_shape(w, cp);
    const uint32_t m = cp.m, s = cp.s, r = cfg.r, d = cfg.d, k = cp.k;
    auto points = grid_points(t, cp.A, m);
    auto alphas = exps_below(m, s - r + 1);
    auto tilde_exps = exps_below(m, d + k);
    auto p_exps = exps_below(m, d + 1);
    BracketTable br(t, s - r);

    const size_t cols = tilde_exps.size() + size_t(r) * p_exps.size();
    const size_t rows = alphas.size() * points.size();
    ZMatrix M(rows, std::vector<MultiPoly>(cols, MultiPoly(m)));

    for (size_t ai = 0; ai < alphas.size(); ++ai) {
        const ExpVec& alpha = alphas[ai];
        auto betas = exps_leq(alpha);
        for (size_t gi = 0; gi < points.size(); ++gi) {
            const auto& a = points[gi];
            size_t row = ai * points.size() + gi;
            size_t col = 0;
            for (const ExpVec& e : tilde_exps) {
                KElem v = mono_deriv_eval(t, e, alpha, a);
                if (v.v != 0) M[row][col] = MultiPoly::constant(m, v);
                ++col;
            }
            // scaled points Q^b a for each b <= alpha
            std::vector<std::vector<KElem>> shifted(betas.size(), std::vector<KElem>(m));
            for (size_t bi = 0; bi < betas.size(); ++bi)
                for (uint32_t i = 0; i < m; ++i)
                    shifted[bi][i] = t.mul(t.q_power(betas[bi][i]), a[i]);
            for (uint32_t j = 0; j < r; ++j) {
                auto gammas = exps_of_weight(m, j);
                for (const ExpVec& e : p_exps) {
                    std::vector<MultiPoly::Term> zterms;
                    for (const ExpVec& g : gammas) {
                        KElem acc = t.zero();
                        for (size_t bi = 0; bi < betas.size(); ++bi) {
                            const ExpVec& beta = betas[bi];
                            ExpVec bg(m);
                            uint32_t wgt = 0;
                            for (uint32_t i = 0; i < m; ++i) {
                                bg[i] = beta[i] + g[i];
                                wgt += bg[i];
                            }
                            if (wgt >= s) continue;
                            KElem qb = br.binom_vec(alpha, beta);
                            if (qb.v == 0) continue;
                            ExpVec amb(m);
                            for (uint32_t i = 0; i < m; ++i) amb[i] = alpha[i] - beta[i];
                            KElem dv = mono_deriv_eval(t, e, amb, shifted[bi]);
                            if (dv.v == 0) continue;
                            KElem wv = w.blocks[gi][graded_lex_index(bg, s)];
                            if (wv.v == 0) continue;
                            acc = t.add(acc, t.mul(qb, t.mul(dv, wv)));
                        }
                        if (acc.v != 0) zterms.push_back({pack_exp(g), acc});
                    }
                    if (!zterms.empty()) M[row][col] = MultiPoly::from_terms(m, std::move(zterms), t);
                    ++col;
                }
            }
        }
    }

    PolyNullspace ns = nullspace_polyz(t, M);

    InterpPolyZ P;
    P.m = m;
    P.measured_degz = ns.max_degz;
    P.p_tilde = zx_zero(m, m);
    for (size_t i = 0; i < tilde_exps.size(); ++i)
        if (!ns.v[i].is_zero()) P.p_tilde.terms.push_back({pack_exp(tilde_exps[i]), ns.v[i]});
    P.p.assign(r, zx_zero(m, m));
    for (uint32_t j = 0; j < r; ++j) {
        for (size_t i = 0; i < p_exps.size(); ++i) {
            const MultiPoly& c = ns.v[tilde_exps.size() + size_t(j) * p_exps.size() + i];
            if (!c.is_zero()) P.p[j].terms.push_back({pack_exp(p_exps[i]), c});
        }
    }
    if (P.is_zero()) throw std::logic_error("interpolate_multi: zero interpolation polynomial");

    // independent residual check through the operator machinery: every
    // constraint must vanish identically in Z
    YLinearZ base = to_ylinear(P);
    for (const ExpVec& alpha : alphas) {
        YLinearZ da = delta_multi(t, base, alpha, s, br);
        for (size_t gi = 0; gi < points.size(); ++gi)
            if (!ylinear_eval(t, da, points[gi], w.blocks[gi], s).is_zero())
                throw std::logic_error("interpolate_multi: nonzero constraint residual");
    }
    return P;
}

namespace {

// Z-polynomial with affine-expression coefficients
using AffPolyZ = std::map<uint64_t, AffineExpr>;

void ap_add_kpoly(const FieldTower& t, AffPolyZ& acc, const MultiPoly& zp, size_t nparams) {
    for (const auto& [zkey, c] : zp.terms()) {
        auto it = acc.find(zkey);
        if (it == acc.end()) it = acc.emplace(zkey, AffineExpr(nparams)).first;
        it->second.c0 = t.add(it->second.c0, c);
    }
}

// acc += expr * zp * Z^shift
void ap_add_scaled(const FieldTower& t, AffPolyZ& acc, const MultiPoly& zp, const AffineExpr& expr,
                   uint64_t zshift, size_t nparams) {
    for (const auto& [zkey, c] : zp.terms()) {
        auto it = acc.find(zkey + zshift);
        if (it == acc.end()) it = acc.emplace(zkey + zshift, AffineExpr(nparams)).first;
        it->second = ae_add(t, it->second, ae_scale(t, expr, c));
    }
}

AffineExpr ap_get(const AffPolyZ& p, uint64_t key, size_t nparams) {
    auto it = p.find(key);
    return it == p.end() ? AffineExpr(nparams) : it->second;
}

AffineExpr ap_eval(const FieldTower& t, const AffPolyZ& p, const std::vector<KElem>& z, uint32_t mz,
                   size_t nparams) {
    AffineExpr acc(nparams);
    for (const auto& [zkey, e] : p) {
        ExpVec ze = unpack_exp(zkey, mz);
        KElem mono = t.one();
        for (uint32_t i = 0; i < mz; ++i)
            if (ze[i] > 0) mono = t.mul(mono, t.pow(z[i], ze[i]));
        if (mono.v != 0) acc = ae_add(t, acc, ae_scale(t, e, mono));
    }
    return acc;
}

}  // namespace

AffineSpace solve_multi(const FieldTower& t, const InterpPolyZ& P, const CodeParams& cp,
                        const DecodeConfig& cfg, SolveStats* stats) {
    const uint32_t m = P.m, k = cp.k;
    size_t rp = P.p.size();
    while (rp > 0 && P.p[rp - 1].is_zero()) --rp;
    if (rp == 0) {
        if (P.p_tilde.is_zero()) throw std::invalid_argument("solve_multi: zero interpolation polynomial");
        return AffineSpace{};
    }

    uint64_t dk = uint64_t(cfg.d) + k - 1;
    if (P.p_tilde.deg_x() > int(dk)) dk = uint64_t(P.p_tilde.deg_x());
    for (size_t j = 0; j < rp; ++j)
        if (!P.p[j].is_zero() && P.p[j].deg_x() + int(k) - 1 > int(dk))
            dk = uint64_t(P.p[j].deg_x() + int(k) - 1);
    if (dk >= t.bracket3_int()) throw RegimeError("solve_multi: degree window reaches [3]_q");

    auto alphas = exps_below(m, uint32_t(dk) + 1);
    const uint64_t ord = t.group_order();

    // base exponent vector: the leading slot must be nonzero (in K[Z]) on the
    // whole shifted window
    ExpVec beta;
    std::map<uint64_t, MultiPoly> lead_vals;  // alpha -> P_{rp-1}(Q^{alpha+beta})
    {
        uint64_t tried = 0;
        const uint64_t try_cap = 50000;
        for (uint32_t wgt = 0; beta.empty(); ++wgt) {
            if (uint64_t(wgt) > (ord - 1) * m) throw RegimeError("solve_multi: no valid base exponent found");
            for (const ExpVec& cand : exps_of_weight(m, wgt)) {
                bool in_range = true;
                for (uint32_t x : cand) in_range = in_range && (x < ord);
                if (!in_range) continue;
                if (++tried > try_cap) throw RegimeError("solve_multi: base exponent search exhausted");
                std::map<uint64_t, MultiPoly> vals;
                bool ok = true;
                for (const ExpVec& alpha : alphas) {
                    std::vector<KElem> pt(m);
                    for (uint32_t i = 0; i < m; ++i) pt[i] = t.q_power(int64_t(alpha[i]) + cand[i]);
                    MultiPoly v = zx_eval_x(t, P.p[rp - 1], pt);
                    if (v.is_zero()) {
                        ok = false;
                        break;
                    }
                    vals.emplace(pack_exp(alpha), std::move(v));
                }
                if (ok) {
                    beta = cand;
                    lead_vals = std::move(vals);
                    break;
                }
            }
        }
    }

    // (P_j)_{delta, theta+beta} = D^delta P_j (Q^{theta+beta}), memoized
    std::map<std::tuple<uint32_t, uint64_t, uint64_t>, MultiPoly> vcache;
    const uint32_t TILDE = uint32_t(rp);
    auto val = [&](uint32_t j, const ExpVec& delta, const ExpVec& theta) -> const MultiPoly& {
        auto key = std::make_tuple(j, pack_exp(delta), pack_exp(theta));
        auto it = vcache.find(key);
        if (it != vcache.end()) return it->second;
        std::vector<KElem> pt(m);
        for (uint32_t i = 0; i < m; ++i) pt[i] = t.q_power(int64_t(theta[i]) + beta[i]);
        const ZXPoly& poly = j == TILDE ? P.p_tilde : P.p[j];
        return vcache.emplace(key, zx_derive_eval(t, poly, delta, pt)).first->second;
    };

    BracketTable br(t, uint32_t(dk));
    std::vector<ExpVec> free_exps;
    for (const ExpVec& g : exps_below(m, uint32_t(rp) >= 1 ? uint32_t(rp - 1) : 0))
        if (exp_weight(g) < k) free_exps.push_back(g);
    const size_t nparams = free_exps.size();

    std::map<uint64_t, AffineExpr> newton;
    for (size_t i = 0; i < nparams; ++i) newton.emplace(pack_exp(free_exps[i]), AffineExpr::param(nparams, i));
    auto newton_get = [&](const ExpVec& dl) -> AffineExpr {
        if (exp_weight(dl) >= k) return AffineExpr(nparams);
        auto it = newton.find(pack_exp(dl));
        if (it == newton.end()) throw std::logic_error("solve_multi: newton coefficient used before set");
        return it->second;
    };

    const ExpVec zerovec(m, 0);
    auto gammas_top = exps_of_weight(m, uint32_t(rp) - 1);
    std::vector<AffineExpr> constraints;
    std::vector<AffineExpr> path_diffs;  // grid recovery minus monomial recovery, per coefficient
    uint32_t max_grid = 0;

    for (const ExpVec& alpha : alphas) {
        AffPolyZ rhs;
        ap_add_kpoly(t, rhs, val(TILDE, alpha, zerovec), nparams);
        for (uint32_t j = 0; j < rp; ++j) {
            auto gammas = exps_of_weight(m, j);
            for (const ExpVec& theta : exps_leq(alpha)) {
                if (j == rp - 1 && theta == alpha) continue;
                KElem qb = br.binom_vec(alpha, theta);
                if (qb.v == 0) continue;
                ExpVec amt(m);
                for (uint32_t i = 0; i < m; ++i) amt[i] = alpha[i] - theta[i];
                const MultiPoly& pv = val(j, amt, theta);
                if (pv.is_zero()) continue;
                for (const ExpVec& g : gammas) {
                    ExpVec tg(m);
                    for (uint32_t i = 0; i < m; ++i) tg[i] = theta[i] + g[i];
                    AffineExpr fe = newton_get(tg);
                    if (fe.is_zero()) continue;
                    ap_add_scaled(t, rhs, pv, ae_scale(t, fe, qb), pack_exp(g), nparams);
                }
            }
        }

        const MultiPoly& g0 = lead_vals.at(pack_exp(alpha));
        // split the weight-(rp-1) batch into known and unknown coefficients
        std::vector<ExpVec> unknown;
        for (const ExpVec& g : gammas_top) {
            ExpVec dl(m);
            uint32_t wgt = 0;
            for (uint32_t i = 0; i < m; ++i) {
                dl[i] = alpha[i] + g[i];
                wgt += dl[i];
            }
            if (wgt >= k || newton.count(pack_exp(dl))) {
                AffineExpr fe = newton_get(dl);
                if (!fe.is_zero()) ap_add_scaled(t, rhs, g0, fe, pack_exp(g), nparams);
            } else {
                unknown.push_back(g);
            }
        }

        std::vector<AffineExpr> solved;
        if (!unknown.empty()) {
            uint64_t zstar = g0.terms().front().first;
            ExpVec zstar_e = unpack_exp(zstar, m);
            KElem g0inv = t.inv(g0.terms().front().second);
            for (size_t ui = 0; ui < unknown.size(); ++ui) {
                const ExpVec& g = unknown[ui];
                AffineExpr acc = ap_get(rhs, zstar + pack_exp(g), nparams);
                for (size_t uj = 0; uj < ui; ++uj) {
                    const ExpVec& g2 = unknown[uj];
                    ExpVec diff(m);
                    bool okd = true;
                    for (uint32_t i = 0; i < m && okd; ++i) {
                        int64_t v = int64_t(zstar_e[i]) + g[i] - g2[i];
                        if (v < 0) okd = false;
                        else diff[i] = uint32_t(v);
                    }
                    if (!okd) continue;
                    KElem c = g0.coeff(diff);
                    if (c.v == 0) continue;
                    acc = ae_add(t, acc, ae_scale(t, solved[uj], c));
                }
                AffineExpr u = ae_scale(t, acc, t.neg(g0inv));
                solved.push_back(u);
                ExpVec dl(m);
                for (uint32_t i = 0; i < m; ++i) dl[i] = alpha[i] + g[i];
                newton.emplace(pack_exp(dl), u);
            }

            // hitting-set route: recover the same batch from grid evaluations
            {
                int degz = g0.total_degree();
                for (const auto& [zk, e] : rhs) degz = std::max(degz, int(key_weight(zk)));
                uint32_t grid = uint32_t(degz) + uint32_t(rp);  // > deg of the identity
                max_grid = std::max(max_grid, grid);
                if (uint64_t(grid) > t.k_size()) throw RegimeError("solve_multi: hitting grid exceeds the field");
                std::vector<std::vector<KElem>> A;
                std::vector<AffineExpr> rhs_rows;
                std::vector<KElem> zpt(m);
                std::vector<uint32_t> odo(m, 0);
                for (;;) {
                    for (uint32_t i = 0; i < m; ++i) zpt[i] = KElem{odo[i]};
                    KElem gz = eval(t, g0, zpt);
                    std::vector<KElem> arow(unknown.size());
                    for (size_t ui = 0; ui < unknown.size(); ++ui) {
                        KElem mono = t.one();
                        for (uint32_t i = 0; i < m; ++i)
                            if (unknown[ui][i] > 0) mono = t.mul(mono, t.pow(zpt[i], unknown[ui][i]));
                        arow[ui] = t.mul(gz, mono);
                    }
                    A.push_back(std::move(arow));
                    rhs_rows.push_back(ae_scale(t, ap_eval(t, rhs, zpt, m, nparams), t.neg(t.one())));
                    bool wrapped = true;
                    for (uint32_t pos = m; pos-- > 0;) {
                        if (++odo[pos] < grid) {
                            wrapped = false;
                            break;
                        }
                        odo[pos] = 0;
                    }
                    if (wrapped) break;
                }
                // forward elimination with expression right-hand sides
                size_t rank = 0;
                std::vector<size_t> pivot_cols;
                for (size_t colu = 0; colu < unknown.size() && rank < A.size(); ++colu) {
                    size_t piv = rank;
                    while (piv < A.size() && A[piv][colu].v == 0) ++piv;
                    if (piv == A.size()) continue;
                    std::swap(A[rank], A[piv]);
                    std::swap(rhs_rows[rank], rhs_rows[piv]);
                    KElem inv = t.inv(A[rank][colu]);
                    for (size_t c = colu; c < unknown.size(); ++c) A[rank][c] = t.mul(A[rank][c], inv);
                    rhs_rows[rank] = ae_scale(t, rhs_rows[rank], inv);
                    for (size_t r2 = 0; r2 < A.size(); ++r2) {
                        if (r2 == rank || A[r2][colu].v == 0) continue;
                        KElem f = A[r2][colu];
                        for (size_t c = colu; c < unknown.size(); ++c)
                            A[r2][c] = t.sub(A[r2][c], t.mul(f, A[rank][c]));
                        rhs_rows[r2] = ae_sub(t, rhs_rows[r2], ae_scale(t, rhs_rows[rank], f));
                    }
                    pivot_cols.push_back(colu);
                    ++rank;
                }
                if (rank != unknown.size())
                    throw std::logic_error("solve_multi: hitting grid failed to determine the batch");
                // the two recoveries may differ as raw expressions only by
                // combinations of the surplus-monomial constraints, so their
                // agreement is checked on the final solution set below
                for (size_t ui = 0; ui < unknown.size(); ++ui)
                    path_diffs.push_back(ae_sub(t, rhs_rows[ui], solved[pivot_cols[ui]]));
            }
        }

        // every remaining Z-monomial of the full relation must vanish
        for (const ExpVec& g : gammas_top) {
            ExpVec dl(m);
            for (uint32_t i = 0; i < m; ++i) dl[i] = alpha[i] + g[i];
            AffineExpr fe = newton_get(dl);
            if (!fe.is_zero()) {
                bool was_unknown = false;
                for (const ExpVec& ug : unknown) was_unknown = was_unknown || ug == g;
                if (was_unknown) ap_add_scaled(t, rhs, g0, fe, pack_exp(g), nparams);
            }
        }
        for (const auto& [zk, e] : rhs)
            if (!e.is_zero()) constraints.push_back(e);
    }

    auto sol = solve_affine_constraints(t, constraints, nparams);
    if (!sol.consistent) return AffineSpace{};

    // dual-path agreement on every point of the solution space (affine
    // combinations reduce the check to the base point and one step along each
    // direction)
    bool paths_agree = true;
    {
        std::vector<std::vector<KElem>> probes{sol.point};
        for (const auto& dir : sol.directions) {
            std::vector<KElem> pt(nparams);
            for (size_t i = 0; i < nparams; ++i) pt[i] = t.add(sol.point[i], dir[i]);
            probes.push_back(std::move(pt));
        }
        for (const AffineExpr& diff : path_diffs)
            for (const auto& pt : probes)
                if (ae_eval(t, diff, pt).v != 0) paths_agree = false;
    }

    auto reconstruct = [&](const std::vector<KElem>& prm) {
        std::map<uint64_t, KElem> coeffs;
        for (const ExpVec& dl : exps_below(m, k)) {
            AffineExpr e = newton_get(dl);
            KElem v = ae_eval(t, e, prm);
            if (v.v != 0) coeffs[pack_exp(dl)] = v;
        }
        return q_taylor_reconstruct(t, m, coeffs, beta);
    };

    AffineSpace out;
    out.empty = false;
    out.base = reconstruct(sol.point);
    for (const auto& dir : sol.directions) {
        std::vector<KElem> pt(nparams);
        for (size_t i = 0; i < nparams; ++i) pt[i] = t.add(sol.point[i], dir[i]);
        out.basis.push_back(sub(t, reconstruct(pt), out.base));
    }

    if (!project_multi(t, P, out.base).is_zero()) throw std::logic_error("solve_multi: base fails projection");
    for (const auto& bp : out.basis)
        if (!project_multi(t, P, add(t, out.base, bp)).is_zero())
            throw std::logic_error("solve_multi: basis member fails projection");
    if (out.basis.size() > count_below(m, uint32_t(rp) >= 1 ? uint32_t(rp - 1) : 0))
        throw std::logic_error("solve_multi: dimension bound exceeded");

    if (stats) {
        stats->paths_agree = paths_agree;
        stats->max_hitting_grid = max_grid;
    }
    return out;
}

// ---------------------------------------------------------------------------
// end-to-end
// ---------------------------------------------------------------------------

DecodeResult list_decode(const FieldTower& t, const Codeword& w, const CodeParams& cp, uint32_t r,
                         uint64_t enumeration_cap) {
    check_shape(w, cp);
    DecodeResult res;
    if (cp.m == 1) {
        res.config = choose_config_uni(t, cp.n_blocks, cp.s, r, cp.k);
        res.config.enumeration_cap = enumeration_cap;
        InterpPoly P = interpolate_uni(t, w, cp, res.config);
        res.space = solve_uni(t, P, cp, res.config);
        res.measured_degz = -1;
    } else {
        res.config = choose_config_multi(t, cp.m, cp.A.size(), cp.s, r, cp.k);
        res.config.enumeration_cap = enumeration_cap;
        InterpPolyZ P = interpolate_multi(t, w, cp, res.config);
        res.measured_degz = P.measured_degz;
        res.degz_within_ms = uint64_t(P.measured_degz) < uint64_t(cp.m) * cp.s;
        SolveStats st;
        res.space = solve_multi(t, P, cp, res.config, &st);
        res.paths_agree = st.paths_agree;
    }

    if (res.space.empty) {
        res.enumerated = true;  // the empty space has an (empty) explicit list
    } else {
        long double total = powl((long double)t.k_size(), (long double)res.space.dim());
        if (total <= (long double)res.config.enumeration_cap) {
            res.enumerated = true;
            size_t dim = res.space.dim();
            std::vector<uint32_t> odo(dim, 0);
            for (;;) {
                MultiPoly f = res.space.base;
                for (size_t i = 0; i < dim; ++i)
                    if (odo[i] != 0) f = add(t, f, scale(t, res.space.basis[i], KElem{odo[i]}));
                uint64_t ag = agreement_count(encode_qmult(t, f, cp), w);
                if (ag >= res.config.t_min) res.candidates.push_back({std::move(f), ag});
                size_t pos = dim;
                bool done = dim == 0;
                while (pos > 0) {
                    --pos;
                    if (++odo[pos] < t.k_size()) break;
                    odo[pos] = 0;
                    if (pos == 0) done = true;
                }
                if (done) break;
            }
            std::sort(res.candidates.begin(), res.candidates.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return poly_to_string(a.first) < poly_to_string(b.first);
            });
        }
    }
    return res;
}

}  // namespace qmc
