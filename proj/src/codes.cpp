#include "qmc/codes.hpp"

#include <set>

namespace qmc {

CodeParams make_code_params(const FieldTower& t, uint32_t m, uint32_t s, uint32_t k,
                            const std::vector<FqElem>& A) {
    if (m == 0 || m > kMaxArity) throw RegimeError("code params: m out of range");
    if (s < 1) throw RegimeError("code params: s >= 1 required");
    if (s > t.q()) throw RegimeError("code params: s <= q required");
    if (uint64_t(s) * t.q() - 1 >= t.bracket3_int()) throw RegimeError("code params: s*q - 1 < [3]_q required");
    if (A.empty()) throw RegimeError("code params: A must be nonempty");
    if (k < 1 || uint64_t(k) > uint64_t(s) * A.size()) throw RegimeError("code params: k in [1, s|A|] required");
    std::set<uint32_t> seen;
    for (FqElem a : A) {
        if (a.v == 0 || a.v >= t.q()) throw RegimeError("code params: A must lie in F_q^x");
        if (!seen.insert(a.v).second) throw RegimeError("code params: A elements must be distinct");
    }

    CodeParams p;
    p.m = m;
    p.s = s;
    p.k = k;
    p.A = A;
    p.n_blocks = 1;
    for (uint32_t i = 0; i < m; ++i) p.n_blocks *= A.size();
    p.block_size = uint32_t(count_below(m, s));

    // all evaluation points Q^g a must be distinct
    std::set<std::vector<uint32_t>> pts;
    auto gs = exps_below(m, s);
    for (const auto& a : grid_points(t, A, m)) {
        for (const ExpVec& g : gs) {
            std::vector<uint32_t> pt(m);
            for (uint32_t i = 0; i < m; ++i) pt[i] = t.mul(t.q_power(g[i]), a[i]).v;
            if (!pts.insert(pt).second) throw std::logic_error("code params: correlated points collide");
        }
    }
    return p;
}

void check_shape(const Codeword& w, const CodeParams& p) {
    if (w.blocks.size() != p.n_blocks) throw std::invalid_argument("codeword: wrong block count");
    for (const auto& b : w.blocks)
        if (b.size() != p.block_size) throw std::invalid_argument("codeword: wrong block size");
}

Codeword encode_qmult(const FieldTower& t, const MultiPoly& f, const CodeParams& p) {
    if (f.arity() != p.m) throw std::invalid_argument("encode: arity mismatch");
    if (f.total_degree() != kNegInfDeg && f.total_degree() >= int(p.k))
        throw std::invalid_argument("encode: degree must be below k");
    auto gs = exps_below(p.m, p.s);
    std::vector<MultiPoly> derivs;
    derivs.reserve(gs.size());
    for (const ExpVec& g : gs) derivs.push_back(q_derive_multi(t, f, g));
    Codeword w;
    w.blocks.reserve(p.n_blocks);
    for (const auto& a : grid_points(t, p.A, p.m)) {
        std::vector<KElem> block(gs.size());
        for (size_t i = 0; i < gs.size(); ++i) block[i] = eval(t, derivs[i], a);
        w.blocks.push_back(std::move(block));
    }
    return w;
}

Codeword encode_frm(const FieldTower& t, const MultiPoly& f, const CodeParams& p) {
    if (f.arity() != p.m) throw std::invalid_argument("encode: arity mismatch");
    if (f.total_degree() != kNegInfDeg && f.total_degree() >= int(p.k))
        throw std::invalid_argument("encode: degree must be below k");
    auto gs = exps_below(p.m, p.s);
    Codeword w;
    w.blocks.reserve(p.n_blocks);
    for (const auto& a : grid_points(t, p.A, p.m)) {
        std::vector<KElem> block(gs.size());
        for (size_t i = 0; i < gs.size(); ++i) {
            std::vector<KElem> pt(p.m);
            for (uint32_t v = 0; v < p.m; ++v) pt[v] = t.mul(t.q_power(gs[i][v]), a[v]);
            block[i] = eval(t, f, pt);
        }
        w.blocks.push_back(std::move(block));
    }
    return w;
}

Codeword basis_change(const FieldTower& t, const Codeword& w, const CodeParams& p, BasisDir dir) {
    check_shape(w, p);
    Codeword out;
    out.blocks.reserve(w.blocks.size());
    size_t idx = 0;
    for (const auto& a : grid_points(t, p.A, p.m)) {
        NuXiMatrix M = dir == BasisDir::eval_to_deriv ? nu_matrix(t, a, p.s) : xi_matrix(t, a, p.s);
        out.blocks.push_back(M.apply(t, w.blocks[idx]));
        ++idx;
    }
    return out;
}

uint64_t dimension(const CodeParams& p) {
    uint64_t count = 0;
    for (const ExpVec& a : exps_below(p.m, p.k)) {
        uint64_t tri = 0;
        for (uint32_t x : a) tri += x / p.A.size();
        if (tri <= p.s - 1) ++count;
    }
    return count;
}

uint64_t dimension_closed_form(const CodeParams& p) { return binomial(p.m + p.k - 1, p.m); }

Rational rate(const CodeParams& p) {
    return Rational(int64_t(dimension(p)), int64_t(p.block_size) * int64_t(p.n_blocks));
}

Rational distance_lb(const CodeParams& p) {
    int64_t den = int64_t(p.s) * int64_t(p.A.size());
    return Rational(den - int64_t(p.k) + 1, den);
}

Rational block_distance(const Codeword& u, const Codeword& v) {
    if (u.blocks.size() != v.blocks.size()) throw std::invalid_argument("block_distance: shape mismatch");
    int64_t diff = 0;
    for (size_t i = 0; i < u.blocks.size(); ++i) {
        if (u.blocks[i].size() != v.blocks[i].size())
            throw std::invalid_argument("block_distance: shape mismatch");
        if (u.blocks[i] != v.blocks[i]) ++diff;
    }
    return Rational(diff, int64_t(u.blocks.size()));
}

uint64_t agreement_count(const Codeword& u, const Codeword& v) {
    if (u.blocks.size() != v.blocks.size()) throw std::invalid_argument("agreement_count: shape mismatch");
    uint64_t agree = 0;
    for (size_t i = 0; i < u.blocks.size(); ++i)
        if (u.blocks[i] == v.blocks[i]) ++agree;
    return agree;
}

}  // namespace qmc
