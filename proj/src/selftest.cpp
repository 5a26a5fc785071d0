#include <functional>
#include <ostream>
#include <sstream>

#include "qmc/cli.hpp"

namespace qmc {

namespace {

std::vector<FqElem> first_elems(uint32_t n) {
    std::vector<FqElem> A;
    for (uint32_t i = 1; i <= n; ++i) A.push_back({i});
    return A;
}

bool check_gf() {
    FieldTower t = FieldTower::build(2, 2);
    if (t.order(t.q_gen()) != 63) return false;
    for (uint64_t u = 1; u + 1 <= t.bracket3_int() - 1; ++u)
        if (t.in_subfield(t.q_power(int64_t(u)))) return false;
    for (uint32_t v = 1; v < 64; ++v)
        if (t.mul({v}, t.inv({v})) != t.one()) return false;
    FieldTower t13 = FieldTower::build(13, 1);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        KElem a{uint32_t(rng.below(t13.k_size()))}, b{uint32_t(rng.below(t13.k_size()))},
            c{uint32_t(rng.below(t13.k_size()))};
        if (t13.mul(a, t13.add(b, c)) != t13.add(t13.mul(a, b), t13.mul(a, c))) return false;
    }
    return FieldTower::parse_header(t.header_line()).header_line() == t.header_line();
}

bool check_poly() {
    FieldTower t = FieldTower::build(13, 1);
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        MultiPoly f = random_poly(t, 2, 4, rng), g = random_poly(t, 2, 4, rng), h = random_poly(t, 2, 4, rng);
        if (mul(t, f, add(t, g, h)) != add(t, mul(t, f, g), mul(t, f, h))) return false;
        if (poly_parse(poly_to_string(f)) != f) return false;
    }
    for (uint32_t m = 1; m <= 3; ++m)
        for (uint64_t i = 0; i < count_below(m, 5); ++i)
            if (graded_lex_index(graded_lex_unindex(i, m, 5), 5) != i) return false;
    return true;
}

bool check_qcalc() {
    FieldTower t = FieldTower::build(2, 2);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        MultiPoly f = random_poly(t, 2, 6, rng);
        ExpVec b{uint32_t(rng.below(8)), uint32_t(rng.below(8))};
        if (q_taylor_reconstruct(t, 2, q_taylor_coeffs(t, f, b), b) != f) return false;
    }
    for (int i = 0; i < 5; ++i) {
        std::vector<KElem> a{{uint32_t(1 + rng.below(63))}, {uint32_t(1 + rng.below(63))}};
        MultiPoly f = random_poly(t, 2, 5, rng);
        auto idx = exps_below(2, 4);
        std::vector<KElem> evals, derivs;
        for (const ExpVec& g : idx) {
            std::vector<KElem> pt{t.mul(t.q_power(g[0]), a[0]), t.mul(t.q_power(g[1]), a[1])};
            evals.push_back(eval(t, f, pt));
            derivs.push_back(eval(t, q_derive_multi(t, f, g), a));
        }
        if (nu_matrix(t, a, 4).apply(t, evals) != derivs) return false;
        if (xi_matrix(t, a, 4).apply(t, derivs) != evals) return false;
    }
    return true;
}

bool check_qmult() {
    FieldTower t = FieldTower::build(2, 2);
    Rng rng(4);
    std::vector<FqElem> A = first_elems(3);
    for (int i = 0; i < 50; ++i) {
        uint32_t m = 1 + uint32_t(rng.below(2));
        MultiPoly f = random_poly(t, m, 1 + uint32_t(rng.below(5)), rng);
        if (f.is_zero()) continue;
        auto rep = grid_multiplicity_report(t, f, A, m, 2);
        if (!rep.total_ok || !rep.count_ok) return false;
    }
    MultiPoly tight = MultiPoly::constant(1, t.one());
    for (FqElem a : A) tight = mul(t, tight, q_pochhammer(t, {t.embed(a)}, {2}));
    auto rep = grid_multiplicity_report(t, tight, A, 1, 2);
    if (rep.total != 6 || rep.count_ge_s != 3) return false;
    for (const auto& g : grobner_generators(t, A, 2, 2)) {
        auto r2 = grid_multiplicity_report(t, g, A, 2, 2);
        for (uint32_t mu : r2.per_point)
            if (mu < 2) return false;
    }
    return true;
}

bool check_codes() {
    FieldTower t = FieldTower::build(13, 1);
    CodeParams p = make_code_params(t, 2, 3, 4, first_elems(3));
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
        MultiPoly f = random_poly(t, 2, p.k, rng);
        Codeword qm = encode_qmult(t, f, p);
        Codeword fr = encode_frm(t, f, p);
        if (basis_change(t, fr, p, BasisDir::eval_to_deriv) != qm) return false;
        if (basis_change(t, qm, p, BasisDir::deriv_to_eval) != fr) return false;
    }
    CodeParams ref = make_code_params(t, 2, 6, 4, first_elems(4));
    return dimension(ref) == 10 && ref.block_size == 21;
}

bool check_linsys() {
    FieldTower t = FieldTower::build(13, 1);
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        size_t rows = 2 + rng.below(5), cols = rows + 1 + rng.below(4);
        ZMatrix Z(rows, std::vector<MultiPoly>(cols, MultiPoly(2)));
        for (auto& r : Z)
            for (auto& e : r) e = random_poly(t, 2, 2, rng);
        auto v = nullspace_polyz(t, Z);
        for (const auto& row : Z) {
            MultiPoly acc(2);
            for (size_t c = 0; c < cols; ++c) acc = add(t, acc, mul(t, row[c], v.v[c]));
            if (!acc.is_zero()) return false;
        }
    }
    return true;
}

bool check_decode() {
    FieldTower t = FieldTower::build(13, 1);
    CodeParams p = make_code_params(t, 1, 6, 12, first_elems(12));
    Rng rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        MultiPoly f = random_poly(t, 1, p.k, rng);
        Codeword w = corrupt_blocks(t, encode_qmult(t, f, p), p, 5, rng);
        DecodeResult res = list_decode(t, w, p, 2);
        bool found = false;
        for (const auto& [cand, ag] : res.candidates) found = found || cand == f;
        if (!found) return false;
    }
    // one multivariate round
    CodeParams pm = make_code_params(t, 2, 6, 4, first_elems(4));
    MultiPoly f = random_poly(t, 2, pm.k, rng);
    Codeword w = corrupt_blocks(t, encode_qmult(t, f, pm), pm, 4, rng);
    DecodeResult res = list_decode(t, w, pm, 2);
    if (!res.paths_agree) return false;
    bool found = false;
    for (const auto& [cand, ag] : res.candidates) found = found || cand == f;
    return found;
}

bool check_io() {
    FieldTower t = FieldTower::build(2, 2);
    CodeParams p = make_code_params(t, 1, 2, 2, first_elems(3));
    Rng rng(8);
    MultiPoly f = random_poly(t, 1, p.k, rng);
    Codeword w = encode_qmult(t, f, p);
    std::ostringstream os;
    write_codeword_file(os, t, p, w);
    std::istringstream is(os.str());
    CodewordFile cf = read_codeword_file(is);
    return cf.word == w && cf.params == p && cf.tower.header_line() == t.header_line();
}

}  // namespace

bool selftest(std::ostream& os) {
    struct Suite {
        const char* name;
        std::function<bool()> fn;
    };
    const Suite suites[] = {
        {"gf", check_gf},       {"poly", check_poly},     {"qcalc", check_qcalc},
        {"qmult", check_qmult}, {"codes", check_codes},   {"linsys", check_linsys},
        {"decode", check_decode}, {"io", check_io},
    };
    bool all_ok = true;
    for (const Suite& s : suites) {
        bool ok = false;
        std::string err;
        try {
            ok = s.fn();
        } catch (const std::exception& ex) {
            err = ex.what();
        }
        all_ok = all_ok && ok;
        os << (ok ? "[ ok ] " : "[fail] ") << s.name;
        if (!err.empty()) os << " (" << err << ")";
        os << '\n';
    }
    os << (all_ok ? "selftest: pass" : "selftest: FAIL") << '\n';
    return all_ok;
}

}  // namespace qmc
