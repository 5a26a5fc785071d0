#include "qmc/qmult.hpp"

#include <map>
#include <set>
#include <sstream>

namespace qmc {

namespace {

// Derivative polynomials D^g f, built one variable step at a time and shared
// across evaluation points.
class DerivChain {
   public:
    DerivChain(const FieldTower& t, const MultiPoly& f) : t_(t) { cache_[pack_exp(ExpVec(f.arity(), 0))] = f; }

    const MultiPoly& get(const ExpVec& g) {
        uint64_t key = pack_exp(g);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        ExpVec parent = g;
        uint32_t var = 0;
        for (uint32_t i = 0; i < g.size(); ++i) {
            if (g[i] > 0) {
                var = i;
                break;
            }
        }
        parent[var] -= 1;
        ExpVec step(g.size(), 0);
        step[var] = 1;
        MultiPoly d = q_derive_multi(t_, get(parent), step);
        return cache_.emplace(key, std::move(d)).first->second;
    }

   private:
    const FieldTower& t_;
    std::map<uint64_t, MultiPoly> cache_;
};

uint32_t multiplicity_at(const FieldTower& t, DerivChain& chain, uint32_t m, int deg,
                         const std::vector<KElem>& a) {
    for (uint32_t k = 0; k <= uint32_t(deg); ++k) {
        for (const ExpVec& g : exps_of_weight(m, k)) {
            if (eval(t, chain.get(g), a).v != 0) return k;
        }
    }
    throw std::logic_error("q_multiplicity: exceeded the degree bound");
}

void check_grid_args(const FieldTower& t, const std::vector<FqElem>& A) {
    if (A.empty()) throw std::invalid_argument("grid: A must be nonempty");
    std::set<uint32_t> seen;
    for (FqElem a : A) {
        if (a.v == 0) throw std::invalid_argument("grid: A must avoid zero");
        if (a.v >= t.q()) throw std::invalid_argument("grid: A element outside F_q");
        if (!seen.insert(a.v).second) throw std::invalid_argument("grid: A elements must be distinct");
    }
}

}  // namespace

uint32_t q_multiplicity(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& a) {
    if (f.is_zero()) throw std::domain_error("q_multiplicity: zero polynomial (multiplicity -inf)");
    if (a.size() != f.arity()) throw std::invalid_argument("q_multiplicity: arity mismatch");
    DerivChain chain(t, f);
    return multiplicity_at(t, chain, f.arity(), f.total_degree(), a);
}

std::vector<std::vector<KElem>> grid_points(const FieldTower& t, const std::vector<FqElem>& A, uint32_t m) {
    check_grid_args(t, A);
    uint64_t n = 1;
    for (uint32_t i = 0; i < m; ++i) n *= A.size();
    std::vector<std::vector<KElem>> pts;
    pts.reserve(n);
    for (uint64_t idx = 0; idx < n; ++idx) {
        std::vector<KElem> p(m);
        uint64_t v = idx;
        for (uint32_t i = m; i-- > 0;) {
            p[i] = t.embed(A[v % A.size()]);
            v /= A.size();
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

MultiplicityReport grid_multiplicity_report(const FieldTower& t, const MultiPoly& f,
                                            const std::vector<FqElem>& A, uint32_t m, uint32_t s) {
    if (f.is_zero()) throw std::domain_error("grid_multiplicity_report: zero polynomial");
    if (f.arity() != m) throw std::invalid_argument("grid_multiplicity_report: arity mismatch");
    if (s < 1) throw std::invalid_argument("grid_multiplicity_report: s >= 1 required");
    if (uint64_t(f.total_degree()) >= t.bracket3_int())
        throw RegimeError("grid_multiplicity_report: deg f < [3]_q required");
    check_grid_args(t, A);

    MultiplicityReport rep;
    rep.m = m;
    rep.s = s;
    rep.A = A;
    DerivChain chain(t, f);
    for (const auto& p : grid_points(t, A, m)) {
        uint32_t mu = multiplicity_at(t, chain, m, f.total_degree(), p);
        rep.per_point.push_back(mu);
        rep.total += mu;
        if (mu >= s) rep.count_ge_s++;
    }
    uint64_t pw = 1;
    for (uint32_t i = 0; i + 1 < m; ++i) pw *= A.size();
    rep.total_bound = uint64_t(f.total_degree()) * pw;
    rep.count_bound = rep.total_bound / s;
    rep.total_ok = rep.total <= rep.total_bound;
    rep.count_ok = rep.count_ge_s <= rep.count_bound;
    return rep;
}

std::string MultiplicityReport::to_csv() const {
    std::ostringstream os;
    os << "point,multiplicity\n";
    uint64_t n = per_point.size();
    for (uint64_t idx = 0; idx < n; ++idx) {
        uint64_t v = idx;
        std::vector<uint32_t> coords(m);
        for (uint32_t i = m; i-- > 0;) {
            coords[i] = A[v % A.size()].v;
            v /= A.size();
        }
        for (uint32_t i = 0; i < m; ++i) {
            if (i) os << ';';
            os << coords[i];
        }
        os << ',' << per_point[idx] << '\n';
    }
    os << "# s=" << s << " total=" << total << " total_bound=" << total_bound << " total_ok=" << (total_ok ? 1 : 0)
       << " count_ge_s=" << count_ge_s << " count_bound=" << count_bound << " count_ok=" << (count_ok ? 1 : 0)
       << '\n';
    return os.str();
}

std::vector<MultiPoly> grobner_generators(const FieldTower& t, const std::vector<FqElem>& A, uint32_t m,
                                          uint32_t s) {
    check_grid_args(t, A);
    if (s < 1) throw std::invalid_argument("grobner_generators: s >= 1 required");
    std::vector<MultiPoly> gens;
    for (const ExpVec& g : exps_of_weight(m, s)) {
        MultiPoly prod = MultiPoly::constant(m, t.one());
        for (uint32_t i = 0; i < m; ++i) {
            ExpVec xi(m, 0);
            xi[i] = 1;
            for (uint32_t u = 0; u < g[i]; ++u) {
                for (FqElem a : A) {
                    KElem root = t.mul(t.q_power(u), t.embed(a));
                    prod = mul(t, prod,
                               add(t, MultiPoly::monomial(m, xi, t.one()), MultiPoly::constant(m, t.neg(root))));
                }
            }
        }
        gens.push_back(std::move(prod));
    }
    return gens;
}

MultiplicityChecks lemma_multiplicity_checks(const FieldTower& t, const MultiPoly& f,
                                             const std::vector<KElem>& a, const ExpVec& g) {
    if (f.is_zero()) throw std::domain_error("lemma_multiplicity_checks: zero polynomial");
    uint32_t m = f.arity();
    if (a.size() != m || g.size() != m) throw std::invalid_argument("lemma_multiplicity_checks: arity mismatch");

    MultiplicityChecks out;
    uint32_t mu_f = q_multiplicity(t, f, a);
    MultiPoly df = q_derive_multi(t, f, g);
    uint32_t w = exp_weight(g);

    if (df.is_zero()) {
        out.derivative_ok = true;  // infinite multiplicity dominates everything
    } else {
        uint32_t mu_df = q_multiplicity(t, df, a);
        out.derivative_ok = (mu_df + w >= mu_f);
        if (!out.derivative_ok)
            out.detail = "derivative inequality failed: mu(D^g f)=" + std::to_string(mu_df) +
                         " mu(f)=" + std::to_string(mu_f) + " |g|=" + std::to_string(w);
    }

    // restriction to the last variable
    if (df.is_zero()) {
        out.restriction_ok = true;
    } else {
        std::vector<MultiPoly::Term> acc;
        for (const auto& tm : df.terms()) {
            ExpVec e = unpack_exp(tm.first, m);
            KElem c = tm.second;
            for (uint32_t i = 0; i + 1 < m; ++i)
                if (e[i] > 0) c = t.mul(c, t.pow(a[i], e[i]));
            if (c.v != 0) acc.push_back({pack_exp({e[m - 1]}), c});
        }
        MultiPoly h = MultiPoly::from_terms(1, std::move(acc), t);
        if (h.is_zero()) {
            out.restriction_ok = true;  // lemma precondition void
        } else {
            uint32_t mu_full = q_multiplicity(t, df, a);
            uint32_t mu_line = q_multiplicity(t, h, {a[m - 1]});
            out.restriction_ok = (mu_full <= mu_line);
            if (!out.restriction_ok)
                out.detail += " restriction inequality failed: mu=" + std::to_string(mu_full) +
                              " line=" + std::to_string(mu_line);
        }
    }
    return out;
}

}  // namespace qmc
