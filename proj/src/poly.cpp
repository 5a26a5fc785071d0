#include "qmc/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qmc {

uint64_t pack_exp(const ExpVec& e) {
    if (e.empty() || e.size() > kMaxArity) throw std::invalid_argument("pack_exp: arity out of range");
    uint64_t w = 0;
    for (uint32_t x : e) {
        if (x > kMaxExp) throw std::invalid_argument("pack_exp: exponent too large");
        w += x;
    }
    if (w > kMaxExp) throw std::invalid_argument("pack_exp: weight too large");
    uint64_t key = w << 48;
    for (size_t i = 0; i < e.size(); ++i) key |= uint64_t(e[i]) << (36 - 12 * i);
    return key;
}

ExpVec unpack_exp(uint64_t key, uint32_t m) {
    ExpVec e(m);
    for (uint32_t i = 0; i < m; ++i) e[i] = uint32_t((key >> (36 - 12 * i)) & 0xfff);
    return e;
}

uint32_t exp_weight(const ExpVec& e) {
    uint32_t w = 0;
    for (uint32_t x : e) w += x;
    return w;
}

bool exp_leq(const ExpVec& a, const ExpVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("exp_leq: arity mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

namespace {

void enumerate_weight(uint32_t m, uint32_t w, ExpVec& cur, uint32_t pos, std::vector<ExpVec>& out) {
    if (pos + 1 == m) {
        cur[pos] = w;
        out.push_back(cur);
        return;
    }
    for (uint32_t v = 0; v <= w; ++v) {
        cur[pos] = v;
        enumerate_weight(m, w - v, cur, pos + 1, out);
    }
}

}  // namespace

std::vector<ExpVec> exps_of_weight(uint32_t m, uint32_t w) {
    std::vector<ExpVec> out;
    ExpVec cur(m);
    enumerate_weight(m, w, cur, 0, out);
    return out;
}

std::vector<ExpVec> exps_below(uint32_t m, uint32_t s) {
    std::vector<ExpVec> out;
    for (uint32_t w = 0; w < s; ++w) {
        auto layer = exps_of_weight(m, w);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

uint64_t count_below(uint32_t m, uint32_t s) { return binomial(m + s - 1, m); }

namespace {

// number of vectors in N^j with coordinate sum t
uint64_t compositions(uint32_t t, uint32_t j) {
    if (j == 0) return t == 0 ? 1 : 0;
    return binomial(t + j - 1, j - 1);
}

}  // namespace

uint64_t graded_lex_index(const ExpVec& e, uint32_t s) {
    uint32_t m = uint32_t(e.size());
    uint32_t w = exp_weight(e);
    if (w >= s) throw std::invalid_argument("graded_lex_index: weight out of range");
    uint64_t idx = binomial(m + w - 1, m);  // all vectors of smaller weight
    uint32_t rem = w;
    for (uint32_t i = 0; i + 1 < m; ++i) {
        for (uint32_t v = 0; v < e[i]; ++v) idx += compositions(rem - v, m - i - 1);
        rem -= e[i];
    }
    return idx;
}

ExpVec graded_lex_unindex(uint64_t idx, uint32_t m, uint32_t s) {
    if (idx >= count_below(m, s)) throw std::invalid_argument("graded_lex_unindex: index out of range");
    uint32_t w = 0;
    while (binomial(m + w, m) <= idx) ++w;
    idx -= binomial(m + w - 1, m);
    ExpVec e(m);
    uint32_t rem = w;
    for (uint32_t i = 0; i + 1 < m; ++i) {
        uint32_t v = 0;
        for (;; ++v) {
            uint64_t c = compositions(rem - v, m - i - 1);
            if (idx < c) break;
            idx -= c;
        }
        e[i] = v;
        rem -= v;
    }
    e[m - 1] = rem;
    return e;
}

MultiPoly::MultiPoly(uint32_t m) : m_(m) {
    if (m == 0 || m > kMaxArity) throw std::invalid_argument("MultiPoly: arity out of range");
}

MultiPoly MultiPoly::constant(uint32_t m, KElem c) {
    MultiPoly f(m);
    if (c.v != 0) f.terms_.push_back({pack_exp(ExpVec(m, 0)), c});
    return f;
}

MultiPoly MultiPoly::monomial(uint32_t m, const ExpVec& e, KElem c) {
    if (e.size() != m) throw std::invalid_argument("monomial: arity mismatch");
    MultiPoly f(m);
    if (c.v != 0) f.terms_.push_back({pack_exp(e), c});
    return f;
}

MultiPoly MultiPoly::from_terms(uint32_t m, std::vector<Term> terms, const FieldTower& t) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    MultiPoly f(m);
    for (const Term& tm : terms) {
        if (!f.terms_.empty() && f.terms_.back().first == tm.first) {
            f.terms_.back().second = t.add(f.terms_.back().second, tm.second);
            if (f.terms_.back().second.v == 0) f.terms_.pop_back();
        } else if (tm.second.v != 0) {
            f.terms_.push_back(tm);
        }
    }
    return f;
}

MultiPoly MultiPoly::from_sorted_terms(uint32_t m, std::vector<Term> terms) {
    MultiPoly f(m);
    for (size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].second.v == 0) throw std::logic_error("from_sorted_terms: zero coefficient");
        if (i > 0 && terms[i].first <= terms[i - 1].first) throw std::logic_error("from_sorted_terms: keys not ascending");
    }
    f.terms_ = std::move(terms);
    return f;
}

KElem MultiPoly::coeff_key(uint64_t key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return {0};
}

MultiPoly::Term MultiPoly::leading_term() const {
    if (terms_.empty()) throw std::domain_error("leading_term: zero polynomial");
    return terms_.back();
}

MultiPoly add(const FieldTower& t, const MultiPoly& f, const MultiPoly& g) {
    if (f.m_ != g.m_) throw std::invalid_argument("add: arity mismatch");
    MultiPoly r(f.m_);
    r.terms_.reserve(f.terms_.size() + g.terms_.size());
    size_t i = 0, j = 0;
    while (i < f.terms_.size() || j < g.terms_.size()) {
        if (j == g.terms_.size() || (i < f.terms_.size() && f.terms_[i].first < g.terms_[j].first)) {
            r.terms_.push_back(f.terms_[i++]);
        } else if (i == f.terms_.size() || g.terms_[j].first < f.terms_[i].first) {
            r.terms_.push_back(g.terms_[j++]);
        } else {
            KElem c = t.add(f.terms_[i].second, g.terms_[j].second);
            if (c.v != 0) r.terms_.push_back({f.terms_[i].first, c});
            ++i;
            ++j;
        }
    }
    return r;
}

MultiPoly neg(const FieldTower& t, const MultiPoly& f) {
    MultiPoly r = f;
    for (auto& tm : r.terms_) tm.second = t.neg(tm.second);
    return r;
}

MultiPoly sub(const FieldTower& t, const MultiPoly& f, const MultiPoly& g) { return add(t, f, neg(t, g)); }

MultiPoly scale(const FieldTower& t, const MultiPoly& f, KElem c) {
    if (c.v == 0) return MultiPoly(f.m_);
    MultiPoly r = f;
    for (auto& tm : r.terms_) tm.second = t.mul(tm.second, c);
    return r;
}

MultiPoly mul_monomial(const FieldTower& t, const MultiPoly& f, const ExpVec& e, KElem c) {
    if (e.size() != f.m_) throw std::invalid_argument("mul_monomial: arity mismatch");
    if (c.v == 0) return MultiPoly(f.m_);
    uint64_t shift = pack_exp(e);
    MultiPoly r(f.m_);
    r.terms_.reserve(f.terms_.size());
    for (const auto& tm : f.terms_) r.terms_.push_back({tm.first + shift, t.mul(tm.second, c)});
    return r;
}

MultiPoly mul(const FieldTower& t, const MultiPoly& f, const MultiPoly& g) {
    if (f.m_ != g.m_) throw std::invalid_argument("mul: arity mismatch");
    if (f.is_zero() || g.is_zero()) return MultiPoly(f.m_);
    std::vector<MultiPoly::Term> acc;
    acc.reserve(f.terms_.size() * g.terms_.size());
    for (const auto& a : f.terms_)
        for (const auto& b : g.terms_) acc.push_back({a.first + b.first, t.mul(a.second, b.second)});
    return MultiPoly::from_terms(f.m_, std::move(acc), t);
}

KElem eval(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& point) {
    if (point.size() != f.arity()) throw std::invalid_argument("eval: arity mismatch");
    KElem acc{0};
    for (const auto& tm : f.terms()) {
        ExpVec e = unpack_exp(tm.first, f.arity());
        KElem v = tm.second;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) v = t.mul(v, t.pow(point[i], e[i]));
        acc = t.add(acc, v);
    }
    return acc;
}

MultiPoly scale_vars(const FieldTower& t, const MultiPoly& f, const std::vector<KElem>& c) {
    if (c.size() != f.arity()) throw std::invalid_argument("scale_vars: arity mismatch");
    for (KElem ci : c)
        if (ci.v == 0) throw std::invalid_argument("scale_vars: zero scale component");
    std::vector<MultiPoly::Term> acc;
    acc.reserve(f.terms().size());
    for (const auto& tm : f.terms()) {
        ExpVec e = unpack_exp(tm.first, f.arity());
        KElem v = tm.second;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) v = t.mul(v, t.pow(c[i], e[i]));
        acc.push_back({tm.first, v});
    }
    return MultiPoly::from_terms(f.arity(), std::move(acc), t);
}

MultiPoly random_poly(const FieldTower& t, uint32_t m, uint32_t k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("random_poly: degree bound must be >= 1");
    std::vector<MultiPoly::Term> acc;
    for (const ExpVec& e : exps_below(m, k)) {
        KElem c{uint32_t(rng.below(t.k_size()))};
        if (c.v != 0) acc.push_back({pack_exp(e), c});
    }
    return MultiPoly::from_terms(m, std::move(acc), t);
}

std::optional<MultiPoly> exact_divide(const FieldTower& t, const MultiPoly& f, const MultiPoly& g) {
    if (f.arity() != g.arity()) throw std::invalid_argument("exact_divide: arity mismatch");
    if (g.is_zero()) throw std::domain_error("exact_divide: division by zero");
    MultiPoly rem = f;
    MultiPoly quot(f.arity());
    auto [gkey, gc] = g.leading_term();
    ExpVec ge = unpack_exp(gkey, g.arity());
    KElem gci = t.inv(gc);
    std::vector<MultiPoly::Term> qterms;
    while (!rem.is_zero()) {
        auto [rkey, rc] = rem.leading_term();
        ExpVec re = unpack_exp(rkey, rem.arity());
        ExpVec de(re.size());
        for (size_t i = 0; i < re.size(); ++i) {
            if (re[i] < ge[i]) return std::nullopt;
            de[i] = re[i] - ge[i];
        }
        KElem qc = t.mul(rc, gci);
        qterms.push_back({pack_exp(de), qc});
        rem = sub(t, rem, mul_monomial(t, g, de, qc));
    }
    return MultiPoly::from_terms(f.arity(), std::move(qterms), t);
}

std::string poly_to_string(const MultiPoly& f) {
    std::ostringstream os;
    os << "m=" << f.arity() << ";";
    for (const auto& tm : f.terms()) {
        ExpVec e = unpack_exp(tm.first, f.arity());
        os << " " << tm.second.v << "@";
        for (size_t i = 0; i < e.size(); ++i) {
            if (i) os << ',';
            os << e[i];
        }
        os << ";";
    }
    return os.str();
}

MultiPoly poly_parse(const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : s) {
        if (ch == ';') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    // trailing text after the last ';' must be whitespace
    for (char ch : cur)
        if (!isspace(uint8_t(ch))) throw ParseError("poly: trailing junk: " + cur);
    auto strip = [](const std::string& x) {
        size_t a = x.find_first_not_of(" \t");
        if (a == std::string::npos) return std::string();
        size_t b = x.find_last_not_of(" \t");
        return x.substr(a, b - a + 1);
    };
    if (fields.empty()) throw ParseError("poly: empty text");
    std::string head = strip(fields[0]);
    if (head.rfind("m=", 0) != 0) throw ParseError("poly: expected m=<arity>");
    uint32_t m = 0;
    try {
        m = uint32_t(std::stoul(head.substr(2)));
    } catch (...) {
        throw ParseError("poly: bad arity");
    }
    if (m == 0 || m > kMaxArity) throw ParseError("poly: arity out of range");
    std::vector<MultiPoly::Term> terms;
    for (size_t i = 1; i < fields.size(); ++i) {
        std::string tm = strip(fields[i]);
        if (tm.empty()) continue;
        auto at = tm.find('@');
        if (at == std::string::npos) throw ParseError("poly: term missing @: " + tm);
        uint64_t cv = 0;
        try {
            cv = std::stoull(tm.substr(0, at));
        } catch (...) {
            throw ParseError("poly: bad coefficient: " + tm);
        }
        ExpVec e;
        std::stringstream es(tm.substr(at + 1));
        std::string part;
        while (std::getline(es, part, ',')) {
            try {
                e.push_back(uint32_t(std::stoul(part)));
            } catch (...) {
                throw ParseError("poly: bad exponent: " + tm);
            }
        }
        if (e.size() != m) throw ParseError("poly: exponent arity mismatch: " + tm);
        if (cv == 0) throw ParseError("poly: explicit zero coefficient: " + tm);
        terms.push_back({pack_exp(e), KElem{uint32_t(cv)}});
    }
    // duplicates are malformed input rather than something to silently merge
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < terms.size(); ++i)
        if (terms[i].first == terms[i - 1].first) throw ParseError("poly: duplicate term");
    return MultiPoly::from_sorted_terms(m, std::move(terms));
}

UniPoly add(const FieldTower& t, const UniPoly& f, const UniPoly& g) {
    std::vector<KElem> c(std::max(f.c_.size(), g.c_.size()), KElem{0});
    for (size_t i = 0; i < c.size(); ++i) {
        KElem a = i < f.c_.size() ? f.c_[i] : KElem{0};
        KElem b = i < g.c_.size() ? g.c_[i] : KElem{0};
        c[i] = t.add(a, b);
    }
    return UniPoly(std::move(c));
}

UniPoly sub(const FieldTower& t, const UniPoly& f, const UniPoly& g) {
    std::vector<KElem> c(std::max(f.c_.size(), g.c_.size()), KElem{0});
    for (size_t i = 0; i < c.size(); ++i) {
        KElem a = i < f.c_.size() ? f.c_[i] : KElem{0};
        KElem b = i < g.c_.size() ? g.c_[i] : KElem{0};
        c[i] = t.sub(a, b);
    }
    return UniPoly(std::move(c));
}

UniPoly mul(const FieldTower& t, const UniPoly& f, const UniPoly& g) {
    if (f.is_zero() || g.is_zero()) return UniPoly();
    std::vector<KElem> c(f.c_.size() + g.c_.size() - 1, KElem{0});
    for (size_t i = 0; i < f.c_.size(); ++i) {
        if (f.c_[i].v == 0) continue;
        for (size_t j = 0; j < g.c_.size(); ++j) c[i + j] = t.add(c[i + j], t.mul(f.c_[i], g.c_[j]));
    }
    return UniPoly(std::move(c));
}

UniPoly scale(const FieldTower& t, const UniPoly& f, KElem s) {
    if (s.v == 0) return UniPoly();
    std::vector<KElem> c = f.c_;
    for (auto& x : c) x = t.mul(x, s);
    return UniPoly(std::move(c));
}

KElem eval(const FieldTower& t, const UniPoly& f, KElem x) {
    KElem acc{0};
    for (size_t i = f.coeffs().size(); i-- > 0;) acc = t.add(t.mul(acc, x), f.coeffs()[i]);
    return acc;
}

UniPoly to_unipoly(const MultiPoly& f) {
    if (f.arity() != 1) throw std::invalid_argument("to_unipoly: arity must be 1");
    std::vector<KElem> c;
    for (const auto& tm : f.terms()) {
        uint32_t d = key_weight(tm.first);
        if (c.size() <= d) c.resize(d + 1, KElem{0});
        c[d] = tm.second;
    }
    return UniPoly(std::move(c));
}

MultiPoly to_multipoly(const UniPoly& f) {
    std::vector<MultiPoly::Term> acc;
    for (size_t i = 0; i < f.coeffs().size(); ++i)
        if (f.coeffs()[i].v != 0) acc.push_back({pack_exp({uint32_t(i)}), f.coeffs()[i]});
    return MultiPoly::from_sorted_terms(1, std::move(acc));
}

}  // namespace qmc
