#include "qmc/gf.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace qmc {

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> fs;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

namespace {

// ---- F_p[X] helpers used only during construction ----

using PPoly = std::vector<uint32_t>;  // coefficients mod p, low degree first

void ppoly_trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly ppoly_mul_mod(const PPoly& a, const PPoly& b, const PPoly& mod, uint32_t p) {
    PPoly r(a.size() + b.size() - 1 > 0 ? a.size() + b.size() - 1 : 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + uint64_t(a[i]) * b[j]) % p;
    }
    // reduce modulo the monic polynomial `mod`
    size_t deg_m = mod.size() - 1;
    for (size_t i = r.size(); i-- > deg_m;) {
        uint32_t c = r[i];
        if (c == 0) continue;
        r[i] = 0;
        for (size_t j = 0; j < deg_m; ++j) {
            uint64_t sub = (uint64_t(c) * mod[j]) % p;
            r[i - deg_m + j] = (r[i - deg_m + j] + p - sub) % p;
        }
    }
    r.resize(deg_m, 0);
    return r;
}

PPoly ppoly_pow_mod(PPoly base, uint64_t t, const PPoly& mod, uint32_t p) {
    PPoly r{1};
    r.resize(mod.size() - 1, 0);
    base.resize(mod.size() - 1, 0);
    while (t > 0) {
        if (t & 1) r = ppoly_mul_mod(r, base, mod, p);
        base = ppoly_mul_mod(base, base, mod, p);
        t >>= 1;
    }
    return r;
}

// Rabin irreducibility test for a monic polynomial over F_p.
bool ppoly_irreducible(const PPoly& f, uint32_t p) {
    uint32_t e = uint32_t(f.size() - 1);
    if (e == 0) return false;
    if (e == 1) return true;
    PPoly x{0, 1};
    // X^(p^e) == X mod f
    PPoly t = x;
    for (uint32_t i = 0; i < e; ++i) t = ppoly_pow_mod(t, p, f, p);
    PPoly xr = x;
    xr.resize(f.size() - 1, 0);
    ppoly_trim(t);
    PPoly xt = xr;
    ppoly_trim(xt);
    if (t != xt) return false;
    // X^(p^(e/l)) != X mod f for every prime l | e
    for (uint64_t l : prime_factors(e)) {
        PPoly u = x;
        for (uint32_t i = 0; i < e / l; ++i) u = ppoly_pow_mod(u, p, f, p);
        ppoly_trim(u);
        if (u == xt) return false;
    }
    return true;
}

constexpr uint32_t kMaxQ = 128;  // keeps the q^3-sized log tables small

}  // namespace

FqElem FieldTower::fq_inv(FqElem a) const {
    if (a.v == 0) throw std::domain_error("fq_inv: zero has no inverse");
    return {fq_inv_[a.v]};
}

KElem FieldTower::add(KElem a, KElem b) const {
    uint32_t a0 = a.v % q_, a1 = (a.v / q_) % q_, a2 = a.v / (q_ * q_);
    uint32_t b0 = b.v % q_, b1 = (b.v / q_) % q_, b2 = b.v / (q_ * q_);
    uint32_t c0 = fq_add_[a0 * q_ + b0], c1 = fq_add_[a1 * q_ + b1], c2 = fq_add_[a2 * q_ + b2];
    return {c0 + c1 * q_ + c2 * q_ * q_};
}

KElem FieldTower::neg(KElem a) const {
    uint32_t a0 = a.v % q_, a1 = (a.v / q_) % q_, a2 = a.v / (q_ * q_);
    return {fq_neg_[a0] + fq_neg_[a1] * q_ + fq_neg_[a2] * q_ * q_};
}

KElem FieldTower::inv(KElem a) const {
    if (a.v == 0) throw std::domain_error("inv: zero has no inverse");
    uint64_t l = k_log_[a.v];
    return k_exp_[(group_order() - l) % group_order()];
}

KElem FieldTower::pow(KElem a, int64_t t) const {
    if (a.v == 0) {
        if (t == 0) return one();
        if (t < 0) throw std::domain_error("pow: negative power of zero");
        return zero();
    }
    int64_t ord = int64_t(group_order());
    int64_t r = ((int64_t(k_log_[a.v]) * (t % ord)) % ord + ord) % ord;
    return k_exp_[r];
}

KElem FieldTower::q_power(int64_t t) const {
    int64_t ord = int64_t(group_order());
    int64_t r = (t % ord + ord) % ord;
    return k_exp_[r];
}

bool FieldTower::in_subfield(KElem x) const {
    if (x.v == 0) return true;
    uint64_t l = (uint64_t(k_log_[x.v]) * q_) % group_order();
    return k_exp_[l] == x;
}

uint64_t FieldTower::order(KElem a) const {
    if (a.v == 0) throw std::domain_error("order: zero element");
    uint64_t n = group_order();
    uint64_t d = std::gcd(uint64_t(k_log_[a.v]), n);
    return n / d;
}

uint64_t FieldTower::dlog(KElem a) const {
    if (a.v == 0) throw std::domain_error("dlog: zero element");
    return k_log_[a.v];
}

FieldTower FieldTower::build(uint32_t p, uint32_t e) {
    if (!is_prime(p)) throw std::invalid_argument("build_tower: p must be prime");
    if (e == 0) throw std::invalid_argument("build_tower: e must be positive");
    uint64_t q = 1;
    for (uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxQ) throw std::invalid_argument("build_tower: q = p^e exceeds supported size");
    }
    if (q < 4) throw std::invalid_argument("build_tower: p^e >= 4 required");

    FieldTower t;
    t.p_ = p;
    t.e_ = e;
    t.q_ = uint32_t(q);
    t.k_size_ = uint32_t(q * q * q);

    // canonical F_q modulus: ascending scan over lower coefficients
    for (uint64_t enc = 0;; ++enc) {
        if (enc >= q) throw std::logic_error("build_tower: no irreducible F_q modulus found");
        PPoly f(e + 1, 0);
        uint64_t v = enc;
        for (uint32_t i = 0; i < e; ++i) {
            f[i] = uint32_t(v % p);
            v /= p;
        }
        f[e] = 1;
        if (ppoly_irreducible(f, p)) {
            t.fq_modulus_.assign(f.begin(), f.end());
            break;
        }
    }

    t.init_tables();
    return t;
}

FieldTower FieldTower::from_parts(uint32_t p, uint32_t e, const std::vector<uint32_t>& fq_modulus,
                                  const std::vector<FqElem>& k_modulus, KElem q_gen) {
    if (!is_prime(p)) throw std::invalid_argument("from_parts: p must be prime");
    if (e == 0 || fq_modulus.size() != e + 1 || fq_modulus[e] != 1)
        throw std::invalid_argument("from_parts: bad F_q modulus");
    uint64_t q = 1;
    for (uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxQ) throw std::invalid_argument("from_parts: q exceeds supported size");
    }
    if (q < 4) throw std::invalid_argument("from_parts: p^e >= 4 required");
    for (uint32_t c : fq_modulus)
        if (c >= p) throw std::invalid_argument("from_parts: F_q modulus coefficient out of range");
    PPoly f(fq_modulus.begin(), fq_modulus.end());
    if (!ppoly_irreducible(f, p)) throw std::invalid_argument("from_parts: F_q modulus not irreducible");

    FieldTower t;
    t.p_ = p;
    t.e_ = e;
    t.q_ = uint32_t(q);
    t.k_size_ = uint32_t(q * q * q);
    t.fq_modulus_ = fq_modulus;
    t.k_modulus_ = k_modulus;  // validated inside init_tables
    t.q_gen_ = q_gen;
    t.init_tables();
    return t;
}

void FieldTower::init_tables() {
    const uint32_t p = p_, e = e_, q = q_;

    // F_q tables by direct polynomial arithmetic over F_p
    fq_add_.assign(size_t(q) * q, 0);
    fq_mul_.assign(size_t(q) * q, 0);
    fq_neg_.assign(q, 0);
    fq_inv_.assign(q, 0);

    auto decomp = [&](uint32_t v) {
        PPoly c(e, 0);
        for (uint32_t i = 0; i < e; ++i) {
            c[i] = v % p;
            v /= p;
        }
        return c;
    };
    auto recomp = [&](const PPoly& c) {
        uint32_t v = 0;
        for (uint32_t i = e; i-- > 0;) v = v * p + (i < c.size() ? c[i] : 0);
        return v;
    };

    PPoly fmod(fq_modulus_.begin(), fq_modulus_.end());
    for (uint32_t a = 0; a < q; ++a) {
        PPoly ca = decomp(a);
        PPoly na(e);
        for (uint32_t i = 0; i < e; ++i) na[i] = (p - ca[i]) % p;
        fq_neg_[a] = recomp(na);
        for (uint32_t b = 0; b < q; ++b) {
            PPoly cb = decomp(b);
            PPoly s(e);
            for (uint32_t i = 0; i < e; ++i) s[i] = (ca[i] + cb[i]) % p;
            fq_add_[size_t(a) * q + b] = recomp(s);
            fq_mul_[size_t(a) * q + b] = recomp(ppoly_mul_mod(ca, cb, fmod, p));
        }
    }
    for (uint32_t a = 1; a < q; ++a) {
        for (uint32_t b = 1; b < q; ++b) {
            if (fq_mul_[size_t(a) * q + b] == 1) {
                fq_inv_[a] = b;
                break;
            }
        }
        if (fq_inv_[a] == 0) throw std::logic_error("init_tables: F_q element without inverse");
    }

    // direct K = F_q[Y]/(k_modulus) arithmetic, used to bootstrap the log tables
    auto kd = [&](uint32_t v) { return std::array<uint32_t, 3>{v % q, (v / q) % q, v / (q * q)}; };
    auto kr = [&](const std::array<uint32_t, 3>& c) { return c[0] + c[1] * q + c[2] * q * q; };

    auto k_mul_direct = [&](uint32_t a, uint32_t b) -> uint32_t {
        auto ca = kd(a), cb = kd(b);
        uint32_t prod[5] = {0, 0, 0, 0, 0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                prod[i + j] = fq_add_[size_t(prod[i + j]) * q + fq_mul_[size_t(ca[i]) * q + cb[j]]];
        // reduce with monic degree-3 modulus: Y^3 = -(m0 + m1 Y + m2 Y^2)
        for (int i = 4; i >= 3; --i) {
            uint32_t c = prod[i];
            if (c == 0) continue;
            prod[i] = 0;
            for (int j = 0; j < 3; ++j) {
                uint32_t sub = fq_mul_[size_t(c) * q + k_modulus_[j].v];
                prod[i - 3 + j] = fq_add_[size_t(prod[i - 3 + j]) * q + fq_neg_[sub]];
            }
        }
        return kr({prod[0], prod[1], prod[2]});
    };
    auto k_pow_direct = [&](uint32_t a, uint64_t t) -> uint32_t {
        uint32_t r = 1;
        while (t > 0) {
            if (t & 1) r = k_mul_direct(r, a);
            a = k_mul_direct(a, a);
            t >>= 1;
        }
        return r;
    };

    if (k_modulus_.empty()) {
        // canonical K modulus: ascending scan over lower coefficients,
        // irreducible over F_q iff rootless (degree 3)
        for (uint64_t enc = 0;; ++enc) {
            if (enc >= uint64_t(q) * q * q) throw std::logic_error("init_tables: no irreducible K modulus found");
            std::array<uint32_t, 3> c{uint32_t(enc % q), uint32_t((enc / q) % q), uint32_t((enc / q / q) % q)};
            bool has_root = false;
            for (uint32_t x = 0; x < q && !has_root; ++x) {
                // Horner: ((1*x + c2)*x + c1)*x + c0
                uint32_t v = x;  // leading coefficient 1 times x
                v = fq_add_[size_t(v) * q + c[2]];
                v = fq_mul_[size_t(v) * q + x];
                v = fq_add_[size_t(v) * q + c[1]];
                v = fq_mul_[size_t(v) * q + x];
                v = fq_add_[size_t(v) * q + c[0]];
                has_root = (v == 0);
            }
            if (!has_root) {
                k_modulus_ = {FqElem{c[0]}, FqElem{c[1]}, FqElem{c[2]}, FqElem{1}};
                break;
            }
        }
    } else {
        if (k_modulus_.size() != 4 || k_modulus_[3].v != 1)
            throw std::invalid_argument("init_tables: K modulus must be monic of degree 3");
        for (const FqElem& c : k_modulus_)
            if (c.v >= q) throw std::invalid_argument("init_tables: K modulus coefficient out of range");
        for (uint32_t x = 0; x < q; ++x) {
            uint32_t v = x;
            v = fq_add_[size_t(v) * q + k_modulus_[2].v];
            v = fq_mul_[size_t(v) * q + x];
            v = fq_add_[size_t(v) * q + k_modulus_[1].v];
            v = fq_mul_[size_t(v) * q + x];
            v = fq_add_[size_t(v) * q + k_modulus_[0].v];
            if (v == 0) throw std::invalid_argument("init_tables: K modulus has a root in F_q");
        }
    }

    const uint64_t ord = uint64_t(k_size_) - 1;
    std::vector<uint64_t> maximal = prime_factors(ord);

    auto has_full_order = [&](uint32_t x) {
        for (uint64_t l : maximal)
            if (k_pow_direct(x, ord / l) == 1) return false;
        return true;
    };

    if (q_gen_.v == 0) {
        uint32_t found = 0;
        for (uint32_t x = 2; x < k_size_; ++x) {
            if (has_full_order(x)) {
                found = x;
                break;
            }
        }
        if (found == 0) throw std::logic_error("init_tables: no multiplicative generator found");
        q_gen_ = {found};
    } else {
        if (q_gen_.v == 0 || q_gen_.v >= k_size_ || !has_full_order(q_gen_.v))
            throw std::invalid_argument("init_tables: supplied Q does not generate K^x");
    }

    k_exp_.assign(2 * ord, KElem{0});
    k_log_.assign(k_size_, 0);
    uint32_t acc = 1;
    for (uint64_t t = 0; t < ord; ++t) {
        k_exp_[t] = {acc};
        k_exp_[t + ord] = {acc};
        k_log_[acc] = uint32_t(t);
        acc = k_mul_direct(acc, q_gen_.v);
    }
    if (acc != 1) throw std::logic_error("init_tables: generator order mismatch");
}

std::string FieldTower::header_line() const {
    std::ostringstream os;
    os << "QMC1 p=" << p_ << " e=" << e_ << " fqmod=";
    for (size_t i = 0; i < fq_modulus_.size(); ++i) {
        if (i) os << ',';
        os << fq_modulus_[i];
    }
    os << " kmod=";
    for (size_t i = 0; i < k_modulus_.size(); ++i) {
        if (i) os << ',';
        os << k_modulus_[i].v;
    }
    os << " Q=" << q_gen_.v;
    return os.str();
}

namespace {

std::vector<uint32_t> parse_csv_u32(const std::string& s) {
    std::vector<uint32_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw ParseError("empty CSV field");
        size_t pos = 0;
        unsigned long v = std::stoul(tok, &pos);
        if (pos != tok.size()) throw ParseError("bad integer: " + tok);
        out.push_back(uint32_t(v));
    }
    return out;
}

}  // namespace

FieldTower FieldTower::parse_header(const std::string& line) {
    std::istringstream is(line);
    std::string magic;
    is >> magic;
    if (magic != "QMC1") throw ParseError("tower header: expected QMC1");
    uint32_t p = 0, e = 0;
    std::vector<uint32_t> fqmod;
    std::vector<FqElem> kmod;
    KElem qg{0};
    std::string tok;
    bool saw_p = false, saw_e = false, saw_f = false, saw_k = false, saw_q = false;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("tower header: bad token " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "p") {
                p = uint32_t(std::stoul(val));
                saw_p = true;
            } else if (key == "e") {
                e = uint32_t(std::stoul(val));
                saw_e = true;
            } else if (key == "fqmod") {
                fqmod = parse_csv_u32(val);
                saw_f = true;
            } else if (key == "kmod") {
                for (uint32_t v : parse_csv_u32(val)) kmod.push_back({v});
                saw_k = true;
            } else if (key == "Q") {
                qg = {uint32_t(std::stoul(val))};
                saw_q = true;
            } else {
                throw ParseError("tower header: unknown key " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("tower header: bad value for " + key);
        } catch (const std::out_of_range&) {
            throw ParseError("tower header: value out of range for " + key);
        }
    }
    if (!(saw_p && saw_e && saw_f && saw_k && saw_q)) throw ParseError("tower header: missing fields");
    try {
        return from_parts(p, e, fqmod, kmod, qg);
    } catch (const std::invalid_argument& ex) {
        throw ParseError(std::string("tower header: ") + ex.what());
    }
}

}  // namespace qmc
