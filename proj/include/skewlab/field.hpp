#ifndef SKEWLAB_FIELD_HPP
#define SKEWLAB_FIELD_HPP

// Exact arithmetic for prime fields F_p, finite extensions F_{p^k} and
// cyclotomic fields Q(zeta_m), together with their automorphisms
// (Frobenius powers, Galois maps zeta -> zeta^u).
//
// Finite fields are table-driven (desk scale); characteristic-0 elements are
// coefficient vectors over Q in the power basis, reduced modulo the exact
// integer cyclotomic polynomial Phi_m. Everything is immutable after
// construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numbers.hpp"

namespace skewlab {

enum class FieldKind { Prime, FiniteExt, Cyclotomic };

class Field;
using FieldPtr = std::shared_ptr<const Field>;

namespace detail {

// --- dense polynomial helpers over int64 mod p (little-endian coeffs) ---

inline void zp_trim(std::vector<int64_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int64_t> zp_mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int64_t> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    zp_trim(c);
    return c;
}

inline int64_t zp_inv_scalar(int64_t a, int64_t p) {
    // extended Euclid on scalars
    int64_t t = 0, newt = 1, r = p, newr = mod_pos(a, p);
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw DivisionByZero("not invertible mod p");
    return mod_pos(t, p);
}

// remainder of a by monic-izable b
inline std::vector<int64_t> zp_rem(std::vector<int64_t> a, const std::vector<int64_t>& b, int64_t p) {
    zp_trim(a);
    if (b.empty()) throw DivisionByZeroPoly();
    int64_t lead_inv = zp_inv_scalar(b.back(), p);
    while (a.size() >= b.size()) {
        int64_t c = (a.back() * lead_inv) % p;
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = mod_pos(a[shift + i] - c * b[i], p);
        zp_trim(a);
    }
    return a;
}

// does some monic factor of degree in [1, deg(f)/2] divide f?  (exhaustive)
inline bool zp_has_small_factor(const std::vector<int64_t>& f, int64_t p) {
    const size_t deg = f.size() - 1;
    for (size_t d = 1; 2 * d <= deg; ++d) {
        // enumerate monic candidates of degree d
        std::vector<int64_t> cand(d + 1, 0);
        cand[d] = 1;
        int64_t total = pow_i64(p, static_cast<int64_t>(d));
        for (int64_t idx = 0; idx < total; ++idx) {
            int64_t t = idx;
            for (size_t i = 0; i < d; ++i) {
                cand[i] = t % p;
                t /= p;
            }
            if (zp_rem(f, cand, p).empty()) return true;
        }
    }
    return false;
}

// --- dense polynomial helpers over Q (little-endian) ---

using QPoly = std::vector<Rational>;

inline void q_trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline QPoly q_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly c(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    q_trim(c);
    return c;
}

inline QPoly q_sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    q_trim(a);
    return a;
}

// a mod b, b nonzero
inline QPoly q_rem(QPoly a, const QPoly& b) {
    q_trim(a);
    if (b.empty()) throw DivisionByZeroPoly();
    while (a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a.pop_back();
        q_trim(a);
    }
    return a;
}

inline QPoly q_divq(QPoly a, const QPoly& b, QPoly* rem_out = nullptr) {
    q_trim(a);
    if (b.empty()) throw DivisionByZeroPoly();
    QPoly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size()) {
        Rational c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    q_trim(q);
    if (rem_out) *rem_out = a;
    return q;
}

// extended gcd: returns g and u with u*a ≡ g mod b
inline void q_xgcd_mod(const QPoly& a, const QPoly& b, QPoly& g, QPoly& u) {
    QPoly r0 = b, r1 = a;
    QPoly u0 = {}, u1 = {Rational(1)};
    q_trim(r1);
    while (!r1.empty()) {
        QPoly rem;
        QPoly q = q_divq(r0, r1, &rem);
        QPoly u2 = q_sub(u0, q_mul(q, u1));
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = u2;
    }
    g = r0;
    u = u0;
}

// exact cyclotomic polynomial Phi_m over Z, little-endian
inline std::vector<Int> cyclotomic_poly(int64_t m) {
    // Phi_m = (X^m - 1) / prod_{d | m, d < m} Phi_d, exact integer division
    std::vector<std::vector<Int>> memo(static_cast<size_t>(m) + 1);
    for (int64_t d = 1; d <= m; ++d) {
        if (m % d != 0) continue;
        std::vector<Int> num(static_cast<size_t>(d) + 1, Int(0));
        num[0] = -1;
        num.back() = 1;  // X^d - 1
        for (int64_t e = 1; e < d; ++e) {
            if (d % e != 0) continue;
            const std::vector<Int>& div = memo[static_cast<size_t>(e)];
            // exact division num /= div (monic divisor)
            std::vector<Int> quo(num.size() - div.size() + 1, Int(0));
            for (size_t qi = quo.size(); qi-- > 0;) {
                Int c = num[qi + div.size() - 1];
                quo[qi] = c;
                for (size_t i = 0; i < div.size(); ++i) num[qi + i] -= c * div[i];
            }
            num = quo;
        }
        memo[static_cast<size_t>(d)] = num;
    }
    return memo[static_cast<size_t>(m)];
}

}  // namespace detail

class FieldElem;
class FieldAuto;

class Field : public std::enable_shared_from_this<Field> {
  public:
    static constexpr int64_t kMaxTableOrder = 1024;

    static FieldPtr prime(int64_t p) {
        if (!is_prime_i64(p)) throw UnsupportedField("characteristic must be prime: " + std::to_string(p));
        auto f = std::shared_ptr<Field>(new Field());
        f->kind_ = FieldKind::Prime;
        f->p_ = p;
        f->deg_ = 1;
        f->defpoly_ = {0, 1};  // X
        f->q_ = p;
        f->key_ = "gf(" + std::to_string(p) + ")";
        f->build_tables();
        return f;
    }

    // monic defining polynomial given little-endian, coefficients mod p
    static FieldPtr finite_ext(int64_t p, std::vector<int64_t> defpoly) {
        if (!is_prime_i64(p)) throw UnsupportedField("characteristic must be prime: " + std::to_string(p));
        for (auto& c : defpoly) c = mod_pos(c, p);
        detail::zp_trim(defpoly);
        if (defpoly.size() < 3 || defpoly.back() != 1)
            throw UnsupportedField("defining polynomial must be monic of degree >= 2");
        if (detail::zp_has_small_factor(defpoly, p))
            throw ValidationError("defining polynomial is reducible over F_" + std::to_string(p));
        auto f = std::shared_ptr<Field>(new Field());
        f->kind_ = FieldKind::FiniteExt;
        f->p_ = p;
        f->deg_ = static_cast<int64_t>(defpoly.size()) - 1;
        f->defpoly_ = defpoly;
        f->q_ = pow_i64(p, f->deg_);
        if (f->q_ > kMaxTableOrder)
            throw UnsupportedField("finite field order exceeds desk-scale limit " + std::to_string(kMaxTableOrder));
        std::ostringstream k;
        k << "gf(" << p << "," << f->deg_ << ",[";
        for (auto c : defpoly) k << c << " ";
        k << "])";
        f->key_ = k.str();
        f->build_tables();
        return f;
    }

    static FieldPtr cyclotomic(int64_t m) {
        if (m < 1) throw UnsupportedField("conductor must be >= 1");
        auto f = std::shared_ptr<Field>(new Field());
        f->kind_ = FieldKind::Cyclotomic;
        f->p_ = 0;
        f->m_ = m;
        std::vector<Int> phi = detail::cyclotomic_poly(m);
        f->deg_ = static_cast<int64_t>(phi.size()) - 1;
        f->cyclo_.assign(phi.size(), Rational(0));
        for (size_t i = 0; i < phi.size(); ++i) f->cyclo_[i] = Rational(phi[i]);
        f->key_ = "cyclotomic(" + std::to_string(m) + ")";
        f->build_reduction_rows();
        return f;
    }

    static FieldPtr rationals() { return cyclotomic(1); }

    FieldKind kind() const { return kind_; }
    int64_t characteristic() const { return p_; }
    int64_t basis_size() const { return deg_; }
    int64_t order() const { return p_ == 0 ? 0 : q_; }  // 0 means infinite
    int64_t conductor() const { return m_; }
    const std::vector<int64_t>& defining_poly() const { return defpoly_; }
    const std::string& key() const { return key_; }
    bool same_as(const Field& o) const { return key_ == o.key_; }

    // low-level table access for hot loops (finite fields only, no checks)
    uint32_t raw_add(uint32_t i, uint32_t j) const { return add_[static_cast<size_t>(i) * q_ + j]; }
    uint32_t raw_mul(uint32_t i, uint32_t j) const { return mul_[static_cast<size_t>(i) * q_ + j]; }
    uint32_t raw_neg(uint32_t i) const { return neg_[i]; }
    uint32_t raw_inv(uint32_t i) const { return inv_[i]; }
    uint32_t raw_frob(uint32_t i) const { return frob_[i]; }
    const std::vector<int64_t>& raw_digits(uint32_t i) const { return digits_[i]; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_int(const Int& n) const;
    FieldElem from_rational(const Rational& r) const;
    // residue class of X (finite extension) / zeta (cyclotomic) / 1 (prime, Q)
    FieldElem generator() const;
    FieldElem from_coords_fin(const std::vector<int64_t>& digits) const;
    FieldElem from_coords_q(const std::vector<Rational>& co) const;
    FieldElem element_at(int64_t index) const;  // finite: lexicographic enumeration
    int64_t index_of(const FieldElem& a) const;

    std::string str(const FieldElem& a) const;

  private:
    friend class FieldElem;
    friend class FieldAuto;

    Field() = default;

    void build_tables() {
        const int64_t q = q_, p = p_, k = deg_;
        digits_.assign(static_cast<size_t>(q), {});
        for (int64_t idx = 0; idx < q; ++idx) {
            std::vector<int64_t> d(static_cast<size_t>(k));
            int64_t t = idx;
            // index is big-endian in the tuple (c0,...,c_{k-1}) so numeric
            // order equals lexicographic order on coefficient tuples
            for (int64_t i = k - 1; i >= 0; --i) {
                d[static_cast<size_t>(i)] = t % p;
                t /= p;
            }
            digits_[static_cast<size_t>(idx)] = std::move(d);
        }
        auto enc = [&](const std::vector<int64_t>& d) {
            int64_t idx = 0;
            for (int64_t i = 0; i < k; ++i) idx = idx * p + mod_pos(i < static_cast<int64_t>(d.size()) ? d[static_cast<size_t>(i)] : 0, p);
            return static_cast<uint32_t>(idx);
        };
        add_.assign(static_cast<size_t>(q) * q, 0);
        mul_.assign(static_cast<size_t>(q) * q, 0);
        for (int64_t i = 0; i < q; ++i) {
            for (int64_t j = 0; j < q; ++j) {
                const auto &a = digits_[static_cast<size_t>(i)], &b = digits_[static_cast<size_t>(j)];
                std::vector<int64_t> s(static_cast<size_t>(k));
                for (int64_t t = 0; t < k; ++t) s[static_cast<size_t>(t)] = (a[static_cast<size_t>(t)] + b[static_cast<size_t>(t)]) % p;
                add_[static_cast<size_t>(i) * q + j] = enc(s);
                std::vector<int64_t> m = detail::zp_mul(a, b, p);
                m = detail::zp_rem(m, defpoly_, p);
                mul_[static_cast<size_t>(i) * q + j] = enc(m);
            }
        }
        neg_.assign(static_cast<size_t>(q), 0);
        inv_.assign(static_cast<size_t>(q), 0);
        for (int64_t i = 0; i < q; ++i) {
            const auto& a = digits_[static_cast<size_t>(i)];
            std::vector<int64_t> n(static_cast<size_t>(k));
            for (int64_t t = 0; t < k; ++t) n[static_cast<size_t>(t)] = mod_pos(-a[static_cast<size_t>(t)], p);
            neg_[static_cast<size_t>(i)] = enc(n);
        }
        for (int64_t i = 1; i < q; ++i) {
            for (int64_t j = 1; j < q; ++j) {
                if (mul_[static_cast<size_t>(i) * q + j] == enc({1})) {
                    inv_[static_cast<size_t>(i)] = static_cast<uint32_t>(j);
                    break;
                }
            }
        }
        frob_.assign(static_cast<size_t>(q), 0);
        for (int64_t i = 0; i < q; ++i) {
            uint32_t r = enc({1});
            for (int64_t e = 0; e < p; ++e) r = mul_[static_cast<size_t>(r) * q + i];
            // r = i^p computed as repeated multiplication; p is small here
            frob_[static_cast<size_t>(i)] = r;
        }
    }

    void build_reduction_rows() {
        // rows: X^t mod Phi_m for t in [0, 2*deg)
        const int64_t d = deg_;
        redrows_.assign(static_cast<size_t>(2 * d), {});
        for (int64_t t = 0; t < 2 * d; ++t) {
            detail::QPoly x(static_cast<size_t>(t) + 1, Rational(0));
            x.back() = 1;
            detail::QPoly r = detail::q_rem(x, cyclo_);
            r.resize(static_cast<size_t>(d), Rational(0));
            redrows_[static_cast<size_t>(t)] = std::move(r);
        }
    }

    std::vector<Rational> reduce_q(const detail::QPoly& a) const {
        std::vector<Rational> out(static_cast<size_t>(deg_), Rational(0));
        for (size_t t = 0; t < a.size(); ++t) {
            if (a[t] == 0) continue;
            if (t < static_cast<size_t>(deg_)) {
                out[t] += a[t];
            } else if (t < redrows_.size()) {
                for (int64_t i = 0; i < deg_; ++i) out[static_cast<size_t>(i)] += a[t] * redrows_[t][static_cast<size_t>(i)];
            } else {
                detail::QPoly r = detail::q_rem(a, cyclo_);
                r.resize(static_cast<size_t>(deg_), Rational(0));
                return {r.begin(), r.end()};
            }
        }
        return out;
    }

    FieldKind kind_ = FieldKind::Prime;
    int64_t p_ = 0;
    int64_t deg_ = 1;
    int64_t m_ = 0;  // cyclotomic conductor
    int64_t q_ = 0;  // field order when finite
    std::vector<int64_t> defpoly_;
    detail::QPoly cyclo_;
    std::vector<detail::QPoly> redrows_;
    std::vector<std::vector<int64_t>> digits_;
    std::vector<uint32_t> add_, mul_, neg_, inv_, frob_;
    std::string key_;
};

class FieldElem {
  public:
    FieldElem() = default;

    const FieldPtr& field() const { return f_; }

    bool is_zero() const {
        if (finite()) return idx_ == 0;
        for (const auto& c : co_)
            if (c != 0) return false;
        return true;
    }

    bool is_one() const { return *this == f_->one(); }

    FieldElem operator+(const FieldElem& o) const {
        check(o);
        if (finite()) return FieldElem(f_, f_->add_[static_cast<size_t>(idx_) * f_->q_ + o.idx_]);
        std::vector<Rational> c = co_;
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.co_[i];
        return FieldElem(f_, std::move(c));
    }

    FieldElem operator-() const {
        if (finite()) return FieldElem(f_, f_->neg_[idx_]);
        std::vector<Rational> c = co_;
        for (auto& x : c) x = -x;
        return FieldElem(f_, std::move(c));
    }

    FieldElem operator-(const FieldElem& o) const { return *this + (-o); }

    FieldElem operator*(const FieldElem& o) const {
        check(o);
        if (finite()) return FieldElem(f_, f_->mul_[static_cast<size_t>(idx_) * f_->q_ + o.idx_]);
        detail::QPoly prod = detail::q_mul({co_.begin(), co_.end()}, {o.co_.begin(), o.co_.end()});
        return FieldElem(f_, f_->reduce_q(prod));
    }

    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        if (finite()) return FieldElem(f_, f_->inv_[idx_]);
        detail::QPoly g, u;
        detail::q_xgcd_mod({co_.begin(), co_.end()}, f_->cyclo_, g, u);
        if (g.size() != 1) throw Error("internal: cyclotomic modulus not coprime to nonzero element");
        Rational scale = Rational(1) / g[0];
        for (auto& x : u) x *= scale;
        return FieldElem(f_, f_->reduce_q(u));
    }

    FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }

    // scalar multiple by a rational (denominator must be invertible)
    FieldElem scale(const Rational& r) const {
        if (finite()) {
            FieldElem num = f_->from_int(numerator(r));
            FieldElem den = f_->from_int(denominator(r));
            return *this * num * den.inverse();
        }
        std::vector<Rational> c = co_;
        for (auto& x : c) x *= r;
        return FieldElem(f_, std::move(c));
    }

    FieldElem pow(Int e) const {
        if (e < 0) return inverse().pow(-e);
        FieldElem r = f_->one(), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const FieldElem& o) const {
        if (!f_->same_as(*o.f_)) return false;
        return finite() ? idx_ == o.idx_ : co_ == o.co_;
    }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    // deterministic representation order: lexicographic on the coefficient
    // tuple (c0, c1, ...), used for canonical choices downstream
    int cmp(const FieldElem& o) const {
        check(o);
        if (finite()) {
            const auto &a = f_->digits_[idx_], &b = f_->digits_[o.idx_];
            if (a < b) return -1;
            return a == b ? 0 : 1;
        }
        if (co_ < o.co_) return -1;
        return co_ == o.co_ ? 0 : 1;
    }

    std::vector<int64_t> digits() const { return f_->digits_[idx_]; }
    const std::vector<Rational>& coords() const { return co_; }

    // coordinates over the prime subfield (F_p) / over Q, as field elements
    // of Field::prime(p) resp. Field::rationals() -- see base_field()
    std::vector<FieldElem> base_coords(const FieldPtr& base) const {
        std::vector<FieldElem> out;
        if (finite()) {
            for (int64_t d : digits()) out.push_back(base->from_int(d));
        } else {
            for (const auto& c : co_) out.push_back(base->from_rational(c));
        }
        return out;
    }

    std::string str() const { return f_->str(*this); }

  private:
    friend class Field;
    friend class FieldAuto;

    FieldElem(FieldPtr f, uint32_t idx) : f_(std::move(f)), idx_(idx) {}
    FieldElem(FieldPtr f, std::vector<Rational> co) : f_(std::move(f)), co_(std::move(co)) {}

    bool finite() const { return f_->p_ != 0; }

    void check(const FieldElem& o) const {
        if (!f_ || !o.f_) throw Error("internal: uninitialized field element");
        if (!f_->same_as(*o.f_)) throw MixedFields("elements of " + f_->key() + " and " + o.f_->key());
    }

    FieldPtr f_;
    uint32_t idx_ = 0;
    std::vector<Rational> co_;
};

struct ElemLess {
    bool operator()(const FieldElem& a, const FieldElem& b) const { return a.cmp(b) < 0; }
};

inline FieldElem Field::zero() const {
    auto self = shared_from_this();
    if (p_ != 0) return FieldElem(self, 0);
    return FieldElem(self, std::vector<Rational>(static_cast<size_t>(deg_), Rational(0)));
}

inline FieldElem Field::one() const { return from_int(1); }

inline FieldElem Field::from_int(const Int& n) const {
    auto self = shared_from_this();
    if (p_ != 0) {
        int64_t r = static_cast<int64_t>(n % p_);
        r = mod_pos(r, p_);
        std::vector<int64_t> d(static_cast<size_t>(deg_), 0);
        d[0] = r;
        return from_coords_fin(d);
    }
    std::vector<Rational> c(static_cast<size_t>(deg_), Rational(0));
    c[0] = Rational(n);
    return FieldElem(self, std::move(c));
}

inline FieldElem Field::from_rational(const Rational& r) const {
    if (p_ != 0) throw UnsupportedField("rational scalars live in characteristic 0 fields");
    std::vector<Rational> c(static_cast<size_t>(deg_), Rational(0));
    c[0] = r;
    return FieldElem(shared_from_this(), std::move(c));
}

inline FieldElem Field::generator() const {
    auto self = shared_from_this();
    if (kind_ == FieldKind::Prime) return one();
    if (kind_ == FieldKind::FiniteExt) {
        std::vector<int64_t> d(static_cast<size_t>(deg_), 0);
        d[1] = 1;
        return from_coords_fin(d);
    }
    if (deg_ == 1) {
        // Q(zeta_1) or Q(zeta_2): zeta is 1 resp. -1
        return m_ == 2 ? from_int(-1) : one();
    }
    std::vector<Rational> c(static_cast<size_t>(deg_), Rational(0));
    c[1] = 1;
    return FieldElem(self, std::move(c));
}

inline FieldElem Field::from_coords_fin(const std::vector<int64_t>& dg) const {
    if (p_ == 0) throw UnsupportedField("digit coordinates need positive characteristic");
    // encoding matches build_tables: c0 is the most significant digit
    int64_t idx = 0;
    for (int64_t i = 0; i < deg_; ++i) {
        int64_t c = i < static_cast<int64_t>(dg.size()) ? mod_pos(dg[static_cast<size_t>(i)], p_) : 0;
        idx = idx * p_ + c;
    }
    return FieldElem(shared_from_this(), static_cast<uint32_t>(idx));
}

inline FieldElem Field::from_coords_q(const std::vector<Rational>& co) const {
    if (p_ != 0) throw UnsupportedField("rational coordinates need characteristic 0");
    std::vector<Rational> c = co;
    c.resize(static_cast<size_t>(deg_), Rational(0));
    return FieldElem(shared_from_this(), std::move(c));
}

inline FieldElem Field::element_at(int64_t index) const {
    if (p_ == 0) throw UnsupportedField("enumeration needs a finite field");
    return FieldElem(shared_from_this(), static_cast<uint32_t>(index));
}

inline int64_t Field::index_of(const FieldElem& a) const {
    if (p_ == 0) throw UnsupportedField("enumeration needs a finite field");
    return a.idx_;
}

inline std::string Field::str(const FieldElem& a) const {
    const char* gen = kind_ == FieldKind::Cyclotomic ? "z" : "a";
    std::ostringstream os;
    bool first = true;
    auto term = [&](const std::string& coef, int64_t e, bool neg) {
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? "-" : "+");
        }
        bool unit_coef = coef == "1";
        if (e == 0) {
            os << coef;
            return;
        }
        if (!unit_coef) os << coef << "*";
        os << gen;
        if (e > 1) os << "^" << e;
    };
    if (p_ != 0) {
        const auto& d = digits_[a.idx_];
        for (int64_t i = deg_ - 1; i >= 0; --i) {
            int64_t c = d[static_cast<size_t>(i)];
            if (c == 0) continue;
            term(std::to_string(c), i, false);
        }
    } else {
        for (int64_t i = deg_ - 1; i >= 0; --i) {
            const Rational& c = a.co_[static_cast<size_t>(i)];
            if (c == 0) continue;
            bool neg = c < 0;
            term(rational_str(neg ? Rational(-c) : c), i, neg);
        }
    }
    if (first) os << "0";
    return os.str();
}

// A field automorphism in canonical form: Frobenius power x -> x^{p^e} on a
// finite field, or zeta -> zeta^u (gcd(u, m) = 1) on a cyclotomic field.
class FieldAuto {
  public:
    static FieldAuto identity(const FieldPtr& f) {
        return f->characteristic() != 0 ? frobenius(f, 0) : galois(f, 1);
    }

    static FieldAuto frobenius(const FieldPtr& f, int64_t e) {
        if (f->characteristic() == 0) throw UnsupportedField("frobenius needs positive characteristic");
        FieldAuto a;
        a.f_ = f;
        a.par_ = mod_pos(e, f->basis_size());
        return a;
    }

    static FieldAuto galois(const FieldPtr& f, int64_t u) {
        if (f->kind() != FieldKind::Cyclotomic) throw UnsupportedField("galois maps act on cyclotomic fields");
        int64_t m = f->conductor();
        if (m <= 2) {
            FieldAuto a;
            a.f_ = f;
            a.par_ = 1;
            return a;
        }
        u = mod_pos(u, m);
        if (gcd64(u, m) != 1)
            throw ValidationError("galois exponent " + std::to_string(u) + " is not a unit mod " + std::to_string(m));
        FieldAuto a;
        a.f_ = f;
        a.par_ = u;
        return a;
    }

    const FieldPtr& field() const { return f_; }

    bool is_identity() const {
        if (f_->characteristic() != 0) return par_ == 0;
        return par_ == 1;
    }

    int64_t parameter() const { return par_; }

    FieldElem operator()(const FieldElem& a) const {
        if (!f_->same_as(*a.field())) throw MixedFields("automorphism of " + f_->key() + " applied to element of " + a.field()->key());
        if (f_->characteristic() != 0) {
            uint32_t idx = a.idx_;
            for (int64_t e = 0; e < par_; ++e) idx = f_->frob_[idx];
            return FieldElem(f_, idx);
        }
        if (is_identity()) return a;
        ensure_powers();
        FieldElem out = f_->zero();
        const auto& co = a.coords();
        for (size_t t = 0; t < co.size(); ++t) {
            if (co[t] == 0) continue;
            out = out + FieldElem(f_, (*powers_)[t]) * FieldElem(f_, std::vector<Rational>{co[t]});
        }
        // note: scalar multiply via degree-0 element keeps reduction exact
        return out;
    }

    // least n >= 1 with phi^n = id, certified on the field generator
    int64_t order() const {
        FieldElem g = f_->generator();
        FieldElem x = (*this)(g);
        int64_t n = 1;
        while (x != g) {
            x = (*this)(x);
            ++n;
            if (n > 4 * f_->basis_size() + 4) throw Error("internal: automorphism order runaway");
        }
        return n;
    }

    FieldAuto compose(const FieldAuto& o) const {  // this ∘ o
        if (!f_->same_as(*o.f_)) throw MixedFields();
        FieldAuto a;
        a.f_ = f_;
        if (f_->characteristic() != 0)
            a.par_ = mod_pos(par_ + o.par_, f_->basis_size());
        else if (f_->conductor() <= 2)
            a.par_ = 1;
        else
            a.par_ = mod_pos(par_ * o.par_, f_->conductor());
        return a;
    }

    FieldAuto inverse_auto() const {
        FieldAuto a;
        a.f_ = f_;
        if (f_->characteristic() != 0) {
            a.par_ = mod_pos(-par_, f_->basis_size());
        } else if (f_->conductor() <= 2) {
            a.par_ = 1;
        } else {
            int64_t m = f_->conductor(), u = par_, v = 1;
            while (mod_pos(u * v, m) != 1) ++v;
            a.par_ = v;
        }
        return a;
    }

    FieldAuto pow(int64_t n) const {
        FieldAuto r = identity(f_);
        FieldAuto b = n >= 0 ? *this : inverse_auto();
        int64_t e = n >= 0 ? n : -n;
        for (int64_t i = 0; i < e; ++i) r = r.compose(b);
        return r;
    }

    bool same_as(const FieldAuto& o) const { return f_->same_as(*o.f_) && par_ == o.par_; }

    std::string str() const {
        if (f_->characteristic() != 0) return "frobenius^" + std::to_string(par_);
        return "zeta->zeta^" + std::to_string(par_);
    }

  private:
    void ensure_powers() const {
        if (powers_) return;
        auto p = std::make_shared<std::vector<std::vector<Rational>>>();
        FieldElem g = f_->generator().pow(par_);
        FieldElem acc = f_->one();
        for (int64_t t = 0; t < f_->basis_size(); ++t) {
            p->push_back(acc.coords());
            acc = acc * g;
        }
        powers_ = std::move(p);
    }

    FieldPtr f_;
    int64_t par_ = 0;
    mutable std::shared_ptr<std::vector<std::vector<Rational>>> powers_;
};

inline int64_t auto_order(const FieldAuto& phi) { return phi.order(); }

inline FieldElem apply_auto(const FieldAuto& phi, const FieldElem& a) { return phi(a); }

// The full group mu_n(L) of n-th roots of unity, each verified by
// exponentiation. Candidates: every element (finite L), or {±zeta^k}
// (cyclotomic L). In characteristic p dividing n this yields mu_{n'} for the
// prime-to-p part n' since x^p - 1 = (x-1)^p.
inline std::vector<FieldElem> roots_of_unity(const FieldPtr& L, int64_t n) {
    if (n < 1) throw ValidationError("roots_of_unity needs n >= 1");
    std::vector<FieldElem> out;
    auto push_verified = [&](const FieldElem& x) {
        if (x.is_zero()) return;
        if (x.pow(n).is_one()) {
            for (const auto& y : out)
                if (y == x) return;
            out.push_back(x);
        }
    };
    if (L->characteristic() != 0) {
        for (int64_t i = 1; i < L->order(); ++i) push_verified(L->element_at(i));
    } else if (L->kind() == FieldKind::Cyclotomic) {
        FieldElem z = L->generator();
        int64_t m = std::max<int64_t>(L->conductor(), 1);
        FieldElem zk = L->one();
        for (int64_t k = 0; k < m; ++k) {
            push_verified(zk);
            push_verified(-zk);
            zk = zk * z;
        }
    } else {
        throw UnsupportedField("roots_of_unity needs a finite or cyclotomic field");
    }
    std::sort(out.begin(), out.end(), [](const FieldElem& a, const FieldElem& b) { return a.cmp(b) < 0; });
    return out;
}

// multiplicative order of a root of unity (desk scale: linear scan)
inline int64_t elem_order(const FieldElem& x) {
    FieldElem acc = x;
    int64_t n = 1;
    while (!acc.is_one()) {
        acc = acc * x;
        ++n;
        if (n > 1'000'000) throw Error("internal: element order runaway");
    }
    return n;
}

}  // namespace skewlab

#endif
