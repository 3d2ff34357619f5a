#ifndef SKEWLAB_POLY_HPP
#define SKEWLAB_POLY_HPP

// Dense univariate commutative polynomials over an exact field, plus the
// bounded factorization routines used for center arithmetic.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace skewlab {

class FieldPoly {
  public:
    explicit FieldPoly(FieldPtr f) : f_(std::move(f)) {}

    static FieldPoly zero(const FieldPtr& f) { return FieldPoly(f); }
    static FieldPoly constant(const FieldElem& c) {
        FieldPoly p(c.field());
        if (!c.is_zero()) p.c_.push_back(c);
        return p;
    }
    static FieldPoly monomial(const FieldElem& c, int64_t e) {
        FieldPoly p(c.field());
        if (!c.is_zero()) {
            p.c_.assign(static_cast<size_t>(e), c.field()->zero());
            p.c_.push_back(c);
        }
        return p;
    }
    static FieldPoly variable(const FieldPtr& f) { return monomial(f->one(), 1); }
    static FieldPoly from_coeffs(const FieldPtr& f, std::vector<FieldElem> cs) {
        FieldPoly p(f);
        p.c_ = std::move(cs);
        p.trim();
        return p;
    }

    const FieldPtr& field() const { return f_; }
    bool is_zero() const { return c_.empty(); }
    int64_t degree() const { return static_cast<int64_t>(c_.size()) - 1; }  // -1 for zero
    const FieldElem& lead() const {
        if (is_zero()) throw ZeroElement("zero polynomial has no leading coefficient");
        return c_.back();
    }
    FieldElem coeff(int64_t i) const {
        if (i < 0 || i >= static_cast<int64_t>(c_.size())) return f_->zero();
        return c_[static_cast<size_t>(i)];
    }
    const std::vector<FieldElem>& coeffs() const { return c_; }

    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    bool is_monic() const { return !is_zero() && lead().is_one(); }
    bool is_constant() const { return c_.size() <= 1; }

    FieldPoly operator+(const FieldPoly& o) const {
        check(o);
        FieldPoly r(f_);
        r.c_.resize(std::max(c_.size(), o.c_.size()), f_->zero());
        for (size_t i = 0; i < r.c_.size(); ++i) {
            FieldElem v = f_->zero();
            if (i < c_.size()) v = v + c_[i];
            if (i < o.c_.size()) v = v + o.c_[i];
            r.c_[i] = v;
        }
        r.trim();
        return r;
    }

    FieldPoly operator-() const {
        FieldPoly r(f_);
        r.c_.reserve(c_.size());
        for (const auto& x : c_) r.c_.push_back(-x);
        return r;
    }

    FieldPoly operator-(const FieldPoly& o) const { return *this + (-o); }

    FieldPoly operator*(const FieldPoly& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return FieldPoly(f_);
        FieldPoly r(f_);
        r.c_.assign(c_.size() + o.c_.size() - 1, f_->zero());
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
        }
        r.trim();
        return r;
    }

    FieldPoly scaled(const FieldElem& s) const {
        FieldPoly r(f_);
        if (s.is_zero()) return r;
        r.c_.reserve(c_.size());
        for (const auto& x : c_) r.c_.push_back(x * s);
        return r;
    }

    // division with remainder; divisor nonzero
    std::pair<FieldPoly, FieldPoly> divmod(const FieldPoly& d) const {
        check(d);
        if (d.is_zero()) throw DivisionByZeroPoly();
        FieldPoly q(f_), r = *this;
        FieldElem lead_inv = d.lead().inverse();
        if (r.degree() >= d.degree()) q.c_.assign(static_cast<size_t>(r.degree() - d.degree()) + 1, f_->zero());
        while (!r.is_zero() && r.degree() >= d.degree()) {
            FieldElem c = r.lead() * lead_inv;
            int64_t shift = r.degree() - d.degree();
            q.c_[static_cast<size_t>(shift)] = c;
            for (size_t i = 0; i < d.c_.size(); ++i)
                r.c_[static_cast<size_t>(shift) + i] = r.c_[static_cast<size_t>(shift) + i] - c * d.c_[i];
            r.trim();
        }
        q.trim();
        return {q, r};
    }

    bool divides(const FieldPoly& g) const { return g.divmod(*this).second.is_zero(); }

    FieldPoly monic() const {
        if (is_zero()) return *this;
        return scaled(lead().inverse());
    }

    FieldPoly pow(int64_t e) const {
        FieldPoly r = constant(f_->one());
        for (int64_t i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    FieldElem eval(const FieldElem& x) const {
        FieldElem acc = f_->zero();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    FieldPoly map_coeffs(const FieldAuto& phi) const {
        FieldPoly r(f_);
        r.c_.reserve(c_.size());
        for (const auto& x : c_) r.c_.push_back(phi(x));
        r.trim();
        return r;
    }

    bool operator==(const FieldPoly& o) const {
        if (!f_->same_as(*o.f_) || c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const FieldPoly& o) const { return !(*this == o); }

    // deterministic order: degree, then coefficient tuple from the constant up
    int cmp(const FieldPoly& o) const {
        if (degree() != o.degree()) return degree() < o.degree() ? -1 : 1;
        for (size_t i = 0; i < c_.size(); ++i) {
            int c = c_[i].cmp(o.c_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    std::string str(const std::string& var = "y") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            std::string cs = c_[i].str();
            if (!first) {
                if (!cs.empty() && cs[0] == '-') {
                    os << "-";
                    cs = cs.substr(1);
                } else {
                    os << "+";
                }
            } else {
                first = false;
            }
            bool needs_parens = cs.find('+') != std::string::npos || cs.find('-', 1) != std::string::npos;
            if (i == 0) {
                os << (needs_parens ? "(" + cs + ")" : cs);
            } else {
                if (cs != "1") os << (needs_parens ? "(" + cs + ")" : cs) << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

  private:
    void check(const FieldPoly& o) const {
        if (!f_->same_as(*o.f_)) throw MixedFields("polynomials over different fields");
    }
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr f_;
    std::vector<FieldElem> c_;
};

struct PolyLess {
    bool operator()(const FieldPoly& a, const FieldPoly& b) const { return a.cmp(b) < 0; }
};

// Result of commutative factorization. `unsplit` carries any factor the
// bounded characteristic-0 search could not certify; always empty over a
// finite field.
struct CommFactorization {
    FieldElem unit;
    std::vector<FieldPoly> irreducibles;  // monic, with multiplicity (repeats)
    std::vector<FieldPoly> unsplit;       // monic, degree >= 2, uncertified
    bool complete() const { return unsplit.empty(); }
};

namespace detail {

// enumerate monic polynomials of fixed degree over a finite field, in
// lexicographic coefficient order
inline FieldPoly monic_at(const FieldPtr& f, int64_t deg, int64_t index) {
    std::vector<FieldElem> cs(static_cast<size_t>(deg) + 1, f->zero());
    cs.back() = f->one();
    int64_t q = f->order();
    for (int64_t i = 0; i < deg; ++i) {
        int64_t digit = (index / pow_i64(q, deg - 1 - i)) % q;
        cs[static_cast<size_t>(i)] = f->element_at(digit);
    }
    return FieldPoly::from_coeffs(f, std::move(cs));
}

inline std::vector<Rational> default_root_rationals() {
    std::vector<Rational> rs;
    const int64_t nums[] = {1, 2, 3, 4, 6, 8, 9};
    for (int64_t n : nums)
        for (int64_t d : nums) {
            Rational q(n, d);
            if (std::find(rs.begin(), rs.end(), q) == rs.end()) rs.push_back(q);
            q = -q;
            if (std::find(rs.begin(), rs.end(), q) == rs.end()) rs.push_back(q);
        }
    return rs;
}

}  // namespace detail

// Bounded e-th root of a monic polynomial; empty when no exact root exists.
inline std::optional<FieldPoly> monic_root(const FieldPoly& g, int64_t e) {
    if (g.is_zero() || !g.is_monic() || e < 1 || g.degree() % e != 0) return std::nullopt;
    const FieldPtr& f = g.field();
    int64_t d = g.degree() / e;
    std::vector<FieldElem> h(static_cast<size_t>(d) + 1, f->zero());
    h.back() = f->one();
    FieldElem einv = f->from_int(e);
    if (einv.is_zero()) return std::nullopt;  // characteristic divides e: skip
    einv = einv.inverse();
    for (int64_t t = 0; t < d; ++t) {
        FieldPoly cur = FieldPoly::from_coeffs(f, h).pow(e);
        int64_t pos = e * d - 1 - t;
        FieldElem delta = g.coeff(pos) - cur.coeff(pos);
        h[static_cast<size_t>(d - 1 - t)] = delta * einv;
    }
    FieldPoly hp = FieldPoly::from_coeffs(f, std::move(h));
    if (hp.pow(e) == g) return hp;
    return std::nullopt;
}

// Factor a nonzero polynomial over its (finite) field by exhaustive
// ascending-degree trial division. `budget` caps the number of candidate
// divisions attempted.
inline CommFactorization factor_commutative_finite(FieldPoly g, int64_t budget) {
    const FieldPtr& f = g.field();
    if (f->characteristic() == 0) throw UnsupportedField("exhaustive factorization needs a finite field");
    if (g.is_zero()) throw DivisionByZeroPoly("cannot factor the zero polynomial");
    CommFactorization out{g.lead(), {}, {}};
    g = g.monic();
    int64_t spent = 0;
    while (g.degree() >= 1) {
        bool found = false;
        for (int64_t d = 1; 2 * d <= g.degree() && !found; ++d) {
            int64_t count = pow_i64(f->order(), d);
            for (int64_t i = 0; i < count; ++i) {
                if (++spent > budget)
                    throw BudgetExceeded("factorization budget exhausted at degree " + std::to_string(d));
                FieldPoly cand = detail::monic_at(f, d, i);
                auto [q, r] = g.divmod(cand);
                if (r.is_zero()) {
                    out.irreducibles.push_back(cand);  // minimal-degree divisor is irreducible
                    g = q;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            out.irreducibles.push_back(g);  // no divisor of degree <= deg/2: irreducible
            break;
        }
    }
    std::sort(out.irreducibles.begin(), out.irreducibles.end(), PolyLess{});
    return out;
}

// Bounded factorization over a characteristic-0 field: peel off linear
// factors with roots drawn from a candidate set (rationals times roots of
// unity, plus caller extras, every candidate verified by evaluation), then
// try perfect powers. Leftovers of degree >= 2 are reported unsplit.
inline CommFactorization factor_commutative_char0(FieldPoly g, const std::vector<FieldElem>& extra_roots = {}) {
    const FieldPtr& f = g.field();
    if (g.is_zero()) throw DivisionByZeroPoly("cannot factor the zero polynomial");
    CommFactorization out{g.lead(), {}, {}};
    g = g.monic();
    std::vector<FieldElem> candidates = extra_roots;
    candidates.push_back(f->zero());
    if (f->kind() == FieldKind::Cyclotomic) {
        FieldElem z = f->generator();
        int64_t m = std::max<int64_t>(f->conductor(), 1);
        for (const Rational& r : detail::default_root_rationals()) {
            FieldElem zk = f->one();
            for (int64_t k = 0; k < m; ++k) {
                candidates.push_back(zk.scale(r));
                zk = zk * z;
            }
        }
    }
    bool progress = true;
    while (g.degree() >= 1 && progress) {
        progress = false;
        if (g.degree() == 1) {
            out.irreducibles.push_back(g);
            g = FieldPoly::constant(f->one());
            break;
        }
        for (const FieldElem& r : candidates) {
            if (g.eval(r).is_zero()) {
                FieldPoly lin = FieldPoly::variable(f) - FieldPoly::constant(r);
                auto [q, rem] = g.divmod(lin);
                if (!rem.is_zero()) continue;
                out.irreducibles.push_back(lin);
                g = q;
                progress = true;
                break;
            }
        }
        if (!progress && g.degree() >= 2) {
            for (int64_t e = g.degree(); e >= 2; --e) {
                if (g.degree() % e != 0) continue;
                if (auto h = monic_root(g, e)) {
                    CommFactorization sub = factor_commutative_char0(*h, extra_roots);
                    for (int64_t i = 0; i < e; ++i) {
                        for (const auto& p : sub.irreducibles) out.irreducibles.push_back(p);
                        for (const auto& p : sub.unsplit) out.unsplit.push_back(p);
                    }
                    g = FieldPoly::constant(f->one());
                    progress = true;
                    break;
                }
            }
        }
    }
    if (g.degree() >= 2) out.unsplit.push_back(g);
    else if (g.degree() == 1) out.irreducibles.push_back(g);
    std::sort(out.irreducibles.begin(), out.irreducibles.end(), PolyLess{});
    return out;
}

}  // namespace skewlab

#endif
