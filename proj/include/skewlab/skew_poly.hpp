#ifndef SKEWLAB_SKEW_POLY_HPP
#define SKEWLAB_SKEW_POLY_HPP

// The twisted polynomial ring T = D[x;sigma] over an exact field D:
// arithmetic with (a x^i)(b x^j) = a sigma^i(b) x^{i+j}, Euclidean right
// division, center computation, factorization into irreducibles, the
// similarity test, reduced norms into the center, and graded involutions.

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "cyclic_algebra.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace skewlab {

class SkewRing;
using SkewRingPtr = std::shared_ptr<const SkewRing>;

class SkewPoly;

// Center description: R = F[y] with y = x^m. The standalone descriptor for
// F = D^sigma is produced when the fixed field is cyclotomic/finite; center
// arithmetic itself always runs on sigma-fixed elements of D.
struct CenterData {
    int64_t m = 1;
    FieldPtr F;                           // may be null (unrepresentable subfield)
    FieldElem F_generator_image;          // image of F's generator inside D
    std::vector<FieldElem> fixed_basis;   // Q- or F_p-basis of D^sigma inside D
};

class SkewRing : public std::enable_shared_from_this<SkewRing> {
  public:
    static SkewRingPtr make(const FieldPtr& D, const FieldAuto& sigma);

    const FieldPtr& coeff_field() const { return D_; }
    const FieldAuto& sigma() const { return sigma_; }
    int64_t twist_order() const { return m_; }
    bool is_commutative() const { return m_ == 1; }
    const CenterData& center() const { return center_; }
    const std::string& key() const { return key_; }
    bool same_as(const SkewRing& o) const { return key_ == o.key_; }
    const FieldAuto& sigma_pow(int64_t i) const { return sigma_pows_[static_cast<size_t>(mod_pos(i, m_))]; }

    SkewPoly zero() const;
    SkewPoly one() const;
    SkewPoly var() const;  // x
    SkewPoly embed(const FieldElem& c) const;
    SkewPoly monomial(const FieldElem& c, int64_t e) const;
    SkewPoly from_coeffs(std::vector<FieldElem> cs) const;
    SkewPoly center_y() const;  // x^m

    bool is_central(const SkewPoly& f) const;

    // index table of sigma^e on a finite coefficient field (hot loops)
    const std::vector<uint32_t>& sigma_table(int64_t e) const {
        return sig_tab_[static_cast<size_t>(mod_pos(e, m_))];
    }

  private:
    SkewRing() : sigma_(FieldAuto()) {}

    FieldPtr D_;
    FieldAuto sigma_;
    int64_t m_ = 1;
    std::vector<FieldAuto> sigma_pows_;
    std::vector<std::vector<uint32_t>> sig_tab_;  // finite fields only
    CenterData center_;
    std::string key_;
};

class SkewPoly {
  public:
    SkewPoly() = default;

    const SkewRingPtr& ring() const { return r_; }
    bool is_zero() const { return c_.empty(); }
    int64_t degree() const { return static_cast<int64_t>(c_.size()) - 1; }
    const FieldElem& lead() const {
        if (is_zero()) throw ZeroElement("zero skew polynomial has no leading coefficient");
        return c_.back();
    }
    FieldElem coeff(int64_t i) const {
        if (i < 0 || i >= static_cast<int64_t>(c_.size())) return r_->coeff_field()->zero();
        return c_[static_cast<size_t>(i)];
    }
    const std::vector<FieldElem>& coeffs() const { return c_; }
    bool is_monic() const { return !is_zero() && lead().is_one(); }
    bool is_constant() const { return c_.size() <= 1; }

    SkewPoly operator+(const SkewPoly& o) const {
        check(o);
        std::vector<FieldElem> cs(std::max(c_.size(), o.c_.size()), r_->coeff_field()->zero());
        for (size_t i = 0; i < cs.size(); ++i) {
            if (i < c_.size()) cs[i] = cs[i] + c_[i];
            if (i < o.c_.size()) cs[i] = cs[i] + o.c_[i];
        }
        return r_->from_coeffs(std::move(cs));
    }

    SkewPoly operator-() const {
        std::vector<FieldElem> cs;
        cs.reserve(c_.size());
        for (const auto& x : c_) cs.push_back(-x);
        return r_->from_coeffs(std::move(cs));
    }

    SkewPoly operator-(const SkewPoly& o) const { return *this + (-o); }

    // twisted product: (a x^i)(b x^j) = a sigma^i(b) x^{i+j}
    SkewPoly operator*(const SkewPoly& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return r_->zero();
        std::vector<FieldElem> cs(c_.size() + o.c_.size() - 1, r_->coeff_field()->zero());
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            const FieldAuto& si = r_->sigma_pow(static_cast<int64_t>(i));
            for (size_t j = 0; j < o.c_.size(); ++j) {
                if (o.c_[j].is_zero()) continue;
                cs[i + j] = cs[i + j] + c_[i] * si(o.c_[j]);
            }
        }
        return r_->from_coeffs(std::move(cs));
    }

    SkewPoly left_scaled(const FieldElem& u) const {  // u * f
        return r_->embed(u) * *this;
    }

    // monic canonical form by left unit scaling
    SkewPoly monic() const {
        if (is_zero()) return *this;
        return left_scaled(lead().inverse());
    }

    SkewPoly pow(int64_t e) const {
        SkewPoly acc = r_->one();
        for (int64_t i = 0; i < e; ++i) acc = acc * *this;
        return acc;
    }

    bool operator==(const SkewPoly& o) const {
        if (!r_->same_as(*o.r_) || c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const SkewPoly& o) const { return !(*this == o); }

    int cmp(const SkewPoly& o) const {
        if (degree() != o.degree()) return degree() < o.degree() ? -1 : 1;
        for (size_t i = 0; i < c_.size(); ++i) {
            int c = c_[i].cmp(o.c_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    std::string str() const {
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
            bool parens = cs.find('+') != std::string::npos || cs.find('-', 1) != std::string::npos;
            if (i == 0) {
                os << (parens ? "(" + cs + ")" : cs);
            } else {
                if (cs != "1") os << (parens ? "(" + cs + ")" : cs) << "*";
                os << "x";
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

  private:
    friend class SkewRing;
    SkewPoly(SkewRingPtr r, std::vector<FieldElem> c) : r_(std::move(r)), c_(std::move(c)) {}

    void check(const SkewPoly& o) const {
        if (!r_ || !o.r_) throw Error("internal: uninitialized skew polynomial");
        if (!r_->same_as(*o.r_)) throw MixedRings();
    }

    SkewRingPtr r_;
    std::vector<FieldElem> c_;
};

inline SkewPoly SkewRing::zero() const { return SkewPoly(shared_from_this(), {}); }
inline SkewPoly SkewRing::one() const { return embed(D_->one()); }
inline SkewPoly SkewRing::var() const { return monomial(D_->one(), 1); }
inline SkewPoly SkewRing::embed(const FieldElem& c) const { return monomial(c, 0); }
inline SkewPoly SkewRing::center_y() const { return monomial(D_->one(), m_); }

inline SkewPoly SkewRing::monomial(const FieldElem& c, int64_t e) const {
    if (!D_->same_as(*c.field())) throw MixedFields("coefficient from a different field");
    if (c.is_zero()) return zero();
    std::vector<FieldElem> cs(static_cast<size_t>(e) + 1, D_->zero());
    cs.back() = c;
    return SkewPoly(shared_from_this(), std::move(cs));
}

inline SkewPoly SkewRing::from_coeffs(std::vector<FieldElem> cs) const {
    while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
    return SkewPoly(shared_from_this(), std::move(cs));
}

inline bool SkewRing::is_central(const SkewPoly& f) const {
    for (int64_t i = 0; i <= f.degree(); ++i) {
        const FieldElem c = f.coeff(i);
        if (c.is_zero()) continue;
        if (i % m_ != 0) return false;       // only powers of y = x^m
        if (sigma_(c) != c) return false;    // coefficients in D^sigma
    }
    return true;
}

inline SkewRingPtr SkewRing::make(const FieldPtr& D, const FieldAuto& sigma) {
    if (!D->same_as(*sigma.field())) throw MixedFields("twist acts on a different field");
    auto r = std::shared_ptr<SkewRing>(new SkewRing());
    r->D_ = D;
    r->sigma_ = sigma;
    r->m_ = sigma.order();
    r->sigma_pows_.push_back(FieldAuto::identity(D));
    for (int64_t i = 1; i < r->m_; ++i) r->sigma_pows_.push_back(r->sigma_pows_.back().compose(sigma));
    r->key_ = "skew(" + D->key() + ";" + sigma.str() + ")";
    if (D->characteristic() != 0) {
        for (int64_t e = 0; e < r->m_; ++e) {
            std::vector<uint32_t> tab(static_cast<size_t>(D->order()));
            const FieldAuto& se = r->sigma_pows_[static_cast<size_t>(e)];
            for (int64_t i = 0; i < D->order(); ++i)
                tab[static_cast<size_t>(i)] = static_cast<uint32_t>(D->index_of(se(D->element_at(i))));
            r->sig_tab_.push_back(std::move(tab));
        }
    }

    CenterData cd;
    cd.m = r->m_;
    cd.fixed_basis = fixed_subspace(D, {sigma});
    if (sigma.is_identity()) {
        cd.F = D;
        cd.F_generator_image = D->generator();
    } else if (D->characteristic() != 0) {
        // collect the fixed subfield by scanning, then pin it down by the
        // minimal polynomial of a multiplicative generator
        std::vector<FieldElem> fixed;
        for (int64_t i = 0; i < D->order(); ++i) {
            FieldElem a = D->element_at(i);
            if (sigma(a) == a) fixed.push_back(a);
        }
        int64_t qf = static_cast<int64_t>(fixed.size());
        int64_t p = D->characteristic();
        if (qf == p) {
            cd.F = Field::prime(p);
            cd.F_generator_image = D->one();
        } else {
            FieldElem beta = D->zero();
            for (const auto& a : fixed) {
                if (a.is_zero()) continue;
                if (elem_order(a) == qf - 1) {
                    beta = a;
                    break;
                }
            }
            // minimal polynomial of beta over F_p by linear dependence
            FieldPtr base = base_field(D);
            int64_t d = 0;
            for (int64_t t = qf; t > 1; t /= p) ++d;
            FMat mat(static_cast<size_t>(D->basis_size()), FVec(static_cast<size_t>(d) + 1, base->zero()));
            FieldElem pw = D->one();
            for (int64_t j = 0; j <= d; ++j) {
                FVec col = pw.base_coords(base);
                for (int64_t rr = 0; rr < D->basis_size(); ++rr) mat[static_cast<size_t>(rr)][static_cast<size_t>(j)] = col[static_cast<size_t>(rr)];
                pw = pw * beta;
            }
            auto ker = kernel_basis(base, mat);
            std::vector<int64_t> minpoly(static_cast<size_t>(d) + 1, 0);
            for (const auto& v : ker) {
                if (v.back().is_zero()) continue;
                FieldElem scale = v.back().inverse();
                for (int64_t j = 0; j <= d; ++j) minpoly[static_cast<size_t>(j)] = (v[static_cast<size_t>(j)] * scale).digits()[0];
                break;
            }
            cd.F = Field::finite_ext(p, minpoly);
            cd.F_generator_image = beta;
        }
    } else {
        // cyclotomic D: the fixed field is cyclotomic iff the sigma-fixed
        // roots of unity account for its full degree
        int64_t m_cond = std::max<int64_t>(D->conductor(), 1);
        std::vector<FieldElem> fixed_roots;
        for (const auto& xi : roots_of_unity(D, 2 * m_cond))
            if (sigma(xi) == xi) fixed_roots.push_back(xi);
        int64_t M0 = 1;
        for (const auto& xi : fixed_roots) M0 = std::max(M0, elem_order(xi));
        int64_t degF = D->basis_size() / sigma.order();
        if (euler_phi(M0) == degF) {
            FieldElem gen_img = D->zero();
            for (const auto& xi : fixed_roots) {
                if (elem_order(xi) != M0) continue;
                if (gen_img.is_zero() || xi.cmp(gen_img) < 0) gen_img = xi;
            }
            cd.F = Field::cyclotomic(M0);
            cd.F_generator_image = gen_img;
        } else {
            cd.F = nullptr;  // genuine subfield without a cyclotomic presentation
            cd.F_generator_image = D->zero();
        }
    }
    r->center_ = std::move(cd);

    // verify y = x^m is central: commutes with x and with a primitive element
    SkewPoly y = r->center_y();
    SkewPoly x = r->var();
    SkewPoly g = r->embed(D->generator());
    if (y * x != x * y || y * g != g * y) throw Error("internal: x^m failed the centrality check");
    return r;
}

inline SkewPoly sp_add(const SkewPoly& f, const SkewPoly& g) { return f + g; }
inline SkewPoly sp_mul(const SkewPoly& f, const SkewPoly& g) { return f * g; }

// f = q*g + r with deg r < deg g; unique
inline std::pair<SkewPoly, SkewPoly> right_divide(const SkewPoly& f, const SkewPoly& g) {
    if (g.is_zero()) throw DivisionByZeroPoly("right division by zero");
    const SkewRingPtr& R = f.ring();
    if (!R->same_as(*g.ring())) throw MixedRings();
    SkewPoly q = R->zero(), r = f;
    while (!r.is_zero() && r.degree() >= g.degree()) {
        int64_t e = r.degree() - g.degree();
        // (c x^e) * g has leading coefficient c * sigma^e(lc(g))
        FieldElem c = r.lead() * R->sigma_pow(e)(g.lead()).inverse();
        SkewPoly mono = R->monomial(c, e);
        q = q + mono;
        r = r - mono * g;
    }
    return {q, r};
}

struct CenterInfo {
    int64_t m;
    SkewPoly y;
    FieldPtr F;  // null when the fixed field has no standalone presentation
    FieldElem F_generator_image;
};

inline CenterInfo center_data(const SkewRingPtr& ring) {
    return CenterInfo{ring->twist_order(), ring->center_y(), ring->center().F, ring->center().F_generator_image};
}

// factorization result: f = unit * factors[0] * ... * factors.back(),
// all factors monic; factors are certified irreducible unless listed in
// `unsplit` (bounded characteristic-0 search only)
struct SkewFactorization {
    FieldElem unit;
    std::vector<SkewPoly> factors;
    std::vector<size_t> unsplit_positions;
    bool complete() const { return unsplit_positions.empty(); }
};

namespace detail {

inline SkewPoly monic_skew_at(const SkewRingPtr& R, int64_t deg, int64_t index) {
    const FieldPtr& D = R->coeff_field();
    std::vector<FieldElem> cs(static_cast<size_t>(deg) + 1, D->zero());
    cs.back() = D->one();
    for (int64_t i = 0; i < deg; ++i) {
        int64_t digit = (index / pow_i64(D->order(), deg - 1 - i)) % D->order();
        cs[static_cast<size_t>(i)] = D->element_at(digit);
    }
    return R->from_coeffs(std::move(cs));
}

// table-driven skew polynomial kernel over a finite coefficient field:
// coefficients are element indices, little-endian, trimmed
using IdxPoly = std::vector<uint32_t>;

struct FastSkew {
    const SkewRing* R;
    const Field* F;
    int64_t m;

    explicit FastSkew(const SkewRingPtr& ring) : R(ring.get()), F(ring->coeff_field().get()), m(ring->twist_order()) {
        if (F->characteristic() == 0) throw UnsupportedField("fast kernel needs a finite field");
    }

    uint32_t sigp(int64_t e, uint32_t a) const { return R->sigma_table(e)[a]; }

    IdxPoly encode(const SkewPoly& f) const {
        IdxPoly out(static_cast<size_t>(f.degree() + 1));
        for (int64_t i = 0; i <= f.degree(); ++i) out[static_cast<size_t>(i)] = static_cast<uint32_t>(F->index_of(f.coeff(i)));
        return out;
    }

    SkewPoly decode(const IdxPoly& f, const SkewRingPtr& ring) const {
        std::vector<FieldElem> cs;
        cs.reserve(f.size());
        for (uint32_t c : f) cs.push_back(F->element_at(c));
        return ring->from_coeffs(std::move(cs));
    }

    // exact right division: on success writes the quotient and returns true
    bool divide_exact(const IdxPoly& f, const IdxPoly& g, IdxPoly& quot, IdxPoly& scratch) const {
        scratch = f;
        const size_t dg = g.size() - 1;
        uint32_t glead = g.back();
        quot.assign(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
        while (scratch.size() >= g.size()) {
            size_t e = scratch.size() - g.size();
            uint32_t le = sigp(static_cast<int64_t>(e), glead);
            uint32_t c = F->raw_mul(scratch.back(), F->raw_inv(le));
            quot[e] = c;
            for (size_t i = 0; i <= dg; ++i) {
                uint32_t term = F->raw_mul(c, sigp(static_cast<int64_t>(e), g[i]));
                scratch[e + i] = F->raw_add(scratch[e + i], F->raw_neg(term));
            }
            while (!scratch.empty() && scratch.back() == 0) scratch.pop_back();
        }
        return scratch.empty();
    }
};

}  // namespace detail

// Factor f into monic irreducibles times a left unit.
//
// Finite D: exhaustive monic right-factor search by ascending degree; a
// minimal-degree right factor is automatically irreducible. `budget` caps
// the number of trial divisions.
//
// Characteristic 0: candidates are the caller's hints (any degree, each
// validated by exact division) plus x + r*zeta^k monomial-coefficient
// linears; whatever cannot be split further and is nonlinear is returned
// unsplit.
inline SkewFactorization factor(const SkewPoly& f, int64_t budget = 200000,
                                const std::vector<SkewPoly>& hints = {}) {
    if (f.is_zero()) throw DivisionByZeroPoly("cannot factor the zero polynomial");
    const SkewRingPtr& R = f.ring();
    const FieldPtr& D = R->coeff_field();
    SkewFactorization out{f.lead(), {}, {}};
    SkewPoly g = f.monic();
    std::vector<SkewPoly> hint_pool;
    for (const auto& h : hints) {
        if (h.is_zero() || h.degree() < 1) continue;
        if (!R->same_as(*h.ring())) throw MixedRings("hint from a different ring");
        hint_pool.push_back(h.monic());
    }
    int64_t spent = 0;
    std::vector<SkewPoly> rev;  // rightmost factor first
    if (D->characteristic() != 0) {
        detail::FastSkew fast(R);
        const uint32_t one_idx = static_cast<uint32_t>(D->index_of(D->one()));
        const int64_t q = D->order();
        detail::IdxPoly gi = fast.encode(g), quot, scratch, cand;
        while (gi.size() >= 2) {
            bool found = false;
            int64_t deg = static_cast<int64_t>(gi.size()) - 1;
            // a reducible g always has a proper monic right factor (its
            // rightmost irreducible factor), which in a twisted ring can
            // have any degree up to deg-1; commutative rings get by with
            // deg/2 since factors are two-sided there
            int64_t dmax = R->is_commutative() ? deg / 2 : deg - 1;
            for (int64_t d = 1; d <= dmax && !found; ++d) {
                int64_t count = pow_i64(q, d);
                if (spent + count > budget)
                    throw BudgetExceeded("skew factorization budget exceeded at degree " + std::to_string(d) +
                                         " (" + std::to_string(count) + " candidates)");
                cand.assign(static_cast<size_t>(d) + 1, 0);
                cand.back() = one_idx;
                for (int64_t idx = 0; idx < count; ++idx) {
                    ++spent;
                    // digits in the canonical enumeration order of monic_skew_at
                    int64_t t = idx;
                    for (int64_t i = d - 1; i >= 0; --i) {
                        cand[static_cast<size_t>(i)] = static_cast<uint32_t>(t % q);
                        t /= q;
                    }
                    if (fast.divide_exact(gi, cand, quot, scratch)) {
                        rev.push_back(fast.decode(cand, R));
                        gi = quot;
                        found = true;
                        break;
                    }
                }
            }
            if (!found) break;
        }
        if (!gi.empty() && gi.size() >= 2) rev.push_back(fast.decode(gi, R));
        else if (gi.size() == 1 && gi[0] != one_idx) throw Error("internal: non-monic residue after factoring");
    } else {
        // candidate linear factors with monomial coefficients
        std::vector<SkewPoly> lin_candidates;
        lin_candidates.push_back(R->var());
        if (D->kind() == FieldKind::Cyclotomic) {
            FieldElem z = D->generator();
            int64_t mc = std::max<int64_t>(D->conductor(), 1);
            for (const Rational& r : detail::default_root_rationals()) {
                FieldElem zk = D->one();
                for (int64_t k = 0; k < mc; ++k) {
                    lin_candidates.push_back(R->var() + R->embed(zk.scale(r)));
                    zk = zk * z;
                }
            }
        }
        while (g.degree() >= 1) {
            if (g.degree() == 1) {
                rev.push_back(g);
                break;
            }
            bool found = false;
            for (const auto& h : hint_pool) {
                if (h.degree() >= g.degree() || h.degree() < 1) continue;
                auto [q, rem] = right_divide(g, h);
                if (rem.is_zero()) {
                    if (h.degree() == 1) {
                        rev.push_back(h);
                    } else {
                        rev.push_back(h);  // uncertified nonlinear hint
                        out.unsplit_positions.push_back(0);  // fixed up below
                    }
                    g = q;
                    found = true;
                    break;
                }
            }
            if (found) continue;
            for (const auto& cand : lin_candidates) {
                auto [q, rem] = right_divide(g, cand);
                if (rem.is_zero()) {
                    rev.push_back(cand);
                    g = q;
                    found = true;
                    break;
                }
            }
            if (!found) {
                rev.push_back(g);
                if (g.degree() >= 2) out.unsplit_positions.push_back(0);  // fixed up below
                break;
            }
        }
    }
    out.factors.assign(rev.rbegin(), rev.rend());
    // recompute unsplit positions against the final order
    out.unsplit_positions.clear();
    for (size_t i = 0; i < out.factors.size(); ++i) {
        if (D->characteristic() != 0) continue;
        if (out.factors[i].degree() >= 2) out.unsplit_positions.push_back(i);
    }
    // recomposition check: unit * product == f exactly
    SkewPoly prod = R->embed(out.unit);
    for (const auto& p : out.factors) prod = prod * p;
    if (prod != f) throw Error("internal: factorization failed recomposition");
    return out;
}

namespace detail {

// finite-field similarity kernel: rank test of the bilinear system over F_p
// with plain integer arithmetic
inline bool similar_finite(const SkewPoly& f, const SkewPoly& g) {
    const SkewRingPtr& R = f.ring();
    const FieldPtr& D = R->coeff_field();
    FastSkew fast(R);
    const int64_t n = f.degree(), k = D->basis_size(), p = D->characteristic();
    const int64_t cols = 2 * n * k, rows = 2 * n * k;
    IdxPoly fi = fast.encode(f), gi = fast.encode(g);
    std::vector<std::vector<int64_t>> mat(static_cast<size_t>(rows), std::vector<int64_t>(static_cast<size_t>(cols), 0));
    // basis elements of D as indices
    std::vector<uint32_t> basis_idx;
    {
        FieldElem gen = D->generator(), b = D->one();
        for (int64_t t = 0; t < k; ++t) {
            basis_idx.push_back(static_cast<uint32_t>(D->index_of(b)));
            b = b * gen;
        }
    }
    auto put_col = [&](int64_t col, const IdxPoly& val, bool negate) {
        for (size_t deg = 0; deg < val.size(); ++deg) {
            if (val[deg] == 0) continue;
            const auto& dig = D->raw_digits(val[deg]);
            for (int64_t t = 0; t < k; ++t) {
                int64_t v = dig[static_cast<size_t>(t)];
                if (negate) v = mod_pos(-v, p);
                auto& cell = mat[deg * static_cast<size_t>(k) + static_cast<size_t>(t)][static_cast<size_t>(col)];
                cell = mod_pos(cell + v, p);
            }
        }
    };
    for (int64_t j = 0; j < n; ++j) {
        for (int64_t t = 0; t < k; ++t) {
            // f * (basis_t x^j): coefficient i+j gains f_i sigma^i(basis_t)
            IdxPoly colf(fi.size() + static_cast<size_t>(j), 0);
            for (size_t i = 0; i < fi.size(); ++i)
                colf[i + static_cast<size_t>(j)] = D->raw_mul(fi[i], fast.sigp(static_cast<int64_t>(i), basis_idx[static_cast<size_t>(t)]));
            put_col(j * k + t, colf, false);
            // (basis_t x^j) * g: coefficient i+j gains basis_t sigma^j(g_i)
            IdxPoly colg(gi.size() + static_cast<size_t>(j), 0);
            for (size_t i = 0; i < gi.size(); ++i)
                colg[i + static_cast<size_t>(j)] = D->raw_mul(basis_idx[static_cast<size_t>(t)], fast.sigp(j, gi[i]));
            put_col(n * k + j * k + t, colg, true);
        }
    }
    // rank < cols iff a nonzero solution exists
    int64_t rank = 0;
    for (int64_t c = 0; c < cols && rank < rows; ++c) {
        int64_t sel = -1;
        for (int64_t r = rank; r < rows; ++r)
            if (mat[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(mat[static_cast<size_t>(sel)], mat[static_cast<size_t>(rank)]);
        int64_t inv = detail::zp_inv_scalar(mat[static_cast<size_t>(rank)][static_cast<size_t>(c)], p);
        for (int64_t j = c; j < cols; ++j)
            mat[static_cast<size_t>(rank)][static_cast<size_t>(j)] =
                mod_pos(mat[static_cast<size_t>(rank)][static_cast<size_t>(j)] * inv, p);
        for (int64_t r = rank + 1; r < rows; ++r) {
            int64_t factor = mat[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (factor == 0) continue;
            for (int64_t j = c; j < cols; ++j)
                mat[static_cast<size_t>(r)][static_cast<size_t>(j)] = mod_pos(
                    mat[static_cast<size_t>(r)][static_cast<size_t>(j)] - factor * mat[static_cast<size_t>(rank)][static_cast<size_t>(j)], p);
        }
        ++rank;
    }
    return rank < cols;
}

}  // namespace detail

// similarity test: deg f = deg g and f*t = s*g admits a nonzero solution
// with deg s = deg t < deg f, decided over the prime subfield / Q
inline bool similar(const SkewPoly& f, const SkewPoly& g) {
    if (f.is_zero() || g.is_zero() || f.degree() < 1 || g.degree() < 1)
        throw ValidationError("similarity is defined for nonzero polynomials of positive degree");
    if (!f.ring()->same_as(*g.ring())) throw MixedRings();
    if (f.degree() != g.degree()) return false;
    if (f == g) return true;
    const SkewRingPtr& R = f.ring();
    const FieldPtr& D = R->coeff_field();
    if (D->characteristic() != 0) return detail::similar_finite(f, g);
    FieldPtr base = base_field(D);
    const int64_t n = f.degree(), k = D->basis_size();
    const int64_t cols = 2 * n * k;        // coefficients of t then of s
    const int64_t rows = 2 * n * k;        // coefficient equations of f*t - s*g

    FMat mat(static_cast<size_t>(rows), FVec(static_cast<size_t>(cols), base->zero()));
    FieldElem gen = D->generator();
    auto write_col = [&](int64_t col, const SkewPoly& val, bool negate) {
        for (int64_t deg = 0; deg < 2 * n; ++deg) {
            FVec coords = val.coeff(deg).base_coords(base);
            for (int64_t t = 0; t < k; ++t) {
                FieldElem v = coords[static_cast<size_t>(t)];
                if (negate) v = -v;
                mat[static_cast<size_t>(deg * k + t)][static_cast<size_t>(col)] =
                    mat[static_cast<size_t>(deg * k + t)][static_cast<size_t>(col)] + v;
            }
        }
    };
    for (int64_t j = 0; j < n; ++j) {
        FieldElem basis = D->one();
        for (int64_t t = 0; t < k; ++t) {
            write_col(j * k + t, f * R->monomial(basis, j), false);
            write_col(n * k + j * k + t, R->monomial(basis, j) * g, true);
            basis = basis * gen;
        }
    }
    return !kernel_basis(base, std::move(mat)).empty();
}

// reduced norm of f as an element of A = q(T): the determinant of the
// splitting matrix of the cyclic presentation with N = D and b = y, entries
// rewritten through x^m = y. Returns a polynomial in y with coefficients
// verified to lie in F = D^sigma.
inline FieldPoly nrd_T(const SkewPoly& f) {
    const SkewRingPtr& R = f.ring();
    const FieldPtr& D = R->coeff_field();
    const int64_t m = R->twist_order();
    auto alg = CyclicAlgebra::make(D, R->sigma(), FieldPoly::variable(D));
    AlgebraElem u = alg->zero();
    std::vector<std::vector<FieldElem>> cs(static_cast<size_t>(m));
    for (int64_t i = 0; i <= f.degree(); ++i) {
        int64_t j = i % m, s = i / m;
        auto& row = cs[static_cast<size_t>(j)];
        if (static_cast<int64_t>(row.size()) <= s) row.resize(static_cast<size_t>(s) + 1, D->zero());
        row[static_cast<size_t>(s)] = f.coeff(i);
    }
    std::vector<FieldPoly> packed;
    for (auto& row : cs) packed.push_back(FieldPoly::from_coeffs(D, std::move(row)));
    AlgebraElem e = alg->zero();
    for (int64_t j = 0; j < m; ++j)
        e = e + alg->embed_poly(packed[static_cast<size_t>(j)]) * alg->gen().pow(j);
    return nrd(e);  // centrality (sigma-fixed coefficients) checked inside
}

// A graded involution tau on T: tau|_D = rho (with sigma rho sigma = rho),
// tau(x) = d*x, tau^2 = id (equivalent to d*sigma(rho(d)) = 1). Unitarity
// (tau nontrivial on the center R) is recorded as a flag; make_unitary
// additionally rejects non-unitary data.
class SkewInvolution {
  public:
    static SkewInvolution make(const SkewRingPtr& ring, const FieldAuto& rho, const FieldElem& d) {
        const FieldPtr& D = ring->coeff_field();
        if (!D->same_as(*rho.field()) || !D->same_as(*d.field()))
            throw MixedFields("involution data from a different field");
        if (d.is_zero()) throw ValidationError("tau(x) = d*x needs d != 0");
        if (!rho.compose(rho).same_as(FieldAuto::identity(D))) throw ValidationError("rho^2 != id");
        const FieldAuto& s = ring->sigma();
        if (!s.compose(rho).compose(s).same_as(rho))
            throw ValidationError("sigma*rho*sigma != rho (tau cannot be an antiautomorphism)");
        FieldElem tw = d * s(rho(d));
        if (!tw.is_one())
            throw ValidationError("tau^2 != id: d*sigma(rho(d)) = " + tw.str());
        SkewInvolution tau;
        tau.r_ = ring;
        tau.rho_ = rho;
        tau.d_ = d;
        // unitarity: tau must move R = F[y]; tau(y) = N_sigma(d) y and
        // tau|_F = rho|_F
        FieldElem norm_d = D->one();
        for (int64_t i = 0; i < ring->twist_order(); ++i) norm_d = norm_d * ring->sigma_pow(i)(d);
        bool moves_F = false;
        for (const auto& w : ring->center().fixed_basis)
            if (rho(w) != w) {
                moves_F = true;
                break;
            }
        tau.unitary_ = moves_F || !norm_d.is_one();
        return tau;
    }

    static SkewInvolution make_unitary(const SkewRingPtr& ring, const FieldAuto& rho, const FieldElem& d) {
        SkewInvolution tau = make(ring, rho, d);
        if (!tau.unitary_)
            throw ValidationError("involution is not unitary on " + ring->key() +
                                  " (tau acts trivially on the center R)");
        return tau;
    }

    const SkewRingPtr& ring() const { return r_; }
    const FieldAuto& rho() const { return rho_; }
    const FieldElem& d() const { return d_; }
    bool unitary() const { return unitary_; }

    SkewPoly apply(const SkewPoly& f) const {
        if (!r_->same_as(*f.ring())) throw MixedRings();
        SkewPoly dx = r_->monomial(d_, 1);
        SkewPoly acc = r_->zero();
        SkewPoly dxi = r_->one();
        for (int64_t i = 0; i <= f.degree(); ++i) {
            const FieldElem c = f.coeff(i);
            if (!c.is_zero()) acc = acc + dxi * r_->embed(rho_(c));
            if (i < f.degree()) dxi = dxi * dx;
        }
        return acc;
    }

    bool fixes(const SkewPoly& f) const { return apply(f) == f; }

  private:
    SkewInvolution() : rho_(FieldAuto()) {}
    SkewRingPtr r_;
    FieldAuto rho_;
    FieldElem d_;
    bool unitary_ = false;
};

}  // namespace skewlab

#endif
