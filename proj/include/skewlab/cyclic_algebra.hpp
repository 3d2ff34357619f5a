#ifndef SKEWLAB_CYCLIC_ALGEBRA_HPP
#define SKEWLAB_CYCLIC_ALGEBRA_HPP

// Cyclic algebras (N/K, sigma, b) with exact arithmetic: elements are
// coefficient vectors over the maximal subfield N in the power basis of the
// cyclic generator y, with relations y^n = b and y*c = sigma(c)*y.
//
// Coefficients are polynomials in a central indeterminate so that the
// twisted polynomial ring D[x;sigma] embeds with b = t (see skew_poly.hpp);
// for an ordinary cyclic algebra every coefficient has degree 0 and b is a
// nonzero constant.

#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "poly.hpp"

namespace skewlab {

class CyclicAlgebra;
using CyclicAlgebraPtr = std::shared_ptr<const CyclicAlgebra>;

class AlgebraElem;

class CyclicAlgebra : public std::enable_shared_from_this<CyclicAlgebra> {
  public:
    // b is a polynomial over N in the central indeterminate; it must be
    // nonzero with sigma-fixed coefficients
    static CyclicAlgebraPtr make(const FieldPtr& N, const FieldAuto& sigma, const FieldPoly& b) {
        if (!N->same_as(*sigma.field())) throw MixedFields("twist automorphism acts on a different field");
        if (b.is_zero()) throw ValidationError("cyclic algebra needs b != 0");
        auto alg = std::shared_ptr<CyclicAlgebra>(new CyclicAlgebra());
        alg->N_ = N;
        alg->sigma_ = sigma;
        alg->n_ = sigma.order();
        for (const auto& c : b.coeffs())
            if (sigma(c) != c) throw ValidationError("b must be fixed by sigma");
        alg->b_ = b;
        alg->sigma_pows_.push_back(FieldAuto::identity(N));
        for (int64_t i = 1; i < alg->n_; ++i) alg->sigma_pows_.push_back(alg->sigma_pows_.back().compose(sigma));
        std::ostringstream k;
        k << "cyclic(" << N->key() << ";" << sigma.str() << ";" << b.str("t") << ")";
        alg->key_ = k.str();
        return alg;
    }

    const FieldPtr& maximal_subfield() const { return N_; }
    const FieldAuto& sigma() const { return sigma_; }
    int64_t degree() const { return n_; }
    const FieldPoly& b() const { return b_; }
    bool b_is_constant() const { return b_.is_constant(); }
    const std::string& key() const { return key_; }
    bool same_as(const CyclicAlgebra& o) const { return key_ == o.key_; }

    const FieldAuto& sigma_pow(int64_t i) const { return sigma_pows_[static_cast<size_t>(mod_pos(i, n_))]; }

    AlgebraElem zero() const;
    AlgebraElem one() const;
    AlgebraElem gen() const;                           // the cyclic generator y
    AlgebraElem embed(const FieldElem& c) const;       // N -> A
    AlgebraElem embed_poly(const FieldPoly& c) const;  // N[t] -> A

    bool is_central_scalar(const FieldPoly& c) const {
        for (const auto& x : c.coeffs())
            if (sigma_(x) != x) return false;
        return true;
    }

  private:
    friend class AlgebraElem;
    CyclicAlgebra() : sigma_(FieldAuto()), b_(FieldPoly(nullptr)) {}

    FieldPtr N_;
    FieldAuto sigma_;
    int64_t n_ = 1;
    FieldPoly b_;
    std::vector<FieldAuto> sigma_pows_;
    std::string key_;
};

class AlgebraElem {
  public:
    AlgebraElem() = default;

    const CyclicAlgebraPtr& algebra() const { return alg_; }
    const std::vector<FieldPoly>& coeffs() const { return c_; }
    const FieldPoly& coeff(int64_t i) const { return c_[static_cast<size_t>(i)]; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!x.is_zero()) return false;
        return true;
    }

    AlgebraElem operator+(const AlgebraElem& o) const {
        check(o);
        AlgebraElem r = *this;
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = r.c_[i] + o.c_[i];
        return r;
    }

    AlgebraElem operator-() const {
        AlgebraElem r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    AlgebraElem operator-(const AlgebraElem& o) const { return *this + (-o); }

    // product under y^n = b, y*c = sigma(c)*y
    AlgebraElem operator*(const AlgebraElem& o) const {
        check(o);
        const auto& A = *alg_;
        AlgebraElem r = A.zero();
        for (int64_t i = 0; i < A.n_; ++i) {
            if (c_[static_cast<size_t>(i)].is_zero()) continue;
            for (int64_t j = 0; j < A.n_; ++j) {
                if (o.c_[static_cast<size_t>(j)].is_zero()) continue;
                FieldPoly term = c_[static_cast<size_t>(i)] * o.c_[static_cast<size_t>(j)].map_coeffs(A.sigma_pow(i));
                int64_t k = i + j;
                if (k >= A.n_) {
                    k -= A.n_;
                    term = term * A.b_;
                }
                r.c_[static_cast<size_t>(k)] = r.c_[static_cast<size_t>(k)] + term;
            }
        }
        return r;
    }

    AlgebraElem scaled(const FieldElem& s) const {
        AlgebraElem r = *this;
        for (auto& x : r.c_) x = x.scaled(s);
        return r;
    }

    AlgebraElem pow(int64_t e) const {
        AlgebraElem r = alg_->one();
        for (int64_t i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    // inverse via the regular representation over the prime subfield;
    // needs a constant b (a genuine division algebra, not the T-embedding)
    AlgebraElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        if (!alg_->b_is_constant())
            throw UnsupportedField("inverse needs a constant b; divide at the divisor level instead");
        const FieldPtr& N = alg_->N_;
        FieldPtr base = base_field(N);
        const int64_t n = alg_->n_, k = N->basis_size();
        FMat m(static_cast<size_t>(n * k), FVec(static_cast<size_t>(n * k), base->zero()));
        FVec rhs(static_cast<size_t>(n * k), base->zero());
        rhs[0] = base->one();
        FieldElem g = N->generator();
        for (int64_t j = 0; j < n; ++j) {
            FieldElem basis = N->one();
            for (int64_t t = 0; t < k; ++t) {
                AlgebraElem unit = alg_->zero();
                unit.c_[static_cast<size_t>(j)] = FieldPoly::constant(basis);
                AlgebraElem prod = *this * unit;
                for (int64_t jj = 0; jj < n; ++jj) {
                    FieldElem val = prod.c_[static_cast<size_t>(jj)].coeff(0);
                    FVec coords = val.base_coords(base);
                    for (int64_t tt = 0; tt < k; ++tt)
                        m[static_cast<size_t>(jj * k + tt)][static_cast<size_t>(j * k + t)] = coords[static_cast<size_t>(tt)];
                }
                basis = basis * g;
            }
        }
        auto x = solve_linear(base, std::move(m), std::move(rhs));
        if (!x) throw DivisionByZero("element is not invertible");
        AlgebraElem r = alg_->zero();
        for (int64_t j = 0; j < n; ++j) {
            FVec coords(x->begin() + j * k, x->begin() + (j + 1) * k);
            r.c_[static_cast<size_t>(j)] = FieldPoly::constant(lift_from_base(N, coords));
        }
        return r;
    }

    bool operator==(const AlgebraElem& o) const {
        if (!alg_->same_as(*o.alg_)) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const AlgebraElem& o) const { return !(*this == o); }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << c_[i].str("t") << ")";
            if (i == 1) os << "*y";
            if (i > 1) os << "*y^" << i;
        }
        if (first) os << "0";
        return os.str();
    }

  private:
    friend class CyclicAlgebra;
    friend class UnitaryInvolution;

    void check(const AlgebraElem& o) const {
        if (!alg_ || !o.alg_) throw Error("internal: uninitialized algebra element");
        if (!alg_->same_as(*o.alg_)) throw MixedAlgebras();
    }

    CyclicAlgebraPtr alg_;
    std::vector<FieldPoly> c_;
};

inline AlgebraElem CyclicAlgebra::zero() const {
    AlgebraElem e;
    e.alg_ = shared_from_this();
    e.c_.assign(static_cast<size_t>(n_), FieldPoly(N_));
    return e;
}

inline AlgebraElem CyclicAlgebra::one() const { return embed(N_->one()); }

inline AlgebraElem CyclicAlgebra::gen() const {
    AlgebraElem e = zero();
    if (n_ == 1) {
        e.c_[0] = b_;  // y = b when sigma is trivial
        return e;
    }
    e.c_[1] = FieldPoly::constant(N_->one());
    return e;
}

inline AlgebraElem CyclicAlgebra::embed(const FieldElem& c) const {
    AlgebraElem e = zero();
    e.c_[0] = FieldPoly::constant(c);
    return e;
}

inline AlgebraElem CyclicAlgebra::embed_poly(const FieldPoly& c) const {
    AlgebraElem e = zero();
    e.c_[0] = c;
    return e;
}

// image of u under c |-> diag(c, sigma^{n-1}(c), ..., sigma(c)),
// y |-> cyclic shift with b in the corner; multiplicative by construction
// (both spec examples at n = 2 agree with this pair)
inline std::vector<std::vector<FieldPoly>> splitting_matrix(const AlgebraElem& u) {
    const CyclicAlgebra& A = *u.algebra();
    const FieldPtr& N = A.maximal_subfield();
    const int64_t n = A.degree();
    std::vector<std::vector<FieldPoly>> m(static_cast<size_t>(n), std::vector<FieldPoly>(static_cast<size_t>(n), FieldPoly(N)));
    // diag part of each power of y times coefficients: build columns.
    // y maps e_i -> e_{i+1} (i < n-1), e_{n-1} -> b*e_0; c maps e_i -> sigma^{-i}(c) e_i.
    for (int64_t j = 0; j < n; ++j) {
        const FieldPoly& cj = u.coeff(j);
        if (cj.is_zero()) continue;
        // contribution of cj * y^j: e_i -> sigma^{-(i+j)}(cj) * (b if wrap) e_{i+j mod n}
        for (int64_t i = 0; i < n; ++i) {
            int64_t dest = i + j;
            FieldPoly entry = cj.map_coeffs(A.sigma_pow(-(dest)));
            if (dest >= n) {
                dest -= n;
                entry = entry * A.b();
            }
            m[static_cast<size_t>(dest)][static_cast<size_t>(i)] = m[static_cast<size_t>(dest)][static_cast<size_t>(i)] + entry;
        }
    }
    return m;
}

// exact determinant by cofactor expansion (n stays desk-scale)
inline FieldPoly det_poly_matrix(const std::vector<std::vector<FieldPoly>>& m, const FieldPtr& f) {
    const size_t n = m.size();
    if (n == 0) return FieldPoly::constant(f->one());
    if (n == 1) return m[0][0];
    FieldPoly acc(f);
    for (size_t r = 0; r < n; ++r) {
        if (m[r][0].is_zero()) continue;
        std::vector<std::vector<FieldPoly>> minor;
        minor.reserve(n - 1);
        for (size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            minor.emplace_back(m[i].begin() + 1, m[i].end());
        }
        FieldPoly term = m[r][0] * det_poly_matrix(minor, f);
        acc = (r % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// reduced norm: determinant of the splitting matrix, centrality verified
inline FieldPoly nrd(const AlgebraElem& u) {
    const CyclicAlgebra& A = *u.algebra();
    FieldPoly d = det_poly_matrix(splitting_matrix(u), A.maximal_subfield());
    if (!A.is_central_scalar(d)) throw NotCentral("internal: reduced norm landed outside the center: " + d.str("t"));
    return d;
}

// Unitary involution tau(c y^i) = y^i rho(c). Validity is checked eagerly:
// rho^2 = id, rho sigma rho^{-1} = sigma^{-1}, rho(b) = b, and tau moves the
// center (construction fails otherwise).
class UnitaryInvolution {
  public:
    static UnitaryInvolution make(const CyclicAlgebraPtr& alg, const FieldAuto& rho) {
        if (!alg->maximal_subfield()->same_as(*rho.field()))
            throw MixedFields("involution coefficient map acts on a different field");
        if (!rho.compose(rho).same_as(FieldAuto::identity(rho.field())))
            throw ValidationError("rho^2 != id");
        const FieldAuto& s = alg->sigma();
        if (!rho.compose(s).same_as(s.inverse_auto().compose(rho)))
            throw ValidationError("rho does not invert sigma (rho*sigma != sigma^{-1}*rho)");
        for (const auto& c : alg->b().coeffs())
            if (rho(c) != c) throw ValidationError("b is not rho-symmetric");
        UnitaryInvolution tau;
        tau.alg_ = alg;
        tau.rho_ = rho;
        // unitarity: rho must move the sigma-fixed subfield (the center's
        // degree-0 part)
        bool moves_center = false;
        for (const auto& w : fixed_subspace(alg->maximal_subfield(), {s}))
            if (rho(w) != w) {
                moves_center = true;
                break;
            }
        if (!moves_center)
            throw ValidationError("involution is not unitary: rho fixes the center " + alg->key());
        // involutivity and the antiautomorphism law on generators
        AlgebraElem y = alg->gen();
        AlgebraElem c = alg->embed(alg->maximal_subfield()->generator());
        if (tau.apply(tau.apply(y)) != y || tau.apply(tau.apply(c)) != c)
            throw ValidationError("tau^2 != id on generators");
        if (tau.apply(y * c) != tau.apply(c) * tau.apply(y))
            throw ValidationError("tau is not an antiautomorphism on generators");
        return tau;
    }

    const CyclicAlgebraPtr& algebra() const { return alg_; }
    const FieldAuto& rho() const { return rho_; }

    AlgebraElem apply(const AlgebraElem& u) const {
        if (!alg_->same_as(*u.algebra())) throw MixedAlgebras();
        AlgebraElem r = alg_->zero();
        for (int64_t i = 0; i < alg_->degree(); ++i) {
            const FieldPoly& ci = u.coeff(i);
            if (ci.is_zero()) continue;
            // y^i rho(c) = sigma^i(rho(c)) y^i
            r.c_[static_cast<size_t>(i)] = ci.map_coeffs(rho_).map_coeffs(alg_->sigma_pow(i));
        }
        return r;
    }

    // restriction of tau to the center: coefficientwise rho
    FieldPoly apply_center(const FieldPoly& z) const { return z.map_coeffs(rho_); }

  private:
    UnitaryInvolution() : rho_(FieldAuto()) {}
    CyclicAlgebraPtr alg_;
    FieldAuto rho_;
};

inline AlgebraElem inv_apply(const UnitaryInvolution& tau, const AlgebraElem& u) { return tau.apply(u); }

// Nrd/tau compatibility: nrd(tau(u)) = tau(nrd(u)), both sides computed
// through independent code paths.
inline bool check_nrd_tau(const UnitaryInvolution& tau, const AlgebraElem& u) {
    return nrd(tau.apply(u)) == tau.apply_center(nrd(u));
}

}  // namespace skewlab

#endif
