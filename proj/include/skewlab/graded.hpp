#ifndef SKEWLAB_GRADED_HPP
#define SKEWLAB_GRADED_HPP

// Graded division algebras presented as iterated twisted Laurent extensions
// E = E0[x_1^{±1}, ..., x_n^{±1}; sigma_1, ..., sigma_n] with commutation
// scalars x_j x_i = w_{ij} x_i x_j, together with graded unitary
// involutions, the leading-term map, reduced norms of homogeneous units and
// the closed-form SK1 of the totally ramified case.
//
// E0 is either an exact field or a cyclic algebra; both are handled through
// the degree-1 cyclic presentation, so coefficients are AlgebraElem values
// throughout.

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cyclic_algebra.hpp"
#include "lattice.hpp"
#include "report.hpp"

namespace skewlab {

class GradedAlgebra;
using GradedAlgebraPtr = std::shared_ptr<const GradedAlgebra>;

struct GradedUnit {
    GradedAlgebraPtr alg;
    AlgebraElem coeff;            // nonzero element of E0
    std::vector<int64_t> exps;    // exponents of the generator word x_1^{k_1}...x_n^{k_n}
};

class GradedAlgebra : public std::enable_shared_from_this<GradedAlgebra> {
  public:
    // E0 given as a cyclic algebra (degree 1 when it is a field); twists act
    // on the maximal subfield N coefficientwise and must be the identity
    // when E0 is noncommutative; w(i,j) for i<j is the scalar with
    // x_j x_i = w(i,j) x_i x_j.
    static GradedAlgebraPtr make(const CyclicAlgebraPtr& e0, std::vector<FieldAuto> twists,
                                 std::vector<std::vector<Rational>> gen_degrees,
                                 std::map<std::pair<int64_t, int64_t>, FieldElem> omega,
                                 IntMat declared_center_lattice) {
        auto E = std::shared_ptr<GradedAlgebra>(new GradedAlgebra());
        E->e0_ = e0;
        if (!e0->b_is_constant()) throw ValidationError("E0 must be a genuine division algebra (constant b)");
        E->n_ = static_cast<int64_t>(twists.size());
        if (E->n_ < 1) throw ValidationError("need at least one Laurent generator");
        if (static_cast<int64_t>(gen_degrees.size()) != E->n_)
            throw ValidationError("generator degree count mismatch");
        const FieldPtr& N = e0->maximal_subfield();
        for (const auto& t : twists) {
            if (!N->same_as(*t.field())) throw MixedFields("twist acts on a different field");
            if (e0->degree() > 1 && !t.is_identity())
                throw ValidationError("twists on a noncommutative E0 are out of desk scope (must be identity)");
        }
        for (size_t i = 0; i < twists.size(); ++i)
            for (size_t j = i + 1; j < twists.size(); ++j)
                if (!twists[i].compose(twists[j]).same_as(twists[j].compose(twists[i])))
                    throw ValidationError("twist automorphisms must commute");
        E->twists_ = std::move(twists);
        E->gen_deg_ = std::move(gen_degrees);
        // commutation scalars: stored for i<j, inverse pairs derived
        for (int64_t i = 0; i < E->n_; ++i)
            for (int64_t j = i + 1; j < E->n_; ++j) {
                FieldElem w = N->one();
                auto it = omega.find({i, j});
                if (it != omega.end()) w = it->second;
                if (w.is_zero()) throw ValidationError("commutation scalar must be a unit");
                for (const auto& t : E->twists_)
                    if (t(w) != w) throw ValidationError("commutation scalar must be fixed by every twist");
                if (e0->degree() > 1 && !(e0->sigma()(w) == w))
                    throw ValidationError("commutation scalar must be central in E0");
                E->omega_.emplace(std::make_pair(i, j), w);
            }
        // derived central exponent lattice: box scan with direct commutation
        // checks, periods from the twist and scalar orders
        std::vector<int64_t> periods;
        {
            for (int64_t i = 0; i < E->n_; ++i) {
                int64_t p = E->twists_[static_cast<size_t>(i)].order();
                for (int64_t j = 0; j < E->n_; ++j) {
                    if (i == j) continue;
                    auto key = std::make_pair(std::min(i, j), std::max(i, j));
                    auto it = E->omega_.find(key);
                    if (it != E->omega_.end() && !it->second.is_one()) {
                        int64_t o = elem_order(it->second);
                        p = p / gcd64(p, o) * o;
                    }
                }
                periods.push_back(p);
            }
        }
        int64_t box = 1;
        for (int64_t p : periods) {
            box *= p;
            if (box > 4096) throw BudgetExceeded("central lattice box scan too large");
        }
        IntMat derived;
        for (int64_t i = 0; i < E->n_; ++i) {
            IntVec v(static_cast<size_t>(E->n_), Int(0));
            v[static_cast<size_t>(i)] = periods[static_cast<size_t>(i)];
            derived.push_back(std::move(v));
        }
        for (int64_t idx = 0; idx < box; ++idx) {
            std::vector<int64_t> k(static_cast<size_t>(E->n_), 0);
            int64_t t = idx;
            bool zero = true;
            for (int64_t i = 0; i < E->n_; ++i) {
                k[static_cast<size_t>(i)] = t % periods[static_cast<size_t>(i)];
                if (k[static_cast<size_t>(i)] != 0) zero = false;
                t /= periods[static_cast<size_t>(i)];
            }
            if (zero) continue;
            if (E->monomial_is_central(k)) {
                IntVec v;
                for (int64_t x : k) v.push_back(Int(x));
                derived.push_back(std::move(v));
            }
        }
        E->center_lattice_ = IntLattice::from_generators(static_cast<size_t>(E->n_), derived);
        IntLattice declared = IntLattice::from_generators(static_cast<size_t>(E->n_), declared_center_lattice);
        if (declared != E->center_lattice_)
            throw ValidationError("declared center lattice disagrees with the commutation structure");
        if (E->center_lattice_.rank() != static_cast<size_t>(E->n_))
            throw ValidationError("center lattice must have full rank");
        // [Gamma_E : Gamma_Z] = |det| of the center basis
        Int det = 1;
        for (size_t i = 0; i < E->center_lattice_.basis().size(); ++i) det *= E->center_lattice_.basis()[i][i];
        E->grade_index_ = static_cast<int64_t>(det);
        // [E0 : Z0] with Z0 = fixed field of im(theta) inside Z(E0)
        if (e0->degree() == 1) {
            // count the distinct twist compositions
            std::vector<FieldAuto> group{FieldAuto::identity(N)};
            size_t head = 0;
            while (head < group.size()) {
                FieldAuto g = group[head++];
                for (const auto& t : E->twists_) {
                    FieldAuto h = t.compose(g);
                    bool seen = false;
                    for (const auto& x : group) seen = seen || x.same_as(h);
                    if (!seen) group.push_back(h);
                }
            }
            E->theta_image_order_ = static_cast<int64_t>(group.size());
            E->e0_dim_over_z0_ = E->theta_image_order_;
        } else {
            // theta is trivial (identity twists); Z0 = Z(E0)
            E->theta_image_order_ = 1;
            E->e0_dim_over_z0_ = e0->degree() * e0->degree();
        }
        // fundamental equality and the index
        int64_t dim = E->e0_dim_over_z0_ * E->grade_index_;
        int64_t r = 1;
        while (r * r < dim) ++r;
        if (r * r != dim)
            throw ValidationError("[E:Z] = " + std::to_string(dim) + " is not a square");
        E->index_ = r;
        if (!check_fundamental_equality_data(E->e0_dim_over_z0_, E->grade_index_, dim))
            throw ValidationError("fundamental equality failed at construction");
        return E;
    }

    // --- convenience constructors for the desk instances ---

    // untwisted Laurent extension D[x, x^{-1}] of a cyclic algebra or field
    static GradedAlgebraPtr laurent(const CyclicAlgebraPtr& d) {
        IntMat z{{Int(1)}};
        return make(d, {FieldAuto::identity(d->maximal_subfield())}, {{Rational(1)}}, {}, z);
    }

    // graded symbol algebra of degree n over L[x1^{±1}, x2^{±1}] with
    // i^n = x1, j^n = x2, i j = omega j i
    static GradedAlgebraPtr symbol(const FieldPtr& L, int64_t n, const FieldElem& omega) {
        if (elem_order(omega) != n) throw ValidationError("omega must be a primitive n-th root of unity");
        auto e0 = CyclicAlgebra::make(L, FieldAuto::identity(L), FieldPoly::constant(L->one()));
        std::map<std::pair<int64_t, int64_t>, FieldElem> w;
        // i j = omega j i means j i = omega^{-1} i j
        w.emplace(std::make_pair<int64_t, int64_t>(0, 1), omega.inverse());
        IntMat z{{Int(n), Int(0)}, {Int(0), Int(n)}};
        return make(e0, {FieldAuto::identity(L), FieldAuto::identity(L)},
                    {{Rational(1, n), Rational(0)}, {Rational(0), Rational(1, n)}}, std::move(w), z);
    }

    // decomposably semiramified pair: E0 = N (compositum) with commuting
    // twists sigma_1, sigma_2 of orders n_1, n_2; y_i^{n_i} central
    static GradedAlgebraPtr semiramified_pair(const FieldPtr& N, const FieldAuto& s1, const FieldAuto& s2) {
        auto e0 = CyclicAlgebra::make(N, FieldAuto::identity(N), FieldPoly::constant(N->one()));
        int64_t n1 = s1.order(), n2 = s2.order();
        IntMat z{{Int(n1), Int(0)}, {Int(0), Int(n2)}};
        return make(e0, {s1, s2}, {{Rational(1, n1), Rational(0)}, {Rational(0), Rational(1, n2)}}, {}, z);
    }

    const CyclicAlgebraPtr& e0() const { return e0_; }
    bool e0_is_field() const { return e0_->degree() == 1; }
    const FieldPtr& coeff_field() const { return e0_->maximal_subfield(); }
    int64_t gens() const { return n_; }
    const FieldAuto& twist(int64_t i) const { return twists_[static_cast<size_t>(i)]; }
    const std::vector<Rational>& gen_degree(int64_t i) const { return gen_deg_[static_cast<size_t>(i)]; }
    const IntLattice& center_lattice() const { return center_lattice_; }
    int64_t grade_index() const { return grade_index_; }   // [Gamma_E : Gamma_Z]
    int64_t e0_dim_over_z0() const { return e0_dim_over_z0_; }
    int64_t index() const { return index_; }               // ind(E)
    int64_t theta_image_order() const { return theta_image_order_; }

    FieldElem omega(int64_t i, int64_t j) const {  // x_j x_i = omega(i,j) x_i x_j for i < j
        if (i == j) return coeff_field()->one();
        bool flip = i > j;
        if (flip) std::swap(i, j);
        FieldElem w = omega_.at({i, j});
        return flip ? w.inverse() : w;
    }

    GradedUnit unit(const AlgebraElem& coeff, std::vector<int64_t> exps) const {
        if (coeff.is_zero()) throw ZeroElement("graded units have nonzero coefficients");
        if (static_cast<int64_t>(exps.size()) != n_) throw ValidationError("exponent vector has wrong length");
        return GradedUnit{shared_from_this(), coeff, std::move(exps)};
    }
    GradedUnit unit_f(const FieldElem& c, std::vector<int64_t> exps) const {
        return unit(e0_->embed(c), std::move(exps));
    }
    GradedUnit one() const { return unit(e0_->one(), std::vector<int64_t>(static_cast<size_t>(n_), 0)); }
    GradedUnit gen(int64_t i) const {
        std::vector<int64_t> e(static_cast<size_t>(n_), 0);
        e[static_cast<size_t>(i)] = 1;
        return unit(e0_->one(), std::move(e));
    }

    // sigma^k = prod_i sigma_i^{k_i} acting on coefficients
    AlgebraElem twist_apply(const std::vector<int64_t>& k, const AlgebraElem& c) const {
        if (e0_->degree() > 1) return c;  // identity twists
        FieldAuto phi = FieldAuto::identity(coeff_field());
        for (int64_t i = 0; i < n_; ++i) phi = phi.compose(twists_[static_cast<size_t>(i)].pow(k[static_cast<size_t>(i)]));
        return e0_->embed_poly(c.coeff(0).map_coeffs(phi));
    }

    // scalar collected when reordering x^k * x^l into x^{k+l}
    FieldElem reorder_scalar(const std::vector<int64_t>& k, const std::vector<int64_t>& l) const {
        FieldElem w = coeff_field()->one();
        for (int64_t i = 0; i < n_; ++i)
            for (int64_t j = i + 1; j < n_; ++j) {
                // move x_i^{l_i} leftward past x_j^{k_j} (j > i)
                int64_t e = k[static_cast<size_t>(j)] * l[static_cast<size_t>(i)];
                if (e != 0) w = w * omega(i, j).pow(e);
            }
        return w;
    }

    bool monomial_is_central(const std::vector<int64_t>& k) const;

    std::string exps_str(const std::vector<int64_t>& e) const {
        std::ostringstream os;
        bool any = false;
        for (int64_t i = 0; i < n_; ++i) {
            int64_t v = e[static_cast<size_t>(i)];
            if (v == 0) continue;
            if (any) os << "*";
            any = true;
            os << "x" << (i + 1);
            if (v != 1) os << "^" << v;
        }
        if (!any) os << "1";
        return os.str();
    }

  private:
    GradedAlgebra() = default;

    static bool check_fundamental_equality_data(int64_t e0dim, int64_t gindex, int64_t edim) {
        return edim == e0dim * gindex;
    }

    CyclicAlgebraPtr e0_;
    int64_t n_ = 0;
    std::vector<FieldAuto> twists_;
    std::vector<std::vector<Rational>> gen_deg_;
    std::map<std::pair<int64_t, int64_t>, FieldElem> omega_;
    IntLattice center_lattice_;
    int64_t grade_index_ = 1;
    int64_t e0_dim_over_z0_ = 1;
    int64_t theta_image_order_ = 1;
    int64_t index_ = 1;
};

inline bool graded_same(const GradedUnit& u, const GradedUnit& v) {
    return u.alg == v.alg || (u.alg && v.alg && u.alg->coeff_field()->same_as(*v.alg->coeff_field()));
}

inline GradedUnit graded_mul(const GradedUnit& u, const GradedUnit& v) {
    if (u.alg.get() != v.alg.get()) throw MixedAlgebras("graded units from different algebras");
    const GradedAlgebra& E = *u.alg;
    AlgebraElem c = u.coeff * E.twist_apply(u.exps, v.coeff);
    FieldElem w = E.reorder_scalar(u.exps, v.exps);
    c = c.scaled(w);
    std::vector<int64_t> e(u.exps.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = u.exps[i] + v.exps[i];
    return E.unit(c, std::move(e));
}

inline bool graded_eq(const GradedUnit& u, const GradedUnit& v) {
    return u.exps == v.exps && u.coeff == v.coeff;
}

inline GradedUnit graded_inv(const GradedUnit& u) {
    const GradedAlgebra& E = *u.alg;
    std::vector<int64_t> neg(u.exps.size());
    for (size_t i = 0; i < neg.size(); ++i) neg[i] = -u.exps[i];
    GradedUnit bare = E.unit(E.e0()->one(), neg);
    GradedUnit probe = graded_mul(bare, u);  // coefficient-only unit
    AlgebraElem c = probe.coeff.inverse();
    GradedUnit inv = graded_mul(E.unit(c, std::vector<int64_t>(neg.size(), 0)), bare);
    GradedUnit check = graded_mul(inv, u);
    if (!graded_eq(check, E.one())) throw Error("internal: graded inverse failed");
    return inv;
}

inline GradedUnit graded_pow(const GradedUnit& u, int64_t e) {
    const GradedAlgebra& E = *u.alg;
    if (e < 0) return graded_pow(graded_inv(u), -e);
    GradedUnit acc = E.one();
    for (int64_t i = 0; i < e; ++i) acc = graded_mul(acc, u);
    return acc;
}

inline std::string graded_str(const GradedUnit& u) {
    std::ostringstream os;
    os << "(" << u.coeff.str() << ")*" << u.alg->exps_str(u.exps);
    return os.str();
}

inline bool GradedAlgebra::monomial_is_central(const std::vector<int64_t>& k) const {
    auto self = shared_from_this();
    GradedUnit u{self, e0_->one(), k};
    // commutes with the coefficient generators
    GradedUnit cgen{self, e0_->embed(coeff_field()->generator()), std::vector<int64_t>(static_cast<size_t>(n_), 0)};
    if (!graded_eq(graded_mul(u, cgen), graded_mul(cgen, u))) return false;
    if (e0_->degree() > 1) {
        GradedUnit ygen{self, e0_->gen(), std::vector<int64_t>(static_cast<size_t>(n_), 0)};
        if (!graded_eq(graded_mul(u, ygen), graded_mul(ygen, u))) return false;
    }
    for (int64_t i = 0; i < n_; ++i) {
        GradedUnit xi{self, e0_->one(), std::vector<int64_t>(static_cast<size_t>(n_), 0)};
        xi.exps[static_cast<size_t>(i)] = 1;
        if (!graded_eq(graded_mul(u, xi), graded_mul(xi, u))) return false;
    }
    return true;
}

// fundamental equality: [E:Z] = [E0:Z0] * |Gamma_E : Gamma_Z|, each side
// recomputed from its own data
inline bool check_fundamental_equality(const GradedAlgebraPtr& E) {
    int64_t lhs = E->index() * E->index();
    return lhs == E->e0_dim_over_z0() * E->grade_index();
}

// ---- formal sums of homogeneous components, and the leading-term map ----

class GradedElem {
  public:
    explicit GradedElem(GradedAlgebraPtr alg) : alg_(std::move(alg)) {}

    static GradedElem from_unit(const GradedUnit& u) {
        GradedElem e(u.alg);
        e.c_[u.exps] = u.coeff;
        return e;
    }

    const GradedAlgebraPtr& algebra() const { return alg_; }
    bool is_zero() const { return c_.empty(); }
    size_t terms() const { return c_.size(); }

    void add_term(const std::vector<int64_t>& exps, const AlgebraElem& coeff) {
        if (coeff.is_zero()) return;
        auto it = c_.find(exps);
        if (it == c_.end()) {
            c_.emplace(exps, coeff);
        } else {
            AlgebraElem s = it->second + coeff;
            if (s.is_zero()) c_.erase(it);
            else it->second = s;
        }
    }

    GradedElem operator+(const GradedElem& o) const {
        GradedElem r = *this;
        for (const auto& [e, c] : o.c_) r.add_term(e, c);
        return r;
    }

    GradedElem operator*(const GradedElem& o) const {
        GradedElem r(alg_);
        for (const auto& [e1, c1] : c_)
            for (const auto& [e2, c2] : o.c_) {
                GradedUnit prod = graded_mul(alg_->unit(c1, e1), alg_->unit(c2, e2));
                r.add_term(prod.exps, prod.coeff);
            }
        return r;
    }

    bool operator==(const GradedElem& o) const {
        if (c_.size() != o.c_.size()) return false;
        auto it = c_.begin(), jt = o.c_.begin();
        for (; it != c_.end(); ++it, ++jt)
            if (it->first != jt->first || !(it->second == jt->second)) return false;
        return true;
    }

    const std::map<std::vector<int64_t>, AlgebraElem>& components() const { return c_; }

  private:
    GradedAlgebraPtr alg_;
    std::map<std::vector<int64_t>, AlgebraElem> c_;  // lexicographic exponent order
};

// homogeneous component of minimal degree under the lexicographic order
inline GradedUnit leading_lambda(const GradedElem& c) {
    if (c.is_zero()) throw ZeroElement("leading term of zero");
    const auto& [e, coeff] = *c.components().begin();
    return c.algebra()->unit(coeff, e);
}

// ---- graded involutions ----

class GradedInvolution {
  public:
    // coefficient antiautomorphism: eta (field E0) or a unitary involution
    // of the cyclic E0; tau(x_i) = d_i x_i
    static GradedInvolution make(const GradedAlgebraPtr& alg, std::optional<FieldAuto> eta,
                                 std::optional<UnitaryInvolution> inv0, std::vector<AlgebraElem> dgen) {
        GradedInvolution t;
        t.alg_ = alg;
        if (alg->e0_is_field()) {
            if (!eta) throw ValidationError("field E0 needs a coefficient automorphism eta");
            if (!eta->compose(*eta).same_as(FieldAuto::identity(alg->coeff_field())))
                throw ValidationError("eta^2 != id");
        } else {
            if (!inv0) throw ValidationError("algebra E0 needs a coefficient involution");
        }
        t.eta_ = std::move(eta);
        t.inv0_ = std::move(inv0);
        if (static_cast<int64_t>(dgen.size()) != alg->gens()) throw ValidationError("need one d_i per generator");
        t.dgen_ = std::move(dgen);
        // involutivity and the antiautomorphism law on generators
        for (int64_t i = 0; i < alg->gens(); ++i) {
            GradedUnit xi = alg->gen(i);
            if (!graded_eq(t.apply_unit(t.apply_unit(xi)), xi))
                throw ValidationError("tau^2 != id on generator " + std::to_string(i + 1));
        }
        GradedUnit cg = alg->unit(alg->e0()->embed(alg->coeff_field()->generator()),
                                  std::vector<int64_t>(static_cast<size_t>(alg->gens()), 0));
        if (!graded_eq(t.apply_unit(t.apply_unit(cg)), cg)) throw ValidationError("tau^2 != id on E0");
        for (int64_t i = 0; i < alg->gens(); ++i)
            for (int64_t j = 0; j < alg->gens(); ++j) {
                GradedUnit lhs = t.apply_unit(graded_mul(alg->gen(i), alg->gen(j)));
                GradedUnit rhs = graded_mul(t.apply_unit(alg->gen(j)), t.apply_unit(alg->gen(i)));
                if (!graded_eq(lhs, rhs)) throw ValidationError("tau is not an antiautomorphism on generators");
            }
        for (int64_t i = 0; i < alg->gens(); ++i) {
            GradedUnit lhs = t.apply_unit(graded_mul(alg->gen(i), cg));
            GradedUnit rhs = graded_mul(t.apply_unit(cg), t.apply_unit(alg->gen(i)));
            if (!graded_eq(lhs, rhs)) throw ValidationError("tau is not an antiautomorphism on E0 x generators");
        }
        // unitarity: tau must move the center (Z0 or a central monomial)
        bool moves = false;
        {
            // Z0: fixed field of the twists inside Z(E0)
            std::vector<FieldAuto> stab;
            for (int64_t i = 0; i < alg->gens(); ++i) stab.push_back(alg->twist(i));
            if (!alg->e0_is_field()) stab.push_back(alg->e0()->sigma());
            for (const auto& w : fixed_subspace(alg->coeff_field(), stab)) {
                if (t.alg_->e0_is_field()) {
                    if ((*t.eta_)(w) != w) {
                        moves = true;
                        break;
                    }
                } else {
                    AlgebraElem a = alg->e0()->embed(w);
                    if (!(t.inv0_->apply(a) == a)) {
                        moves = true;
                        break;
                    }
                }
            }
            if (!moves) {
                for (const auto& row : alg->center_lattice().basis()) {
                    std::vector<int64_t> k;
                    for (const auto& x : row) k.push_back(static_cast<int64_t>(x));
                    GradedUnit z = alg->unit(alg->e0()->one(), k);
                    if (!graded_eq(t.apply_unit(z), z)) {
                        moves = true;
                        break;
                    }
                }
            }
        }
        if (!moves) throw ValidationError("graded involution is not unitary: tau fixes the center");
        return t;
    }

    const GradedAlgebraPtr& algebra() const { return alg_; }

    AlgebraElem apply_coeff(const AlgebraElem& c) const {
        if (alg_->e0_is_field()) return alg_->e0()->embed_poly(c.coeff(0).map_coeffs(*eta_));
        return inv0_->apply(c);
    }

    GradedUnit apply_unit(const GradedUnit& u) const {
        if (u.alg.get() != alg_.get()) throw MixedAlgebras();
        // tau(c x^k) = tau(x_n^{k_n}) ... tau(x_1^{k_1}) tau0(c)
        GradedUnit acc = alg_->unit(apply_coeff(u.coeff), std::vector<int64_t>(u.exps.size(), 0));
        for (int64_t i = 0; i < alg_->gens(); ++i) {
            int64_t k = u.exps[static_cast<size_t>(i)];
            if (k == 0) continue;
            GradedUnit tx = graded_mul(alg_->unit(dgen_[static_cast<size_t>(i)], std::vector<int64_t>(u.exps.size(), 0)),
                                       alg_->gen(i));
            acc = graded_mul(graded_pow(tx, k), acc);
        }
        return acc;
    }

    GradedElem apply(const GradedElem& e) const {
        GradedElem out(alg_);
        for (const auto& [exps, coeff] : e.components()) {
            GradedUnit t = apply_unit(alg_->unit(coeff, exps));
            out.add_term(t.exps, t.coeff);
        }
        return out;
    }

    bool fixes(const GradedUnit& u) const { return graded_eq(apply_unit(u), u); }

  private:
    GradedInvolution() = default;
    GradedAlgebraPtr alg_;
    std::optional<FieldAuto> eta_;
    std::optional<UnitaryInvolution> inv0_;
    std::vector<AlgebraElem> dgen_;
};

// ---- canonical map theta_E and reduced norms ----

// conjugation action of a homogeneous unit of the given grade on Z(E0);
// grade given in degree space (Q^n). Well-definition is asserted by
// comparing two unit choices.
inline FieldAuto theta_E(const GradedAlgebraPtr& E, const std::vector<Rational>& grade) {
    // solve sum k_i deg(x_i) = grade with k integral
    const int64_t n = E->gens();
    FieldPtr Q = Field::rationals();
    FMat m(static_cast<size_t>(n), FVec(static_cast<size_t>(n), Q->zero()));
    FVec rhs;
    for (int64_t r = 0; r < n; ++r) {
        for (int64_t i = 0; i < n; ++i) m[static_cast<size_t>(r)][static_cast<size_t>(i)] =
            Q->from_rational(E->gen_degree(i)[static_cast<size_t>(r)]);
        rhs.push_back(Q->from_rational(grade[static_cast<size_t>(r)]));
    }
    auto sol = solve_linear(Q, std::move(m), std::move(rhs));
    if (!sol) throw NotAGrade("grade is not in the lattice spanned by the generator degrees");
    std::vector<int64_t> k;
    for (const auto& c : *sol) {
        Rational v = c.coords()[0];
        if (denominator(v) != 1) throw NotAGrade("grade has non-integral generator coordinates");
        k.push_back(static_cast<int64_t>(numerator(v)));
    }
    if (!E->e0_is_field()) return FieldAuto::identity(E->coeff_field());
    FieldAuto phi = FieldAuto::identity(E->coeff_field());
    for (int64_t i = 0; i < n; ++i) phi = phi.compose(E->twist(i).pow(k[static_cast<size_t>(i)]));
    // well-definition: conjugation by c*x^k agrees with conjugation by x^k
    {
        GradedUnit u1 = E->unit(E->e0()->one(), k);
        GradedUnit u2 = E->unit(E->e0()->embed(E->coeff_field()->generator()), k);
        FieldElem probe = E->coeff_field()->generator();
        GradedUnit p{E, E->e0()->embed(probe), std::vector<int64_t>(static_cast<size_t>(n), 0)};
        GradedUnit c1 = graded_mul(graded_mul(u1, p), graded_inv(u1));
        GradedUnit c2 = graded_mul(graded_mul(u2, p), graded_inv(u2));
        if (!graded_eq(c1, c2)) throw Error("internal: theta_E is not well-defined");
        if (!(c1.coeff == E->e0()->embed(phi(probe)))) throw Error("internal: theta_E mismatch");
    }
    return phi;
}

// reduced norm of a in E0* as an element of E: the norm formula
// N_{Z(E0)/Z0}(Nrd_{E0}(a))^lambda with lambda = ind(E)/(ind(E0)[Z(E0):Z0])
inline AlgebraElem graded_nrd(const AlgebraElem& a, const GradedAlgebraPtr& E) {
    if (a.is_zero()) throw DivisionByZero("reduced norm of zero");
    FieldPoly nr = nrd(a);  // Nrd_{E0}(a), degree-0 polynomial
    FieldElem v = nr.coeff(0);
    int64_t ind_e0 = E->e0()->degree();
    int64_t z_e0_over_z0 = E->e0_is_field() ? E->theta_image_order() : 1;
    // field norm: product over the distinct twist compositions
    FieldElem nv = v;
    if (E->e0_is_field() && z_e0_over_z0 > 1) {
        std::vector<FieldAuto> group{FieldAuto::identity(E->coeff_field())};
        size_t head = 0;
        while (head < group.size()) {
            FieldAuto g = group[head++];
            for (int64_t i = 0; i < E->gens(); ++i) {
                FieldAuto h = E->twist(i).compose(g);
                bool seen = false;
                for (const auto& x : group) seen = seen || x.same_as(h);
                if (!seen) group.push_back(h);
            }
        }
        nv = E->coeff_field()->one();
        for (const auto& g : group) nv = nv * g(v);
    }
    int64_t lambda_num = E->index();
    int64_t lambda_den = ind_e0 * z_e0_over_z0;
    if (lambda_num % lambda_den != 0) throw Error("internal: non-integral norm exponent");
    int64_t lambda = lambda_num / lambda_den;
    return E->e0()->embed(nv.pow(lambda));
}

// full reduced norm of a homogeneous unit u = c x^k:
// Nrd(c) via the norm formula times Nrd(x^k) via the minimal polynomial
// X^s - z with s the order of deg(x^k) modulo Gamma_Z and z = (x^k)^s
inline GradedUnit nrd_unit(const GradedUnit& u) {
    const GradedAlgebraPtr& E = u.alg;
    const int64_t r = E->index();
    // coefficient part
    AlgebraElem nc = graded_nrd(u.coeff, E);
    // monomial part
    std::vector<int64_t> zero_exps(u.exps.size(), 0);
    int64_t s = 1;
    {
        IntVec k;
        for (int64_t x : u.exps) k.push_back(Int(x));
        for (s = 1; s <= r; ++s) {
            IntVec sk = k;
            for (auto& x : sk) x *= s;
            if (E->center_lattice().contains(sk)) break;
        }
        if (s > r) throw NotAGrade("degree order modulo the center lattice exceeds the index");
    }
    if (r % s != 0) throw Error("internal: s does not divide the index");
    GradedUnit mono = E->unit(E->e0()->one(), u.exps);
    GradedUnit z = graded_pow(mono, s);
    if (!E->monomial_is_central(z.exps))
        throw NotCentral("monomial power escaped the center lattice");
    // z must be genuinely central (coefficient included)
    {
        GradedUnit cgen = E->unit(E->e0()->embed(E->coeff_field()->generator()), zero_exps);
        if (!graded_eq(graded_mul(z, cgen), graded_mul(cgen, z)))
            throw NotCentral("u^s is not central; reduced norm of this unit is out of scope");
    }
    GradedUnit zpow = graded_pow(z, r / s);
    int64_t sign = ((r + r / s) % 2 == 0) ? 1 : -1;
    AlgebraElem c = zpow.coeff;
    if (sign < 0) c = -c;
    GradedUnit mono_nrd = E->unit(c, zpow.exps);
    return graded_mul(E->unit(nc, zero_exps), mono_nrd);
}

// membership in Sigma': the reduced norm of u is tau-symmetric
inline bool sigma_prime_member(const GradedUnit& u, const GradedInvolution& tau) {
    GradedUnit nu = nrd_unit(u);
    return tau.fixes(nu);
}

// ---- SK1 of the totally ramified case ----

struct FinAbGroup {
    std::vector<int64_t> invariant_factors;  // d_1 | d_2 | ...
    bool trivial() const { return invariant_factors.empty(); }
    int64_t order() const {
        int64_t o = 1;
        for (int64_t d : invariant_factors) o *= d;
        return o;
    }
    bool operator==(const FinAbGroup& o) const { return invariant_factors == o.invariant_factors; }
    std::string str() const {
        if (invariant_factors.empty()) return "trivial";
        std::ostringstream os;
        for (size_t i = 0; i < invariant_factors.size(); ++i) {
            if (i) os << " x ";
            os << "Z/" << invariant_factors[i];
        }
        return os.str();
    }
};

// SK1(E, tau) for E the graded tensor product of symbol algebras of degrees
// r_1, ..., r_m over L (totally ramified over its center):
//   {xi in mu_n(L) : eta(xi) = xi^{-1}} / mu_s(L),
// n = prod r_i, s = lcm(r_i). Computed by enumeration and verified to be
// cyclic (a subquotient of the cyclic mu(L)).
inline FinAbGroup sk1_totally_ramified(const FieldPtr& L, const FieldAuto& eta,
                                       const std::vector<int64_t>& rs) {
    if (eta.is_identity() || !eta.compose(eta).same_as(FieldAuto::identity(L)))
        throw HypothesisViolated("eta must have order exactly 2");
    if (rs.empty()) throw ValidationError("need at least one symbol degree");
    int64_t n = 1, s = 1;
    for (int64_t r : rs) {
        if (r < 2) throw ValidationError("symbol degrees must be >= 2");
        n *= r;
        s = s / gcd64(s, r) * r;
    }
    // primitive s-th root with eta(omega) = omega^{-1}
    std::vector<FieldElem> mu_s = roots_of_unity(L, s);
    FieldElem omega = L->zero();
    for (const auto& xi : mu_s)
        if (elem_order(xi) == s) {
            omega = xi;
            break;
        }
    if (omega.is_zero())
        throw HypothesisViolated("L contains no primitive " + std::to_string(s) + "-th root of unity");
    if (eta(omega) != omega.inverse())
        throw HypothesisViolated("eta(omega) != omega^{-1} for the primitive root");
    std::vector<FieldElem> mu_n = roots_of_unity(L, n);
    std::vector<FieldElem> num;
    for (const auto& xi : mu_n)
        if (eta(xi) == xi.inverse()) num.push_back(xi);
    for (const auto& xi : mu_s) {
        bool in = false;
        for (const auto& y : num) in = in || y == xi;
        if (!in) throw Error("internal: mu_s is not inside the numerator");
    }
    if (num.size() % mu_s.size() != 0) throw Error("internal: subgroup order does not divide");
    int64_t q = static_cast<int64_t>(num.size() / mu_s.size());
    // verify the quotient is cyclic of order q: some coset has order q
    int64_t maxord = 1;
    for (const auto& xi : num) {
        int64_t t = 1;
        FieldElem acc = xi;
        auto in_denominator = [&](const FieldElem& v) {
            for (const auto& y : mu_s)
                if (y == v) return true;
            return false;
        };
        while (!in_denominator(acc)) {
            acc = acc * xi;
            ++t;
        }
        maxord = std::max(maxord, t);
    }
    if (maxord != q) throw Error("internal: quotient is not cyclic of the expected order");
    FinAbGroup g;
    if (q > 1) g.invariant_factors.push_back(q);
    return g;
}

}  // namespace skewlab

#endif
