#ifndef SKEWLAB_DIVISOR_HPP
#define SKEWLAB_DIVISOR_HPP

// Div(T): the free abelian group on similarity classes of irreducibles of
// T = D[x;sigma], the divisor map delta, the degree homomorphism, the
// reduced-norm map into Div(R), and the involution/unit/group actions.
//
// Classes are canonicalized: over finite D the representative is the
// minimal monic irreducible (degree, then lexicographic coefficients); over
// characteristic 0 the first normalized representative encountered is kept
// (equality is still decided by the similarity test).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lattice.hpp"
#include "report.hpp"
#include "skew_poly.hpp"

namespace skewlab {

class DivisorContext;
class DivisorR;
class Divisor;
using DivisorContextPtr = std::shared_ptr<DivisorContext>;

class DivisorContext {
  public:
    explicit DivisorContext(SkewRingPtr ring) : ring_(std::move(ring)) {}

    static DivisorContextPtr make(const SkewRingPtr& ring) { return std::make_shared<DivisorContext>(ring); }

    const SkewRingPtr& ring() const { return ring_; }

    // canonical similarity class of a monic irreducible
    int64_t class_of(const SkewPoly& p_in) {
        SkewPoly p = p_in.monic();
        if (p.degree() < 1) throw ValidationError("classes are spanned by irreducibles of positive degree");
        std::string key = p.str();
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        int64_t id = -1;
        if (ring_->is_commutative()) {
            // commutative T: similarity of monic irreducibles is equality
            id = intern(p);
        } else if (ring_->coeff_field()->characteristic() != 0) {
            // known representatives first (each was found by a full minimal
            // scan, so returning one preserves canonicality); only a genuinely
            // new class pays for the lexicographic scan
            for (size_t i = 0; i < reps_.size() && id < 0; ++i)
                if (reps_[i].degree() == p.degree() && similar(p, reps_[i])) id = static_cast<int64_t>(i);
            if (id < 0) {
                for (const auto& cand : irreducibles_of_degree(p.degree())) {
                    if (similar(p, cand)) {
                        id = intern(cand);
                        break;
                    }
                }
            }
            if (id < 0) throw Error("internal: irreducible not found in its own degree enumeration: " + key);
        } else {
            // similar irreducibles share their monic reduced norm; use it as
            // a sound pre-filter before the rational similarity solve
            std::string nkey = nrd_T(p).monic().str();
            for (size_t i = 0; i < reps_.size(); ++i) {
                if (reps_[i].degree() != p.degree()) continue;
                if (rep_nrd_key_[i] != nkey) continue;
                if (similar(p, reps_[i])) {
                    id = static_cast<int64_t>(i);
                    break;
                }
            }
            if (id < 0) id = intern(p);
        }
        cache_[key] = id;
        return id;
    }

    const SkewPoly& rep(int64_t id) const { return reps_[static_cast<size_t>(id)]; }
    int64_t class_degree(int64_t id) const { return reps_[static_cast<size_t>(id)].degree(); }

    // all monic irreducibles of a degree over finite D, in canonical order
    const std::vector<SkewPoly>& irreducibles_of_degree(int64_t d) {
        if (ring_->coeff_field()->characteristic() == 0)
            throw UnsupportedField("irreducible enumeration needs finite coefficients");
        auto it = irr_.find(d);
        if (it != irr_.end()) return it->second;
        std::vector<SkewPoly> list;
        const FieldPtr& D = ring_->coeff_field();
        int64_t count = pow_i64(D->order(), d);
        for (int64_t idx = 0; idx < count; ++idx) {
            SkewPoly cand = detail::monic_skew_at(ring_, d, idx);
            if (is_irreducible(cand)) list.push_back(cand);
        }
        return irr_.emplace(d, std::move(list)).first->second;
    }

    // canonical class ids of all classes of a given degree (finite D)
    const std::vector<int64_t>& classes_of_degree(int64_t d) {
        auto it = classes_.find(d);
        if (it != classes_.end()) return it->second;
        std::vector<int64_t> ids;
        for (const auto& p : irreducibles_of_degree(d)) {
            int64_t id = class_of(p);
            bool seen = false;
            for (int64_t j : ids) seen = seen || j == id;
            if (!seen) ids.push_back(id);
        }
        return classes_.emplace(d, std::move(ids)).first->second;
    }

    bool is_irreducible(const SkewPoly& p) {
        if (p.degree() < 1) return false;
        if (p.degree() == 1) return true;
        // a reducible p has a monic right factor of some degree up to deg-1
        // (deg/2 is not enough in twisted rings)
        const FieldPtr& D = ring_->coeff_field();
        const int64_t q = D->order();
        detail::FastSkew fast(ring_);
        detail::IdxPoly pi = fast.encode(p), quot, scratch, cand;
        int64_t dmax = ring_->is_commutative() ? p.degree() / 2 : p.degree() - 1;
        for (int64_t d = 1; d <= dmax; ++d) {
            int64_t cnt = pow_i64(q, d);
            cand.assign(static_cast<size_t>(d) + 1, 0);
            cand.back() = static_cast<uint32_t>(D->index_of(D->one()));
            for (int64_t idx = 0; idx < cnt; ++idx) {
                int64_t t = idx;
                for (int64_t i = d - 1; i >= 0; --i) {
                    cand[static_cast<size_t>(i)] = static_cast<uint32_t>(t % q);
                    t /= q;
                }
                if (fast.divide_exact(pi, cand, quot, scratch)) return false;
            }
        }
        return true;
    }

    // memoized nrd_T of a class representative
    const FieldPoly& class_nrd(int64_t id) {
        auto it = nrd_cache_.find(id);
        if (it != nrd_cache_.end()) return it->second;
        return nrd_cache_.emplace(id, nrd_T(rep(id)).monic()).first->second;
    }

  private:
    int64_t intern(const SkewPoly& rep) {
        for (size_t i = 0; i < reps_.size(); ++i)
            if (reps_[i] == rep) return static_cast<int64_t>(i);
        reps_.push_back(rep);
        rep_nrd_key_.push_back(nrd_T(rep).monic().str());
        return static_cast<int64_t>(reps_.size()) - 1;
    }

    friend DivisorR dnrd(const Divisor&, int64_t);

    SkewRingPtr ring_;
    std::vector<SkewPoly> reps_;
    std::vector<std::string> rep_nrd_key_;
    std::map<std::string, int64_t> cache_;
    std::map<int64_t, std::vector<SkewPoly>> irr_;
    std::map<int64_t, std::vector<int64_t>> classes_;
    std::map<int64_t, FieldPoly> nrd_cache_;
    std::map<int64_t, std::shared_ptr<const DivisorR>> dnrd_cache_;
};

class Divisor {
  public:
    explicit Divisor(DivisorContextPtr ctx) : ctx_(std::move(ctx)) {}

    const DivisorContextPtr& context() const { return ctx_; }
    bool is_zero() const { return n_.empty(); }
    const std::map<int64_t, int64_t>& entries() const { return n_; }

    void add_class(int64_t id, int64_t mult) {
        if (mult == 0) return;
        auto it = n_.find(id);
        if (it == n_.end()) {
            n_[id] = mult;
        } else {
            it->second += mult;
            if (it->second == 0) n_.erase(it);
        }
    }

    Divisor operator+(const Divisor& o) const {
        check(o);
        Divisor r = *this;
        for (const auto& [id, m] : o.n_) r.add_class(id, m);
        return r;
    }
    Divisor operator-(const Divisor& o) const {
        check(o);
        Divisor r = *this;
        for (const auto& [id, m] : o.n_) r.add_class(id, -m);
        return r;
    }
    Divisor scaled(int64_t k) const {
        Divisor r(ctx_);
        if (k != 0)
            for (const auto& [id, m] : n_) r.n_[id] = m * k;
        return r;
    }

    bool effective() const {
        for (const auto& [id, m] : n_)
            if (m < 0) return false;
        return true;
    }

    int64_t deg() const {
        int64_t d = 0;
        for (const auto& [id, m] : n_) d += m * ctx_->class_degree(id);
        return d;
    }

    // componentwise <=, for effective divisors
    bool fits_inside(const Divisor& o) const {
        for (const auto& [id, m] : n_) {
            auto it = o.n_.find(id);
            int64_t om = it == o.n_.end() ? 0 : it->second;
            if (m > om) return false;
        }
        return true;
    }

    bool operator==(const Divisor& o) const { return n_ == o.n_; }
    bool operator!=(const Divisor& o) const { return !(*this == o); }

    std::string str() const {
        if (n_.empty()) return "0";
        // order by (degree, representative) for stable output
        std::vector<std::pair<int64_t, int64_t>> items(n_.begin(), n_.end());
        std::sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
            return ctx_->rep(a.first).cmp(ctx_->rep(b.first)) < 0;
        });
        std::ostringstream os;
        bool first = true;
        for (const auto& [id, m] : items) {
            if (!first) os << " ";
            if (m < 0) {
                os << "-";
                if (!first) os << " ";
            } else if (!first) {
                os << "+ ";
            }
            first = false;
            int64_t am = m < 0 ? -m : m;
            if (am != 1) os << am;
            os << "[" << ctx_->rep(id).str() << "]";
        }
        return os.str();
    }

  private:
    void check(const Divisor& o) const {
        if (ctx_ != o.ctx_) throw MixedRings("divisors from different contexts");
    }

    DivisorContextPtr ctx_;
    std::map<int64_t, int64_t> n_;
};

// jh divisor of T/Tf via factorization into irreducibles; hints are
// candidate right factors validated by exact division
inline Divisor delta(const DivisorContextPtr& ctx, const SkewPoly& f, int64_t budget = 200000,
                     const std::vector<SkewPoly>& hints = {}) {
    if (f.is_zero()) throw DivisionByZeroPoly("delta of zero");
    if (!ctx->ring()->same_as(*f.ring())) throw MixedRings();
    SkewFactorization fac = factor(f, budget, hints);
    if (!fac.complete())
        throw Inconclusive("factorization left an unsplit factor: " + fac.factors[fac.unsplit_positions[0]].str());
    Divisor d(ctx);
    for (const auto& p : fac.factors) d.add_class(ctx->class_of(p), 1);
    return d;
}

inline Divisor delta_frac(const DivisorContextPtr& ctx, const SkewPoly& f, const SkewPoly& z,
                          int64_t budget = 200000, const std::vector<SkewPoly>& hints = {}) {
    if (z.is_zero()) throw DivisionByZeroPoly("delta_frac with zero denominator");
    if (!ctx->ring()->is_central(z))
        throw NotCentral("denominator is not central: " + z.str());
    if (z.is_constant()) return delta(ctx, f, budget, hints);
    return delta(ctx, f, budget, hints) - delta(ctx, z, budget, hints);
}

inline int64_t divisor_deg(const Divisor& a) { return a.deg(); }

// ---- Div(R): divisors over the commutative center R = F[y] ----

class DivisorR {
  public:
    explicit DivisorR(FieldPtr coeff_field) : D_(std::move(coeff_field)) {}

    bool is_zero() const { return n_.empty(); }
    const std::map<FieldPoly, int64_t, PolyLess>& entries() const { return n_; }

    void add_prime(const FieldPoly& p, int64_t mult) {
        if (mult == 0) return;
        auto it = n_.find(p);
        if (it == n_.end()) {
            n_.emplace(p, mult);
        } else {
            it->second += mult;
            if (it->second == 0) n_.erase(it);
        }
    }

    DivisorR operator+(const DivisorR& o) const {
        DivisorR r = *this;
        for (const auto& [p, m] : o.n_) r.add_prime(p, m);
        return r;
    }
    DivisorR scaled(int64_t k) const {
        DivisorR r(D_);
        if (k != 0)
            for (const auto& [p, m] : n_) r.n_.emplace(p, m * k);
        return r;
    }

    bool operator==(const DivisorR& o) const {
        if (n_.size() != o.n_.size()) return false;
        auto it = n_.begin(), jt = o.n_.begin();
        for (; it != n_.end(); ++it, ++jt)
            if (it->first != jt->first || it->second != jt->second) return false;
        return true;
    }
    bool operator!=(const DivisorR& o) const { return !(*this == o); }

    std::string str() const {
        if (n_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [p, m] : n_) {
            if (!first) os << " + ";
            first = false;
            if (m != 1) os << m;
            os << "[" << p.str("y") << "]";
        }
        return os.str();
    }

  private:
    FieldPtr D_;
    std::map<FieldPoly, int64_t, PolyLess> n_;
};

// factor a nonzero central polynomial g in F[y] (presented with sigma-fixed
// coefficients over D) into F-irreducibles: factor over D, then group the
// factors into sigma-orbits
inline DivisorR delta_R(const SkewRingPtr& ring, const FieldPoly& g, int64_t budget = 200000,
                        const std::vector<FieldElem>& extra_roots = {}) {
    const FieldPtr& D = ring->coeff_field();
    if (g.is_zero()) throw DivisionByZeroPoly("delta_R of zero");
    for (const auto& c : g.coeffs())
        if (ring->sigma()(c) != c) throw NotCentral("polynomial has coefficients outside F = D^sigma");
    DivisorR out(D);
    if (g.degree() == 0) return out;
    CommFactorization fac;
    if (D->characteristic() != 0) {
        fac = factor_commutative_finite(g, budget);
    } else {
        fac = factor_commutative_char0(g, extra_roots);
        if (!fac.complete())
            throw CommutativeFactorizationIncomplete("center factorization left unsplit: " +
                                                     fac.unsplit[0].str("y"));
    }
    // group D-irreducible factors into sigma-orbits; each orbit product is
    // an F-irreducible
    std::map<FieldPoly, int64_t, PolyLess> multiset;
    for (const auto& h : fac.irreducibles) multiset[h] += 1;
    const FieldAuto& s = ring->sigma();
    while (!multiset.empty()) {
        FieldPoly h = multiset.begin()->first;
        std::vector<FieldPoly> orbit{h};
        FieldPoly img = h.map_coeffs(s);
        while (img != h) {
            orbit.push_back(img);
            img = img.map_coeffs(s);
        }
        FieldPoly prod = FieldPoly::constant(D->one());
        for (const auto& o : orbit) prod = prod * o;
        for (const auto& c : prod.coeffs())
            if (s(c) != c) throw Error("internal: orbit product escaped the center");
        for (const auto& o : orbit) {
            auto it = multiset.find(o);
            if (it == multiset.end()) throw Error("internal: sigma-orbit not closed in factor multiset");
            if (--it->second == 0) multiset.erase(it);
        }
        out.add_prime(prod, 1);
    }
    return out;
}

// DNrd: classwise image of a divisor in Div(R), satisfying
// dnrd(delta(a)) = delta_R(nrd(a)); per-class values are memoized
inline DivisorR dnrd(const Divisor& a, int64_t budget = 200000) {
    const DivisorContextPtr& ctx = a.context();
    DivisorR out(ctx->ring()->coeff_field());
    for (const auto& [id, m] : a.entries()) {
        auto it = ctx->dnrd_cache_.find(id);
        if (it == ctx->dnrd_cache_.end()) {
            FieldPoly g = ctx->class_nrd(id);
            auto val = std::make_shared<const DivisorR>(delta_R(ctx->ring(), g, budget));
            it = ctx->dnrd_cache_.emplace(id, std::move(val)).first;
        }
        out = out + it->second->scaled(m);
    }
    return out;
}

// ---- actions on Div(T) ----

// action of the involution: [T/Tp] -> [T/T tau(p)]
inline Divisor tau_action(const SkewInvolution& tau, const Divisor& a) {
    const DivisorContextPtr& ctx = a.context();
    Divisor r(ctx);
    for (const auto& [id, m] : a.entries()) r.add_class(ctx->class_of(tau.apply(ctx->rep(id)).monic()), m);
    return r;
}

inline int64_t tau_class_action(const DivisorContextPtr& ctx, const SkewInvolution& tau, int64_t id) {
    return ctx->class_of(tau.apply(ctx->rep(id)).monic());
}

// conjugation by the homogeneous unit d*x^j of E = D[x^{±1}; sigma]:
// [T/Tp] -> [T/T (d x^j) p (d x^j)^{-1}]
inline SkewPoly conjugate_by_unit(const SkewRingPtr& ring, const FieldElem& d, int64_t j, const SkewPoly& p) {
    if (d.is_zero()) throw DivisionByZero("conjugating unit has zero coefficient");
    std::vector<FieldElem> cs;
    cs.reserve(static_cast<size_t>(p.degree()) + 1);
    const FieldAuto& sj = ring->sigma_pow(j);
    for (int64_t i = 0; i <= p.degree(); ++i) {
        // d sigma^j(a_i) sigma^i(d^{-1}) x^i
        cs.push_back(d * sj(p.coeff(i)) * ring->sigma_pow(i)(d.inverse()));
    }
    SkewPoly q = ring->from_coeffs(std::move(cs));
    if (q.degree() != p.degree()) throw NotNormalizing("conjugation left T");  // cannot happen in rank 1
    return q;
}

inline Divisor unit_action(const FieldElem& d, int64_t j, const Divisor& a) {
    const DivisorContextPtr& ctx = a.context();
    Divisor r(ctx);
    for (const auto& [id, m] : a.entries())
        r.add_class(ctx->class_of(conjugate_by_unit(ctx->ring(), d, j, ctx->rep(id)).monic()), m);
    return r;
}

// A bijection of similarity classes (conjugation by a unit, an involution
// composite, ...), given by its action on class ids.
struct ClassAction {
    std::string name;
    std::function<int64_t(int64_t)> map;
};

inline ClassAction unit_class_action(const DivisorContextPtr& ctx, const FieldElem& d, int64_t j,
                                     const std::string& name) {
    return ClassAction{name, [ctx, d, j](int64_t id) {
                           return ctx->class_of(conjugate_by_unit(ctx->ring(), d, j, ctx->rep(id)).monic());
                       }};
}

namespace detail {

// orbit closure of a support set under a list of actions; every action must
// restrict to a permutation of the closure
inline std::vector<int64_t> support_closure(const std::vector<int64_t>& start,
                                            const std::vector<ClassAction>& actions, size_t cap = 4096) {
    std::vector<int64_t> closure = start;
    std::sort(closure.begin(), closure.end());
    closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
    size_t head = 0;
    while (head < closure.size()) {
        int64_t id = closure[head++];
        for (const auto& act : actions) {
            int64_t img = act.map(id);
            if (std::find(closure.begin(), closure.end(), img) == closure.end()) closure.push_back(img);
        }
        if (closure.size() > cap) throw BudgetExceeded("support closure exceeded cap");
    }
    std::sort(closure.begin(), closure.end());
    return closure;
}

using PermVec = std::vector<int64_t>;  // images by closure position

inline PermVec restrict_to_closure(const ClassAction& act, const std::vector<int64_t>& closure) {
    PermVec p(closure.size());
    for (size_t i = 0; i < closure.size(); ++i) {
        int64_t img = act.map(closure[i]);
        auto it = std::lower_bound(closure.begin(), closure.end(), img);
        if (it == closure.end() || *it != img) throw Error("internal: action does not stabilize closure");
        p[i] = static_cast<int64_t>(it - closure.begin());
    }
    return p;
}

inline PermVec compose_perm(const PermVec& a, const PermVec& b) {  // a after b
    PermVec r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = a[static_cast<size_t>(b[i])];
    return r;
}

// enumerate the group generated by commuting permutations
inline std::vector<PermVec> enumerate_abelian_group(const std::vector<PermVec>& gens, size_t n, size_t cap = 512) {
    PermVec idp(n);
    for (size_t i = 0; i < n; ++i) idp[i] = static_cast<int64_t>(i);
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (compose_perm(gens[i], gens[j]) != compose_perm(gens[j], gens[i]))
                throw NonAbelian("generator actions do not commute on the support closure");
    std::vector<PermVec> group{idp};
    size_t head = 0;
    while (head < group.size()) {
        PermVec g = group[head++];
        for (const auto& gen : gens) {
            PermVec h = compose_perm(gen, g);
            if (std::find(group.begin(), group.end(), h) == group.end()) group.push_back(h);
        }
        if (group.size() > cap) throw BudgetExceeded("group enumeration exceeded cap");
    }
    return group;
}

}  // namespace detail

// orbit-sum norm over the abelian group generated by the listed actions
inline Divisor norm_H(const std::vector<ClassAction>& gens, const Divisor& a) {
    const DivisorContextPtr& ctx = a.context();
    std::vector<int64_t> support;
    for (const auto& [id, m] : a.entries()) support.push_back(id);
    if (support.empty()) return a;
    auto closure = detail::support_closure(support, gens);
    std::vector<detail::PermVec> perms;
    for (const auto& g : gens) perms.push_back(detail::restrict_to_closure(g, closure));
    auto group = detail::enumerate_abelian_group(perms, closure.size());
    Divisor out(ctx);
    for (const auto& h : group) {
        for (const auto& [id, m] : a.entries()) {
            size_t pos = static_cast<size_t>(
                std::lower_bound(closure.begin(), closure.end(), id) - closure.begin());
            out.add_class(closure[static_cast<size_t>(h[pos])], m);
        }
    }
    return out;
}

// membership of a in the sublattice I_H spanned by {h beta - beta}
inline bool in_IH(const std::vector<ClassAction>& gens, const Divisor& a) {
    const DivisorContextPtr& ctx = a.context();
    (void)ctx;
    std::vector<int64_t> support;
    for (const auto& [id, m] : a.entries()) support.push_back(id);
    if (support.empty()) return true;
    auto closure = detail::support_closure(support, gens);
    std::vector<detail::PermVec> perms;
    for (const auto& g : gens) perms.push_back(detail::restrict_to_closure(g, closure));
    auto group = detail::enumerate_abelian_group(perms, closure.size());
    const size_t n = closure.size();
    IntMat gens_mat;
    for (const auto& h : group) {
        for (size_t b = 0; b < n; ++b) {
            IntVec v(n, Int(0));
            v[static_cast<size_t>(h[b])] += 1;
            v[b] -= 1;
            gens_mat.push_back(std::move(v));
        }
    }
    IntLattice lat = IntLattice::from_generators(n, gens_mat);
    IntVec target(n, Int(0));
    for (const auto& [id, m] : a.entries()) {
        size_t pos = static_cast<size_t>(std::lower_bound(closure.begin(), closure.end(), id) - closure.begin());
        target[pos] = m;
    }
    return lat.contains(target);
}

// integer basis of the sublattice of divisors fixed by an order <= 2 action,
// over the given support classes: fixed singletons plus orbit sums
inline std::vector<Divisor> fixed_divisors(const DivisorContextPtr& ctx, const ClassAction& g,
                                           const std::vector<int64_t>& support) {
    std::vector<Divisor> basis;
    std::vector<int64_t> seen;
    for (int64_t id : support) {
        if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
        int64_t img = g.map(id);
        if (g.map(img) != id) throw ValidationError("action is not of order <= 2 on the support");
        Divisor d(ctx);
        if (img == id) {
            d.add_class(id, 1);
            seen.push_back(id);
        } else {
            d.add_class(id, 1);
            d.add_class(img, 1);
            seen.push_back(id);
            seen.push_back(img);
        }
        basis.push_back(std::move(d));
    }
    return basis;
}

}  // namespace skewlab

#endif
