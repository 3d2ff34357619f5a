#ifndef SKEWLAB_DIHEDRAL_HPP
#define SKEWLAB_DIHEDRAL_HPP

// Standalone verification of the twisted-norm kernel identity on abstract
// permutation modules of generalized dihedral groups G = H ∪ H·tau with H
// finite abelian, tau^2 = 1 and tau h tau = h^{-1}. The module is Z^basis
// with permutation action; the twisted norm is
//   N~(a) = sum_h h a - sum_h h tau a,
// and its integer kernel is compared against
//   I_H + sum_h Fix(h tau)
// as exact lattices.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "numbers.hpp"

namespace skewlab {

struct Perm {
    std::vector<int64_t> img;

    static Perm identity(int64_t n) {
        Perm p;
        p.img.resize(static_cast<size_t>(n));
        for (int64_t i = 0; i < n; ++i) p.img[static_cast<size_t>(i)] = i;
        return p;
    }

    int64_t size() const { return static_cast<int64_t>(img.size()); }
    int64_t operator()(int64_t i) const { return img[static_cast<size_t>(i)]; }

    Perm compose(const Perm& o) const {  // this after o
        Perm r;
        r.img.resize(img.size());
        for (size_t i = 0; i < img.size(); ++i) r.img[i] = img[static_cast<size_t>(o.img[i])];
        return r;
    }

    Perm inverse() const {
        Perm r;
        r.img.resize(img.size());
        for (size_t i = 0; i < img.size(); ++i) r.img[static_cast<size_t>(img[i])] = static_cast<int64_t>(i);
        return r;
    }

    bool is_identity() const {
        for (size_t i = 0; i < img.size(); ++i)
            if (img[i] != static_cast<int64_t>(i)) return false;
        return true;
    }

    bool valid() const {
        std::vector<bool> seen(img.size(), false);
        for (auto v : img) {
            if (v < 0 || v >= static_cast<int64_t>(img.size()) || seen[static_cast<size_t>(v)]) return false;
            seen[static_cast<size_t>(v)] = true;
        }
        return true;
    }

    bool operator==(const Perm& o) const { return img == o.img; }
    bool operator!=(const Perm& o) const { return !(*this == o); }
};

class PermGModule {
  public:
    // validates the generalized dihedral relations and enumerates H
    static PermGModule build(std::vector<Perm> h_gens, Perm tau, size_t h_cap = 1024) {
        PermGModule m;
        m.n_ = tau.size();
        if (!tau.valid()) throw ValidationError("tau is not a permutation");
        for (const auto& g : h_gens) {
            if (g.size() != m.n_ || !g.valid()) throw ValidationError("H generator is not a permutation of the basis");
        }
        for (size_t i = 0; i < h_gens.size(); ++i)
            for (size_t j = i + 1; j < h_gens.size(); ++j)
                if (h_gens[i].compose(h_gens[j]) != h_gens[j].compose(h_gens[i]))
                    throw RelationViolated("H generators " + std::to_string(i) + " and " + std::to_string(j) +
                                           " do not commute");
        if (!tau.compose(tau).is_identity()) throw RelationViolated("tau^2 != 1");
        for (size_t i = 0; i < h_gens.size(); ++i) {
            if (tau.compose(h_gens[i]).compose(tau) != h_gens[i].inverse())
                throw RelationViolated("tau h tau != h^{-1} for H generator " + std::to_string(i));
        }
        m.h_gens_ = std::move(h_gens);
        m.tau_ = std::move(tau);
        m.H_.push_back(Perm::identity(m.n_));
        size_t head = 0;
        while (head < m.H_.size()) {
            Perm g = m.H_[head++];
            for (const auto& gen : m.h_gens_) {
                Perm h = gen.compose(g);
                if (std::find(m.H_.begin(), m.H_.end(), h) == m.H_.end()) m.H_.push_back(h);
            }
            if (m.H_.size() > h_cap) throw BudgetExceeded("H enumeration exceeded cap");
        }
        return m;
    }

    int64_t basis_size() const { return n_; }
    const std::vector<Perm>& H() const { return H_; }
    const std::vector<Perm>& h_gens() const { return h_gens_; }
    const Perm& tau() const { return tau_; }

    // permutation action on vectors: (g a)[g(i)] = a[i]
    static IntVec act(const Perm& g, const IntVec& a) {
        IntVec r(a.size(), Int(0));
        for (size_t i = 0; i < a.size(); ++i) r[static_cast<size_t>(g.img[i])] = a[i];
        return r;
    }

    IntVec twisted_norm(const IntVec& a) const {
        if (static_cast<int64_t>(a.size()) != n_) throw ValidationError("vector has wrong dimension");
        IntVec out(a.size(), Int(0));
        IntVec ta = act(tau_, a);
        for (const auto& h : H_) {
            IntVec ha = act(h, a), hta = act(h, ta);
            for (size_t i = 0; i < out.size(); ++i) out[i] += ha[i] - hta[i];
        }
        return out;
    }

    IntMat twisted_norm_matrix() const {
        IntMat rows(static_cast<size_t>(n_), IntVec(static_cast<size_t>(n_), Int(0)));
        for (int64_t j = 0; j < n_; ++j) {
            IntVec e(static_cast<size_t>(n_), Int(0));
            e[static_cast<size_t>(j)] = 1;
            IntVec col = twisted_norm(e);
            for (int64_t i = 0; i < n_; ++i) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = col[static_cast<size_t>(i)];
        }
        return rows;
    }

    // integer kernel of the twisted norm
    IntLattice kernel_lattice() const {
        return IntLattice::from_generators(static_cast<size_t>(n_), integer_kernel(twisted_norm_matrix()));
    }

    // I_H(Z^basis) + sum_h Fix(h tau)
    IntLattice rhs_lattice() const {
        IntMat gens;
        for (const auto& h : H_) {
            for (int64_t i = 0; i < n_; ++i) {
                IntVec v(static_cast<size_t>(n_), Int(0));
                v[static_cast<size_t>(h.img[static_cast<size_t>(i)])] += 1;
                v[static_cast<size_t>(i)] -= 1;
                gens.push_back(std::move(v));
            }
            Perm htau = h.compose(tau_);
            for (int64_t i = 0; i < n_; ++i) {
                int64_t j = htau(i);
                IntVec v(static_cast<size_t>(n_), Int(0));
                if (j == i) {
                    v[static_cast<size_t>(i)] = 1;
                } else {
                    v[static_cast<size_t>(i)] = 1;
                    v[static_cast<size_t>(j)] += 1;
                }
                gens.push_back(std::move(v));
            }
        }
        return IntLattice::from_generators(static_cast<size_t>(n_), gens);
    }

    bool verify_NH() const { return kernel_lattice() == rhs_lattice(); }

    // decomposition into G-orbit submodules with the case split of the
    // kernel analysis
    std::vector<struct GOrbit> orbit_split() const;

  private:
    int64_t n_ = 0;
    std::vector<Perm> h_gens_;
    Perm tau_;
    std::vector<Perm> H_;
};

struct GOrbit {
    PermGModule module;
    std::vector<int64_t> positions;  // original basis indices
    int case_label;                  // 1: V and tauV disjoint, 2: V = tauV
};

inline std::vector<GOrbit> PermGModule::orbit_split() const {
    std::vector<GOrbit> out;
    std::vector<bool> used(static_cast<size_t>(n_), false);
    for (int64_t s = 0; s < n_; ++s) {
        if (used[static_cast<size_t>(s)]) continue;
        // G-orbit of s
        std::vector<int64_t> orbit{s};
        size_t head = 0;
        while (head < orbit.size()) {
            int64_t v = orbit[head++];
            auto push = [&](int64_t w) {
                if (std::find(orbit.begin(), orbit.end(), w) == orbit.end()) orbit.push_back(w);
            };
            for (const auto& h : H_) push(h(v));
            push(tau_(v));
        }
        std::sort(orbit.begin(), orbit.end());
        for (int64_t v : orbit) used[static_cast<size_t>(v)] = true;
        // H-orbit V of s and its tau-image
        std::vector<int64_t> V;
        for (const auto& h : H_) {
            int64_t v = h(s);
            if (std::find(V.begin(), V.end(), v) == V.end()) V.push_back(v);
        }
        bool disjoint = true;
        for (int64_t v : V) {
            int64_t tv = tau_(v);
            if (std::find(V.begin(), V.end(), tv) != V.end()) {
                disjoint = false;
                break;
            }
        }
        // restrict the module to the orbit
        auto restrict_perm = [&](const Perm& g) {
            Perm r;
            r.img.resize(orbit.size());
            for (size_t i = 0; i < orbit.size(); ++i) {
                int64_t img = g(orbit[i]);
                size_t pos = static_cast<size_t>(std::lower_bound(orbit.begin(), orbit.end(), img) - orbit.begin());
                r.img[i] = static_cast<int64_t>(pos);
            }
            return r;
        };
        std::vector<Perm> sub_gens;
        for (const auto& g : h_gens_) sub_gens.push_back(restrict_perm(g));
        out.push_back(GOrbit{build(sub_gens, restrict_perm(tau_)), orbit, disjoint ? 1 : 2});
    }
    return out;
}

// Random permutation module per the sampling scheme: H a product of at most
// two cyclic groups of order <= 4 acting on grid blocks, tau either the
// coordinate-negation reflection of a block or a swap of two mirrored
// blocks. Relations are validated by build (rejection loop).
inline PermGModule random_perm_module(Rng& rng, int64_t max_basis = 12, int64_t max_order = 4) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        int64_t c1 = rng.range(1, max_order);
        int64_t c2 = rng.range(1, max_order);
        int64_t block = c1 * c2;
        if (block > max_basis) continue;
        // choose blocks: each either a single mirrored grid or a swapped pair
        std::vector<int> kinds;
        int64_t total = 0;
        while (true) {
            bool pair = rng.below(2) == 0 && total + 2 * block <= max_basis;
            bool single = total + block <= max_basis;
            if (pair) {
                kinds.push_back(1);
                total += 2 * block;
            } else if (single) {
                kinds.push_back(0);
                total += block;
            } else {
                break;
            }
            if (rng.below(3) == 0) break;
        }
        if (kinds.empty() || total == 0) continue;
        auto index = [&](int64_t base, int64_t i, int64_t j) { return base + i * c2 + j; };
        Perm h1 = Perm::identity(total), h2 = Perm::identity(total), tau = Perm::identity(total);
        int64_t base = 0;
        for (int kind : kinds) {
            int64_t copies = kind == 1 ? 2 : 1;
            for (int64_t cpy = 0; cpy < copies; ++cpy) {
                int64_t b = base + cpy * block;
                for (int64_t i = 0; i < c1; ++i)
                    for (int64_t j = 0; j < c2; ++j) {
                        h1.img[static_cast<size_t>(index(b, i, j))] = index(b, (i + 1) % c1, j);
                        h2.img[static_cast<size_t>(index(b, i, j))] = index(b, i, (j + 1) % c2);
                    }
            }
            for (int64_t i = 0; i < c1; ++i)
                for (int64_t j = 0; j < c2; ++j) {
                    int64_t ni = (c1 - i) % c1, nj = (c2 - j) % c2;
                    if (kind == 0) {
                        tau.img[static_cast<size_t>(index(base, i, j))] = index(base, ni, nj);
                    } else {
                        tau.img[static_cast<size_t>(index(base, i, j))] = index(base + block, ni, nj);
                        tau.img[static_cast<size_t>(index(base + block, i, j))] = index(base, ni, nj);
                    }
                }
            base += copies * block;
        }
        try {
            return PermGModule::build({h1, h2}, tau);
        } catch (const Error&) {
            continue;  // rejection sampling
        }
    }
    throw Error("internal: random module sampling failed to converge");
}

}  // namespace skewlab

#endif
