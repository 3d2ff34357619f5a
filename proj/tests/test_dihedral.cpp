#include <catch2/catch_amalgamated.hpp>

#include "skewlab/dihedral.hpp"

using namespace skewlab;

namespace {
Perm swap2() {
    Perm p;
    p.img = {1, 0};
    return p;
}
}  // namespace

TEST_CASE("module construction validates the dihedral relations") {
    // trivial H, tau = id on two points: G of order 2 with trivial action
    auto M1 = PermGModule::build({}, Perm::identity(2));
    REQUIRE(M1.H().size() == 1);
    // H = swap, tau = id: valid since swap is its own inverse
    auto M2 = PermGModule::build({swap2()}, Perm::identity(2));
    REQUIRE(M2.H().size() == 2);
    // a 3-cycle with tau = id violates tau h tau = h^{-1}
    Perm c3;
    c3.img = {1, 2, 0};
    REQUIRE_THROWS_AS(PermGModule::build({c3}, Perm::identity(3)), RelationViolated);
    // tau of order > 2 rejected
    REQUIRE_THROWS_AS(PermGModule::build({}, c3), RelationViolated);
    // non-commuting H generators rejected
    Perm t01, t12;
    t01.img = {1, 0, 2};
    t12.img = {0, 2, 1};
    REQUIRE_THROWS_AS(PermGModule::build({t01, t12}, Perm::identity(3)), RelationViolated);
}

TEST_CASE("twisted norm") {
    auto Mid = PermGModule::build({}, Perm::identity(2));
    IntVec e1 = {Int(1), Int(0)};
    // tau = id: the two orbit sums coincide, the norm vanishes
    REQUIRE(Mid.twisted_norm(e1) == IntVec(2, Int(0)));
    // H trivial, tau = swap: e1 - e2
    auto Msw = PermGModule::build({}, swap2());
    IntVec tn = Msw.twisted_norm(e1);
    REQUIRE(tn[0] == 1);
    REQUIRE(tn[1] == -1);
    // H-invariance on random modules: N~(h a) = N~(a)
    Rng rng(19);
    for (int it = 0; it < 40; ++it) {
        auto M = random_perm_module(rng, 8);
        IntVec a(static_cast<size_t>(M.basis_size()));
        for (auto& v : a) v = rng.range(-3, 3);
        IntVec base = M.twisted_norm(a);
        for (const auto& h : M.H()) REQUIRE(M.twisted_norm(PermGModule::act(h, a)) == base);
    }
}

TEST_CASE("kernel and right-hand lattices") {
    auto Mid = PermGModule::build({}, Perm::identity(2));
    REQUIRE(Mid.kernel_lattice().rank() == 2);  // full lattice
    REQUIRE(Mid.rhs_lattice().rank() == 2);

    auto Msw = PermGModule::build({}, swap2());
    auto K = Msw.kernel_lattice();
    REQUIRE(K.rank() == 1);
    REQUIRE(K.contains({Int(1), Int(1)}));
    REQUIRE(!K.contains({Int(1), Int(0)}));
    auto R = Msw.rhs_lattice();
    REQUIRE(R == K);

    auto Mh = PermGModule::build({swap2()}, Perm::identity(2));
    REQUIRE(Mh.rhs_lattice().rank() == 2);  // span{e1-e2} + span{e1,e2}

    // rank-nullity across random modules
    Rng rng(29);
    for (int it = 0; it < 100; ++it) {
        auto M = random_perm_module(rng);
        auto kern = M.kernel_lattice();
        auto img = IntLattice::from_generators(static_cast<size_t>(M.basis_size()), M.twisted_norm_matrix());
        REQUIRE(static_cast<int64_t>(kern.rank() + img.rank()) == M.basis_size());
    }
}

TEST_CASE("twisted-norm kernel equals the augmentation-plus-fixed lattice") {
    REQUIRE(PermGModule::build({}, Perm::identity(2)).verify_NH());
    REQUIRE(PermGModule::build({}, swap2()).verify_NH());
    REQUIRE(PermGModule::build({swap2()}, Perm::identity(2)).verify_NH());
    Rng rng(42);
    for (int it = 0; it < 100; ++it) {
        auto M = random_perm_module(rng, 12, 4);
        REQUIRE(M.verify_NH());
    }
}

TEST_CASE("orbit decomposition with the case split") {
    // H trivial, tau = swap: one orbit with V and tauV disjoint
    auto Msw = PermGModule::build({}, swap2());
    auto orbits = Msw.orbit_split();
    REQUIRE(orbits.size() == 1);
    REQUIRE(orbits[0].case_label == 1);
    REQUIRE(orbits[0].module.verify_NH());
    // tau = id, H trivial, 2 points: two singleton orbits, V = tauV
    auto Mid = PermGModule::build({}, Perm::identity(2));
    auto orbits2 = Mid.orbit_split();
    REQUIRE(orbits2.size() == 2);
    for (const auto& o : orbits2) REQUIRE(o.case_label == 2);
    // H = swap with tau = id: one orbit, V = tauV
    auto Mh = PermGModule::build({swap2()}, Perm::identity(2));
    auto orbits3 = Mh.orbit_split();
    REQUIRE(orbits3.size() == 1);
    REQUIRE(orbits3[0].case_label == 2);
    // equality holds orbitwise on random modules, and disjoint-case orbits
    // have kernel equal to the rhs lattice restricted to the orbit
    Rng rng(57);
    for (int it = 0; it < 60; ++it) {
        auto M = random_perm_module(rng);
        for (const auto& o : M.orbit_split()) {
            REQUIRE(o.module.verify_NH());
            if (o.case_label == 1) {
                REQUIRE(o.module.kernel_lattice() == o.module.rhs_lattice());
            }
        }
    }
}

TEST_CASE("random module sampler respects its bounds") {
    Rng rng(71);
    for (int it = 0; it < 50; ++it) {
        auto M = random_perm_module(rng, 12, 4);
        REQUIRE(M.basis_size() <= 12);
        REQUIRE(M.basis_size() >= 1);
        for (const auto& h : M.H()) {
            // orders divide 16 = 4*4
            Perm acc = h;
            int64_t ord = 1;
            while (!acc.is_identity()) {
                acc = acc.compose(h);
                ++ord;
            }
            REQUIRE(16 % ord == 0);
        }
    }
}
