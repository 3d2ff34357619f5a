#include <catch2/catch_amalgamated.hpp>

#include "skewlab/field.hpp"
#include "skewlab/linalg.hpp"

using namespace skewlab;

namespace {
FieldPtr F9() { return Field::finite_ext(3, {2, 2, 1}); }  // a^2 = a + 1
}

TEST_CASE("prime and extension field arithmetic") {
    auto F3 = Field::prime(3);
    REQUIRE(F3->from_int(2) + F3->from_int(2) == F3->one());
    REQUIRE((F3->from_int(2) * F3->from_int(2)) == F3->one());

    auto f9 = F9();
    FieldElem a = f9->generator();
    REQUIRE(a * a == a + f9->one());  // defining relation
    REQUIRE(elem_order(a) == 8);
    // every nonzero element is invertible
    for (int64_t i = 1; i < 9; ++i) {
        FieldElem e = f9->element_at(i);
        REQUIRE((e * e.inverse()).is_one());
    }
}

TEST_CASE("cyclotomic arithmetic") {
    auto Qi = Field::cyclotomic(4);
    FieldElem i = Qi->generator(), one = Qi->one();
    REQUIRE((one + i) * (one - i) == Qi->from_int(2));  // norm identity
    // zeta_8^4 reduces to -1 modulo Phi_8 = X^4 + 1
    auto Q8 = Field::cyclotomic(8);
    REQUIRE(Q8->basis_size() == 4);
    FieldElem z = Q8->generator();
    REQUIRE(z.pow(4) == Q8->from_int(-1));
    REQUIRE(z.pow(8).is_one());
    // sqrt2 = z - z^3 inside Q(zeta_8)
    FieldElem sqrt2 = z - z.pow(3);
    REQUIRE(sqrt2 * sqrt2 == Q8->from_int(2));
    // rationals as the degree-1 cyclotomic field
    auto Q = Field::rationals();
    REQUIRE(Q->from_rational(Rational(1, 2)) + Q->from_rational(Rational(1, 2)) == Q->one());
}

TEST_CASE("field errors") {
    auto f9 = F9();
    auto Qi = Field::cyclotomic(4);
    REQUIRE_THROWS_AS(f9->one() + Qi->one(), MixedFields);
    REQUIRE_THROWS_AS(Qi->zero().inverse(), DivisionByZero);
    // x^2 + 1 = (x+1)^2 over F_2: reducible defining polynomial rejected
    REQUIRE_THROWS_AS(Field::finite_ext(2, {1, 0, 1}), ValidationError);
    REQUIRE_THROWS_AS(Field::prime(6), UnsupportedField);
    REQUIRE_THROWS_AS(FieldAuto::galois(Field::cyclotomic(8), 2), ValidationError);  // gcd(2,8) != 1
}

TEST_CASE("apply_auto on generators and sums") {
    auto f9 = F9();
    FieldElem a = f9->generator();
    auto frob = FieldAuto::frobenius(f9, 1);
    REQUIRE(frob(a) == a * a * a);  // a -> a^3, oracle by repeated multiplication

    auto Qi = Field::cyclotomic(4);
    auto conj = FieldAuto::galois(Qi, -1);
    FieldElem i = Qi->generator();
    REQUIRE(conj(Qi->from_int(3) + Qi->from_int(2) * i) == Qi->from_int(3) - Qi->from_int(2) * i);

    auto Q8 = Field::cyclotomic(8);
    auto g3 = FieldAuto::galois(Q8, 3);
    FieldElem z = Q8->generator();
    REQUIRE(g3(z + z * z) == z.pow(3) + z.pow(6));  // homomorphism on the basis
}

TEST_CASE("automorphism order certified on a primitive element") {
    auto f9 = F9();
    REQUIRE(FieldAuto::frobenius(f9, 1).order() == 2);
    REQUIRE(FieldAuto::identity(f9).order() == 1);
    auto Qi = Field::cyclotomic(4);
    REQUIRE(FieldAuto::galois(Qi, -1).order() == 2);
    auto Q5 = Field::cyclotomic(5);
    REQUIRE(FieldAuto::galois(Q5, 2).order() == 4);  // 2 generates (Z/5)*
}

TEST_CASE("roots of unity") {
    auto Qi = Field::cyclotomic(4);
    FieldElem i = Qi->generator();
    // brute-force oracle: enumerate torsion candidates +-i^k, verify xi^4 = 1
    std::vector<FieldElem> expected;
    for (int64_t k = 0; k < 4; ++k)
        for (int s = 0; s < 2; ++s) {
            FieldElem cand = i.pow(k);
            if (s) cand = -cand;
            if (!cand.pow(4).is_one()) continue;
            bool seen = false;
            for (const auto& e : expected) seen = seen || e == cand;
            if (!seen) expected.push_back(cand);
        }
    auto mu4 = roots_of_unity(Qi, 4);
    REQUIRE(mu4.size() == 4);
    REQUIRE(expected.size() == 4);
    for (const auto& e : expected) {
        bool found = false;
        for (const auto& r : mu4) found = found || r == e;
        REQUIRE(found);
    }
    // mu_3(Q(i)) = {1}: oracle checks X^2 + X + 1 has no root among candidates
    for (int64_t k = 0; k < 4; ++k)
        for (int s = 0; s < 2; ++s) {
            FieldElem c = i.pow(k);
            if (s) c = -c;
            if (c.is_one()) continue;
            REQUIRE(!(c * c + c + Qi->one()).is_zero());
        }
    REQUIRE(roots_of_unity(Qi, 3).size() == 1);
    // mu_2 in characteristic != 2
    auto mu2 = roots_of_unity(F9(), 2);
    REQUIRE(mu2.size() == 2);
    // p | n: mu_{3k}(F9) collapses to the prime-to-3 part
    REQUIRE(roots_of_unity(F9(), 3).size() == 1);
    REQUIRE(roots_of_unity(F9(), 6).size() == 2);
    // group law: closed under multiplication and inversion, every xi^n = 1
    auto Q8 = Field::cyclotomic(8);
    auto mu8 = roots_of_unity(Q8, 8);
    REQUIRE(mu8.size() == 8);
    for (const auto& x : mu8) {
        REQUIRE(x.pow(8).is_one());
        bool inv_found = false, prod_found = false;
        for (const auto& y : mu8) {
            inv_found = inv_found || (x * y).is_one();
            prod_found = prod_found || y == x * mu8[1];
        }
        REQUIRE(inv_found);
        REQUIRE(prod_found);
    }
}

TEST_CASE("field laws: exhaustive for F9, randomized for Q(zeta_8)") {
    auto f9 = F9();
    for (int64_t i = 0; i < 9; ++i)
        for (int64_t j = 0; j < 9; ++j) {
            FieldElem x = f9->element_at(i), y = f9->element_at(j);
            REQUIRE(x + y == y + x);
            REQUIRE(x * y == y * x);
            for (int64_t k = 0; k < 9; ++k) {
                FieldElem z = f9->element_at(k);
                REQUIRE((x + y) + z == x + (y + z));
                REQUIRE((x * y) * z == x * (y * z));
                REQUIRE(x * (y + z) == x * y + x * z);
            }
        }
    auto Q8 = Field::cyclotomic(8);
    Rng rng(11);
    auto rand8 = [&]() {
        std::vector<Rational> co;
        for (int t = 0; t < 4; ++t) co.emplace_back(rng.range(-5, 5), 1 + rng.below(3));
        return Q8->from_coords_q(co);
    };
    for (int it = 0; it < 200; ++it) {
        FieldElem x = rand8(), y = rand8(), z = rand8();
        REQUIRE(x * (y + z) == x * y + x * z);
        REQUIRE((x * y) * z == x * (y * z));
    }
}

TEST_CASE("automorphisms are ring homomorphisms and have exact order") {
    auto Q8 = Field::cyclotomic(8);
    auto g5 = FieldAuto::galois(Q8, 5);
    Rng rng(13);
    auto rand8 = [&]() {
        std::vector<Rational> co;
        for (int t = 0; t < 4; ++t) co.emplace_back(rng.range(-4, 4));
        return Q8->from_coords_q(co);
    };
    for (int it = 0; it < 1000; ++it) {
        FieldElem x = rand8(), y = rand8();
        REQUIRE(g5(x * y) == g5(x) * g5(y));
        REQUIRE(g5(x + y) == g5(x) + g5(y));
    }
    // iterating order-many times is the identity
    auto f9 = F9();
    auto frob = FieldAuto::frobenius(f9, 1);
    int64_t ord = frob.order();
    for (int it = 0; it < 200; ++it) {
        FieldElem x = f9->element_at(static_cast<int64_t>(rng.below(9)));
        FieldElem y = x;
        for (int64_t t = 0; t < ord; ++t) y = frob(y);
        REQUIRE(y == x);
    }
}

TEST_CASE("fixed subspaces") {
    auto Q8 = Field::cyclotomic(8);
    auto s5 = FieldAuto::galois(Q8, 5);
    auto basis = fixed_subspace(Q8, {s5});
    REQUIRE(basis.size() == 2);  // Q(i) inside Q(zeta_8)
    for (const auto& w : basis) REQUIRE(s5(w) == w);
    auto s7 = FieldAuto::galois(Q8, 7);
    auto basis2 = fixed_subspace(Q8, {s5, s7});
    REQUIRE(basis2.size() == 1);  // only Q
}
