#include "enlarge/calculus.hpp"
#include "enlarge/enlargement.hpp"
#include "enlarge/models.hpp"
#include "enlarge/representation.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace enlarge;
using testing::q;

TEST_CASE("drift of the 6-point martingale under G") {
    const EnlargedBasis eb = six_point_instance();
    const Process drift = drift_operator(eb, six_point_martingale());
    for (Outcome w : {0, 1, 3}) CHECK(drift(w, 1) == q(1, 6));
    for (Outcome w : {2, 4, 5}) CHECK(drift(w, 1) == q(-1, 6));
}

TEST_CASE("drift vanishes when G adds nothing relevant") {
    const EnlargedBasis eb = six_point_instance();
    const EnlargedBasis same{eb.space, eb.f, eb.f, eb.horizon};
    CHECK(drift_operator(same, six_point_martingale()) == Process(6, 1, 1));

    // An independent coin on a product space: X depends on the first factor, G reveals the second.
    const std::size_t n = 4;
    const Partition first({{0, 1}, {2, 3}}, n);
    const Partition coin({{0, 2}, {1, 3}}, n);
    const Filtration f(Partition::trivial(n), {{Partition::trivial(n), first}});
    const Filtration g(coin, {{coin, first.meet(coin)}});
    const EnlargedBasis indep{SampleSpace::uniform(n), f, g, StoppingTime::infinite(n)};
    Process x(n, 1, 1);
    for (Outcome w = 0; w < n; ++w) x(w, 1) = w < 2 ? 1 : -1;
    CHECK(drift_operator(indep, x) == Process(n, 1, 1));
}

TEST_CASE("drift operator rejects a non-martingale") {
    const EnlargedBasis eb = six_point_instance();
    Process x(6, 1, 1);
    for (Outcome w = 0; w < 6; ++w) x(w, 1) = 1;
    try {
        drift_operator(eb, x);
        FAIL("accepted a drifting process");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotFMartingale);
    }
}

TEST_CASE("drift factors on the 6-point basis") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    const DriftFactors fac = solve_factors(eb, rep);
    for (Outcome w : {0, 1, 3}) CHECK(fac.phi.value_vector(w, 1) == Vec{q(2, 3), q(-2, 3)});
    for (Outcome w : {2, 4, 5}) CHECK(fac.phi.value_vector(w, 1) == Vec{q(-2, 3), q(2, 3)});
    CHECK(factor_drift(eb, fac, six_point_martingale()) == drift_operator(eb, six_point_martingale()));

    const PositivityCheck pos = check_positivity(eb, fac);
    CHECK(pos.holds);
    CHECK(density_factor(fac, 0, 1) == q(4, 3));
    CHECK(density_factor(fac, 3, 1) == q(2, 3));
    CHECK(density_factor(fac, 2, 1) == q(2, 3));
    CHECK(density_factor(fac, 4, 1) == q(4, 3));
}

TEST_CASE("compensator transfer on the 6-point basis") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    const DriftFactors fac = solve_factors(eb, rep);
    Process a(6, 1, 1);
    for (Outcome w = 0; w < 3; ++w) a(w, 1) = 1;
    CHECK(compensator_transfer_check(eb, fac, a).holds);
    // The G-compensator of 1_A is 2/3 on C1.
    CHECK(compensator(eb.space, eb.g, a)(0, 1) == q(2, 3));
    CHECK_THROWS_AS(compensator_transfer_check(eb, DriftFactors{}, a), Error);
    try {
        check_positivity(eb, DriftFactors{});
        FAIL("checked positivity without factors");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FactorsMissing);
    }
}

TEST_CASE("support condition holds on the 6-point basis and fails on the 4-point basis") {
    CHECK(check_condition_support(six_point_instance()).holds);

    const EnlargedBasis four = four_point_instance();
    const SupportCheck sc = check_condition_support(four);
    REQUIRE_FALSE(sc.holds);
    REQUIRE(sc.witness);
    CHECK(sc.witness->tick == 1);
    CHECK(sc.witness->c == Block{3});
    CHECK(sc.witness->a == Block{0, 1});
}

TEST_CASE("positivity is a direct check") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    const EnlargedBasis same{eb.space, eb.f, eb.f, eb.horizon};
    const DriftFactors trivial = solve_factors(same, rep);
    CHECK(trivial.phi == Process(6, 1, 2));
    CHECK(check_positivity(same, trivial).holds);

    DriftFactors bad = solve_factors(eb, rep);
    for (Outcome w = 0; w < 6; ++w) bad.phi(w, 1, 0) = 8;
    const PositivityCheck pos = check_positivity(eb, bad);
    CHECK_FALSE(pos.holds);
    REQUIRE(pos.first_failure);
    CHECK(pos.first_failure->tick == 1);
}

TEST_CASE("drift factors agree with the drift operator on random bases") {
    Rng rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        CAPTURE(trial);
        GeneratorConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial) + 1000;
        const EnlargedBasis eb = gen_random_instance(cfg);
        REQUIRE(validate(eb).ok);
        const RepresentationProcess rep = build_representation(eb.space, eb.f);
        const DriftFactors fac = solve_factors(eb, rep);

        const Process x = random_martingale(rng, eb.space, eb.f);
        CHECK(factor_drift(eb, fac, x) == drift_operator(eb, x));

        // Gamma commutes with F-predictable integrands.
        Process h(eb.space.size(), eb.f.ticks(), 1);
        for (int k = 0; k <= eb.f.ticks(); ++k)
            for (const Block& b : eb.f.pre(k).blocks()) {
                const Rational v = rng.rational(-3, 3, 2);
                for (Outcome w : b) h(w, k) = v;
            }
        CHECK(drift_operator(eb, stoch_integral(eb.f, h, x)) == integrate(h, drift_operator(eb, x)));

        // Compensator transfer for an adapted increasing process.
        Process a(eb.space.size(), eb.f.ticks(), 1);
        for (int k = 1; k <= eb.f.ticks(); ++k)
            for (const Block& b : eb.f.at(k).blocks()) {
                const Rational v = rng.rational(0, 4, 2);
                for (Outcome w : b) a(w, k) = a(w, k - 1) + v;
            }
        CHECK(compensator_transfer_check(eb, fac, a).holds);

        const SupportCheck sc = check_condition_support(eb);
        if (sc.holds) CHECK(check_positivity(eb, fac).holds);

        // The support condition matches the support-set equality over random positive atom functions.
        bool agree = true;
        for (int k = 1; k <= eb.f.ticks(); ++k) {
            for (std::size_t c = 0; c < eb.f.at(k).num_blocks(); ++c) {
                Vec xi(eb.space.size());
                for (Outcome w : eb.f.at(k).block(c)) xi[w] = 1;
                agree = agree && support_sets_agree(eb, k, xi);
            }
            for (int draw = 0; draw < 6; ++draw) {
                Vec xi(eb.space.size());
                for (const Block& b : eb.f.at(k).blocks()) {
                    const Rational v = rng.chance(1, 2) ? Rational(0) : rng.rational(1, 5, 2);
                    for (Outcome w : b) xi[w] = v;
                }
                agree = agree && support_sets_agree(eb, k, xi);
            }
        }
        CHECK(agree == sc.holds);
    }
}

TEST_CASE("forced failures break the support condition") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.force_condition_failure = true;
        const EnlargedBasis eb = gen_random_instance(cfg);
        CHECK(validate(eb).ok);
        CHECK_FALSE(check_condition_support(eb).holds);
    }
}
