#include "enlarge/calculus.hpp"
#include "enlarge/models.hpp"
#include "enlarge/oracle.hpp"
#include "enlarge/viability.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace enlarge;
using testing::q;

namespace {

// One tick on two equally likely outcomes, dS = +-1 plus a constant drift.
struct TwoPoint {
    SampleSpace space = SampleSpace::uniform(2);
    Filtration f{Partition::trivial(2), {{Partition::trivial(2), Partition::discrete(2)}}};
    StoppingTime horizon = StoppingTime::infinite(2);

    Process asset(const Rational& drift) const {
        Process s(2, 1, 1);
        s(0, 1) = 1 + drift;
        s(1, 1) = -1 + drift;
        return s;
    }
};

struct Six {
    EnlargedBasis eb = six_point_instance();
    RepresentationProcess rep = build_representation(eb.space, eb.f);
    DriftFactors fac = solve_factors(eb, rep);
};

}  // namespace

TEST_CASE("connector on two points") {
    const TwoPoint t;
    const ConnectorResult bad = find_structure_connector(t.space, t.f, t.asset(q(3, 2)), t.horizon);
    CHECK_FALSE(bad.feasible());
    REQUIRE(bad.infeasible);
    CHECK(bad.infeasible->tick == 1);

    const Process s = t.asset(q(1, 2));
    const ConnectorResult good = find_structure_connector(t.space, t.f, s, t.horizon);
    REQUIRE(good.feasible());
    CHECK(good.connector->jump(0, 1) == q(1, 2));
    CHECK(good.connector->jump(1, 1) == q(-1, 2));
    CHECK(is_structure_connector(t.space, t.f, s, *good.connector, t.horizon));

    const Process z = deflator_from_connector(t.space, t.f, *good.connector);
    CHECK(z(0, 1) == q(1, 2));
    CHECK(z(1, 1) == q(3, 2));
    CHECK(is_deflator(t.space, t.f, z, s, t.horizon));
    CHECK(oracle::check_deflator(t.space, t.f, s, t.horizon, z));
}

TEST_CASE("martingales need no connector") {
    const Six s;
    const ConnectorResult r = find_structure_connector(s.eb.space, s.eb.f, six_point_martingale(), s.eb.horizon);
    REQUIRE(r.feasible());
    CHECK(*r.connector == Process(6, 1, 1));
    CHECK(deflator_from_connector(s.eb.space, s.eb.f, *r.connector) == constant_process(6, 1, 1));
}

TEST_CASE("deflator_from_connector rejects jumps of one or more") {
    const TwoPoint t;
    Process d(2, 1, 1);
    d(0, 1) = 1;
    d(1, 1) = -1;
    try {
        deflator_from_connector(t.space, t.f, d);
        FAIL("accepted a connector with a unit jump");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConnectorInvalid);
    }
}

TEST_CASE("oracle examples") {
    const TwoPoint t;
    const oracle::OracleResult mart = oracle::lp_deflator_oracle(t.space, t.f, t.asset(0), t.horizon);
    REQUIRE(mart.feasible);
    CHECK(*mart.deflator == constant_process(2, 1, 1));

    const oracle::OracleResult bad = oracle::lp_deflator_oracle(t.space, t.f, t.asset(q(3, 2)), t.horizon);
    CHECK_FALSE(bad.feasible);
    CHECK(oracle::verify_certificate(t.space, t.f, t.asset(q(3, 2)), t.horizon, bad.certificate));
    CHECK_FALSE(oracle::verify_certificate(t.space, t.f, t.asset(q(1, 2)), t.horizon, bad.certificate));

    // On the 4-point basis the F-martingale is deterministic on {w4} under G.
    const EnlargedBasis four = four_point_instance();
    Process x(4, 1, 1);
    for (Outcome w = 0; w < 4; ++w) x(w, 1) = w < 2 ? q(1, 2) : q(-1, 2);
    const oracle::OracleResult g = oracle::lp_deflator_oracle(four.space, four.g, x, four.horizon);
    CHECK_FALSE(g.feasible);
    CHECK(oracle::verify_certificate(four.space, four.g, x, four.horizon, g.certificate));
    CHECK(oracle::lp_deflator_oracle(four.space, four.f, x, four.horizon).feasible);
}

TEST_CASE("accessible kernel on the 6-point basis") {
    const Six s;
    const Process zero(6, 1, 1);
    const Process k = solve_accessible_K(s.eb, s.fac, s.rep, zero);
    CHECK(is_predictable(s.eb.g, k));
    CHECK(jump_identity_check(s.eb, s.fac, s.rep, k, zero).holds);

    const Process y = integrate(k, compensated_basis(s.eb, s.rep));
    // Outcome order: w1, w2 in C1 and A; w3 in C2 and A; w4 in C1 and B; w5, w6 in C2 and B.
    const Vec expected{q(1, 4), q(1, 4), q(-1, 2), q(-1, 2), q(1, 4), q(1, 4)};
    for (Outcome w = 0; w < 6; ++w) CHECK(y.jump(w, 1) == expected[w]);

    const EnlargedBasis same{s.eb.space, s.eb.f, s.eb.f, s.eb.horizon};
    const DriftFactors none = solve_factors(same, s.rep);
    CHECK(solve_accessible_K(same, none, s.rep, zero) == Process(6, 1, 2));
}

TEST_CASE("accessible kernel requires the support condition") {
    const EnlargedBasis four = four_point_instance();
    const RepresentationProcess rep = build_representation(four.space, four.f);
    const DriftFactors fac = solve_factors(four, rep);
    try {
        solve_accessible_K(four, fac, rep, Process(4, 1, 1));
        FAIL("solved without the support condition");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SupportConditionFailed);
    }
}

TEST_CASE("G-connector and deflator on the 6-point basis") {
    const Six s;
    const Process x = six_point_martingale();
    const GConnector gc = g_connector(s.eb, s.fac, s.rep, x, Process(6, 1, 1));
    const Process z = deflator_from_connector(s.eb.space, s.eb.g, gc.y);
    const Vec expected{q(3, 4), q(3, 4), q(3, 2), q(3, 2), q(3, 4), q(3, 4)};
    for (Outcome w = 0; w < 6; ++w) CHECK(z(w, 1) == expected[w]);
    CHECK(is_deflator(s.eb.space, s.eb.g, z, x, s.eb.horizon));

    // E[Z | C] = 1 and E[Z dX | C] = 0 on both G_{1-} atoms.
    for (const Block& c : s.eb.g.pre(1).blocks()) {
        Rational mass;
        Rational mean;
        Rational tilt;
        for (Outcome w : c) {
            mass += s.eb.space.prob(w);
            mean += s.eb.space.prob(w) * z(w, 1);
            tilt += s.eb.space.prob(w) * z(w, 1) * x.jump(w, 1);
        }
        CHECK(mean / mass == 1);
        CHECK(tilt == 0);
    }
}

TEST_CASE("full verdict examples") {
    const ViabilityReport six = full_viability_verdict(six_point_instance());
    CHECK(six.verdict);
    CHECK(six.condition_support);
    CHECK(six.positivity);
    REQUIRE(six.deflator);
    CHECK((*six.deflator)(0, 1) == q(3, 4));
    CHECK((*six.deflator)(2, 1) == q(3, 2));

    const EnlargedBasis four = four_point_instance();
    const ViabilityReport r4 = full_viability_verdict(four);
    CHECK_FALSE(r4.verdict);
    CHECK_FALSE(r4.deflator);
    REQUIRE(r4.witness);
    CHECK(r4.witness->location.c == Block{3});
    CHECK(is_martingale(four.space, four.f, r4.witness->asset));
    CHECK(oracle::verify_certificate(four.space, four.g, r4.witness->asset, four.horizon, r4.witness->certificate));

    const EnlargedBasis base = six_point_instance();
    const ViabilityReport same = full_viability_verdict({base.space, base.f, base.f, base.horizon});
    CHECK(same.verdict);
    REQUIRE(same.deflator);
    CHECK(*same.deflator == constant_process(6, 1, 1));
}

TEST_CASE("connector search agrees with the oracle on random assets") {
    Rng rng(41);
    int feasible = 0;
    for (int trial = 0; trial < 150; ++trial) {
        CAPTURE(trial);
        const auto n = static_cast<std::size_t>(rng.uniform(2, 9));
        const int ticks = static_cast<int>(rng.uniform(1, 3));
        const SampleSpace space = random_space(rng, n);
        const Filtration f = random_filtration(rng, n, ticks, 3);
        const Process s = random_asset(rng, space, f, static_cast<std::size_t>(rng.uniform(1, 2)));
        const StoppingTime horizon = StoppingTime::infinite(n);

        const ConnectorResult r = find_structure_connector(space, f, s, horizon);
        const oracle::OracleResult o = oracle::lp_deflator_oracle(space, f, s, horizon);
        CHECK(r.feasible() == o.feasible);
        if (r.feasible()) {
            ++feasible;
            CHECK(is_structure_connector(space, f, s, *r.connector, horizon));
            const Process z = deflator_from_connector(space, f, *r.connector);
            CHECK(oracle::check_deflator(space, f, s, horizon, z));
        } else {
            CHECK(oracle::verify_certificate(space, f, s, horizon, o.certificate));
        }
    }
    CHECK(feasible > 20);
    CHECK(feasible < 140);
}

TEST_CASE("lifting connectors into G on random bases") {
    Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        CAPTURE(trial);
        GeneratorConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(trial) + 500;
        const EnlargedBasis eb = gen_random_instance(cfg);
        const ViabilityReport report = full_viability_verdict(eb);
        CHECK(report.verdict == report.condition_support);
        if (!report.verdict) {
            REQUIRE(report.witness);
            CHECK(oracle::verify_certificate(eb.space, eb.g, report.witness->asset, eb.horizon,
                                             report.witness->certificate));
            continue;
        }
        const RepresentationProcess rep = build_representation(eb.space, eb.f);
        REQUIRE(report.deflator);
        // The common deflator handles every component of the basis at once.
        CHECK(is_deflator(eb.space, eb.g, *report.deflator, rep.w, eb.horizon));

        const std::vector<Process> assets = viable_asset_family(rng, eb.space, eb.f, 4);
        for (const Process& s : assets) {
            // The horizon is a G stopping time only, so the F side runs to the end.
            const ConnectorResult fc =
                find_structure_connector(eb.space, eb.f, s, StoppingTime::infinite(eb.space.size()));
            REQUIRE(fc.feasible());
            const GConnector gc = g_connector(eb, report.factors, rep, s, *fc.connector);
            CHECK(jump_identity_check(eb, report.factors, rep, gc.k, *fc.connector).holds);
            const Process zg = deflator_from_connector(eb.space, eb.g, gc.y);
            CHECK(is_deflator(eb.space, eb.g, zg, s, eb.horizon));

            // Product of the F-deflator and the common G-deflator deflates S in G.
            const Process zf = deflator_from_connector(eb.space, eb.f, *fc.connector);
            CHECK(is_deflator(eb.space, eb.g, multiply(zf, *report.deflator), s, eb.horizon));
        }
    }
}
