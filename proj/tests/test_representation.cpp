#include "enlarge/calculus.hpp"
#include "enlarge/models.hpp"
#include "enlarge/representation.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace enlarge;
using testing::q;

TEST_CASE("no refinement gives a single zero component") {
    const std::size_t n = 3;
    const Filtration f(Partition::trivial(n), {{Partition::trivial(n), Partition::trivial(n)}});
    const RepresentationProcess rep = build_representation(SampleSpace::uniform(n), f);
    CHECK(rep.d == 0);
    CHECK(multiplicity(f) == 1);
    CHECK(rep.w == Process(n, 1, 1));
}

TEST_CASE("representation process on the 6-point basis") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    CHECK(rep.d == 1);
    for (Outcome w = 0; w < 6; ++w) {
        CHECK(rep.w.jump(w, 1, 0) == (w < 3 ? q(1, 4) : q(-1, 4)));
        CHECK(rep.w.jump(w, 1, 1) == (w < 3 ? q(-1, 4) : q(1, 4)));
    }
    CHECK(is_martingale(eb.space, eb.f, rep.w));
}

TEST_CASE("binary tree weights halve at each tick") {
    const EnlargedBasis eb = binary_tree_instance(2);
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    CHECK(rep.d == 1);
    CHECK(rep.w.jump(0, 1, 0) == q(1, 4));
    CHECK(rep.w.jump(0, 2, 0) == q(1, 8));
    CHECK(rep.w.jump(1, 2, 0) == q(-1, 8));
}

TEST_CASE("represent recovers coefficients on the 6-point basis") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    const Process h = represent(eb.space, eb.f, rep, six_point_martingale());
    CHECK(h.jump_vector(0, 1) == Vec{1, -1});
    CHECK(represent(eb.space, eb.f, rep, Process(6, 1, 1)) == Process(6, 1, 2));
}

TEST_CASE("represent rejects processes that are not martingales") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    Process x(6, 1, 1);
    for (Outcome w = 0; w < 3; ++w) x(w, 1) = 1;
    try {
        represent(eb.space, eb.f, rep, x);
        FAIL("represented a non-martingale");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotAMartingale);
    }
}

TEST_CASE("every random martingale is reconstructed from the basis") {
    Rng rng(23);
    for (int trial = 0; trial < 80; ++trial) {
        CAPTURE(trial);
        const auto n = static_cast<std::size_t>(rng.uniform(2, 12));
        const int ticks = static_cast<int>(rng.uniform(1, 4));
        const SampleSpace space = random_space(rng, n);
        const Filtration f = random_filtration(rng, n, ticks, 4);
        const RepresentationProcess rep = build_representation(space, f);
        CHECK(rep.dim() == multiplicity(f));
        CHECK(is_martingale(space, f, rep.w));

        const Process x = random_martingale(rng, space, f);
        const Process h = represent(space, f, rep, x);
        CHECK(is_predictable(f, h));
        CHECK(integrate(h, rep.w) == x);

        // Pads carry zero weight and zero jumps.
        for (int k = 1; k <= ticks; ++k)
            for (const AtomSplit& s : rep.splits[static_cast<std::size_t>(k)])
                for (std::size_t c = s.children.size(); c < rep.dim(); ++c) CHECK(s.p[c] == 0);
    }
}
