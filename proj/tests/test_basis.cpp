#include "enlarge/basis.hpp"
#include "enlarge/models.hpp"
#include "enlarge/representation.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace enlarge;
using testing::q;

namespace {

Vec indicator(std::size_t n, std::initializer_list<Outcome> set) {
    Vec v(n);
    for (Outcome w : set) v[w] = 1;
    return v;
}

}  // namespace

TEST_CASE("partitions are canonical") {
    const Partition a({{4, 3}, {0, 2, 1}, {5}}, 6);
    const Partition b({{5}, {1, 0, 2}, {3, 4}}, 6);
    CHECK(a == b);
    CHECK(a.block(0) == Block{0, 1, 2});
    CHECK(a.block_of(4) == 1);
    CHECK(a.num_blocks() == 3);
}

TEST_CASE("malformed partitions are rejected") {
    CHECK_THROWS_AS(Partition({{0, 1}, {1, 2}}, 3), Error);
    CHECK_THROWS_AS(Partition({{0, 1}}, 3), Error);
    CHECK_THROWS_AS(Partition({{0, 1}, {}, {2}}, 3), Error);
    CHECK_THROWS_AS(Partition({{0, 1, 7}, {2}}, 3), Error);
}

TEST_CASE("meet, refinement and measurability") {
    const Partition f({{0, 1, 2}, {3, 4, 5}}, 6);
    const Partition g({{0, 1, 3}, {2, 4, 5}}, 6);
    const Partition m = f.meet(g);
    CHECK(m == Partition({{0, 1}, {2}, {3}, {4, 5}}, 6));
    CHECK(m.refines(f));
    CHECK(m.refines(g));
    CHECK_FALSE(f.refines(g));
    CHECK(Partition::discrete(6).refines(m));
    CHECK(m.refines(Partition::trivial(6)));
    CHECK(f.is_measurable(Vec{1, 1, 1, 2, 2, 2}));
    CHECK_FALSE(f.is_measurable(Vec{1, 1, 2, 2, 2, 2}));
}

TEST_CASE("validate accepts the 6-point instance") {
    const EnlargedBasis eb = six_point_instance();
    CHECK(validate(eb.space, eb.f).ok);
    CHECK(validate(eb.space, eb.g).ok);
}

TEST_CASE("validate reports a broken refinement at its tick") {
    const std::size_t n = 6;
    const Partition split({{0, 1, 2}, {3, 4, 5}}, n);
    const Filtration f(Partition::trivial(n), {{split, Partition::trivial(n)}});
    const Diagnostics d = validate(SampleSpace::uniform(n), f);
    CHECK_FALSE(d.ok);
    CHECK(d.code == ErrorCode::RefinementBroken);
    CHECK(d.tick == 1);

    const Filtration later(Partition::trivial(n), {{Partition::trivial(n), split}, {Partition::trivial(n), split}});
    const Diagnostics d2 = validate(SampleSpace::uniform(n), later);
    CHECK(d2.code == ErrorCode::RefinementBroken);
    CHECK(d2.tick == 2);
}

TEST_CASE("validate reports bad probabilities") {
    const std::size_t n = 6;
    const Filtration f(Partition::trivial(n), {{Partition::trivial(n), Partition::discrete(n)}});
    const Vec short_mass(n, q(5, 36));
    const SampleSpace five_sixths(SampleSpace::uniform(n).labels(), short_mass);
    CHECK(validate(five_sixths, f).code == ErrorCode::BadProbability);

    Vec negative(n, q(1, 6));
    negative[0] = q(-1, 6);
    negative[1] = q(1, 2);
    CHECK(validate(SampleSpace(SampleSpace::uniform(n).labels(), negative), f).code == ErrorCode::BadProbability);

    std::vector<std::string> dup = SampleSpace::uniform(n).labels();
    dup[1] = dup[0];
    CHECK(validate(SampleSpace(dup, Vec(n, q(1, 6))), f).code == ErrorCode::BadProbability);
}

TEST_CASE("conditional expectation examples") {
    const SampleSpace space = SampleSpace::uniform(6);
    const Vec xi = indicator(6, {0, 1, 2});
    CHECK(cond_expect(space, Partition::trivial(6), xi) == Vec(6, q(1, 2)));
    CHECK(cond_expect(space, Partition::discrete(6), xi) == xi);
    const Partition c({{0, 1, 3}, {2, 4, 5}}, 6);
    CHECK(cond_expect(space, c, xi) == Vec{q(2, 3), q(2, 3), q(1, 3), q(2, 3), q(1, 3), q(1, 3)});
}

TEST_CASE("conditional expectation is a tower-consistent, mean-preserving projection") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = static_cast<std::size_t>(rng.uniform(2, 10));
        const SampleSpace space = random_space(rng, n);
        const Filtration f = random_filtration(rng, n, 2, 3);
        Vec xi(n);
        Vec eta(n);
        for (Outcome w = 0; w < n; ++w) {
            xi[w] = rng.rational(-6, 6, 3);
            eta[w] = rng.rational(0, 6, 2);
        }
        const Partition& coarse = f.pre(1);
        const Partition& fine = f.at(2);
        CHECK(cond_expect(space, coarse, cond_expect(space, fine, xi)) == cond_expect(space, coarse, xi));
        CHECK(dot(space.probs(), cond_expect(space, fine, xi)) == dot(space.probs(), xi));
        Vec combo(n);
        for (Outcome w = 0; w < n; ++w) combo[w] = 2 * xi[w] - eta[w];
        const Vec lhs = cond_expect(space, fine, combo);
        const Vec a = cond_expect(space, fine, xi);
        const Vec b = cond_expect(space, fine, eta);
        for (Outcome w = 0; w < n; ++w) CHECK(lhs[w] == 2 * a[w] - b[w]);
        for (const Rational& v : b) CHECK(v >= 0);
        CHECK(fine.is_measurable(a));
    }
}

TEST_CASE("stopping time classification") {
    const EnlargedBasis eb = six_point_instance();
    CHECK(classify_stopping_time(eb.f, StoppingTime::constant(6, 1)) == StoppingTimeClass::Predictable);
    const int inf = StoppingTime::kInfinity;
    const StoppingTime on_a({1, 1, 1, inf, inf, inf});
    CHECK(classify_stopping_time(eb.f, on_a) == StoppingTimeClass::AccessibleNotPredictable);
    // On F_1 = F_{1-} the same time becomes predictable.
    const Filtration announced(Partition::trivial(6), {{eb.f.at(1), eb.f.at(1)}});
    CHECK(classify_stopping_time(announced, on_a) == StoppingTimeClass::Predictable);
    const StoppingTime not_adapted({1, 1, inf, inf, inf, inf});
    CHECK_THROWS_AS(classify_stopping_time(eb.f, not_adapted), Error);
    CHECK_FALSE(is_stopping_time(eb.f, not_adapted));
}

TEST_CASE("jump times of the representation process") {
    const EnlargedBasis eb = six_point_instance();
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    std::vector<int> first(6, StoppingTime::kInfinity);
    for (Outcome w = 0; w < 6; ++w)
        for (int k = 1; k <= 1 && first[w] == StoppingTime::kInfinity; ++k)
            if (sgn(rep.w.jump(w, k, 0)) != 0) first[w] = k;
    // Every outcome jumps at tick 1, which is deterministic and so predictable.
    CHECK(classify_stopping_time(eb.f, StoppingTime(first)) == StoppingTimeClass::Predictable);
    // Jumping only on A is revealed at F_1 but not at F_{1-}.
    std::vector<int> on_a(6, StoppingTime::kInfinity);
    for (Outcome w = 0; w < 3; ++w) on_a[w] = 1;
    CHECK(classify_stopping_time(eb.f, StoppingTime(on_a)) == StoppingTimeClass::AccessibleNotPredictable);
}

TEST_CASE("processes expose jumps, components and stacking") {
    Process x(2, 2, 2);
    x(0, 1, 0) = 1;
    x(0, 2, 0) = 3;
    x(1, 2, 1) = -1;
    CHECK(x.jump(0, 0, 0) == 0);
    CHECK(x.jump(0, 2, 0) == 2);
    CHECK(x.jump_vector(1, 2) == Vec{0, -1});
    const Process c = x.component(1);
    CHECK(c.dim() == 1);
    CHECK(c(1, 2) == -1);
    CHECK(Process::stack({x.component(0), x.component(1)}) == x);
    CHECK((x + x) == x * Rational(2));
    CHECK_THROWS_AS(x + c, Error);
}
