#include "enlarge/models.hpp"

#include "enlarge/calculus.hpp"
#include "enlarge/linalg.hpp"
#include "enlarge/representation.hpp"
#include "enlarge/viability.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace enlarge {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw Error(ErrorCode::SchemaError, "empty integer range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    // Reject the low residue so every value in the span is equally likely.
    const std::uint64_t threshold = (0 - span) % span;
    std::uint64_t x = engine_();
    while (x < threshold) x = engine_();
    return lo + static_cast<std::int64_t>(x % span);
}

void check_config(const GeneratorConfig& cfg) {
    if (cfg.min_outcomes < 1 || cfg.min_outcomes > cfg.max_outcomes)
        throw Error(ErrorCode::SchemaError, "outcome range is empty");
    if (cfg.min_ticks < 1 || cfg.min_ticks > cfg.max_ticks) throw Error(ErrorCode::SchemaError, "tick range is empty");
    if (cfg.max_children < 2) throw Error(ErrorCode::SchemaError, "max_children must be at least 2");
}

namespace {

std::vector<Outcome> all_outcomes(std::size_t n) {
    std::vector<Outcome> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(i) - 1))]);
}

// Splits a set into `parts` nonempty random pieces.
std::vector<Block> split_block(Rng& rng, Block b, std::size_t parts) {
    parts = std::min(parts, b.size());
    shuffle(rng, b);
    std::vector<Block> out(parts);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::size_t slot = i < parts ? i : static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(parts) - 1));
        out[slot].push_back(b[i]);
    }
    return out;
}

Partition refine(Rng& rng, const Partition& p, std::int64_t split_num, std::int64_t split_den, std::size_t max_parts) {
    std::vector<Block> blocks;
    for (const Block& b : p.blocks()) {
        if (b.size() >= 2 && rng.chance(split_num, split_den)) {
            const auto parts = static_cast<std::size_t>(rng.uniform(2, static_cast<std::int64_t>(std::min(max_parts, b.size()))));
            for (auto& piece : split_block(rng, b, parts)) blocks.push_back(std::move(piece));
        } else {
            blocks.push_back(b);
        }
    }
    return Partition(std::move(blocks), p.outcomes());
}

Partition random_partition(Rng& rng, std::size_t n, std::size_t parts) {
    return Partition(split_block(rng, all_outcomes(n), parts), n);
}

// Partition of the space cutting each F_{k-} atom in two so that both halves meet every child
// with at least two outcomes. Atoms with a singleton child stay whole.
Partition support_preserving_overlay(Rng& rng, const Partition& pre, const Partition& at) {
    std::vector<Block> blocks;
    for (const Block& b : pre.blocks()) {
        const auto kids = at.blocks_inside(b);
        const bool splittable =
            std::all_of(kids.begin(), kids.end(), [&](std::size_t c) { return at.block(c).size() >= 2; });
        if (!splittable || !rng.chance(2, 3)) {
            blocks.push_back(b);
            continue;
        }
        Block left;
        Block right;
        for (std::size_t c : kids) {
            Block a = at.block(c);
            shuffle(rng, a);
            left.push_back(a[0]);
            right.push_back(a[1]);
            for (std::size_t i = 2; i < a.size(); ++i) (rng.chance(1, 2) ? left : right).push_back(a[i]);
        }
        blocks.push_back(std::move(left));
        blocks.push_back(std::move(right));
    }
    return Partition(std::move(blocks), pre.outcomes());
}

StoppingTime random_stopping_time(Rng& rng, const Filtration& g) {
    std::vector<int> t(g.outcomes(), StoppingTime::kInfinity);
    for (int k = 0; k <= g.ticks(); ++k) {
        for (const Block& b : g.at(k).blocks()) {
            if (t[b.front()] != StoppingTime::kInfinity) continue;
            if (rng.chance(1, 5))
                for (Outcome w : b) t[w] = k;
        }
    }
    return StoppingTime(std::move(t));
}

Filtration meet_all(const Filtration& g, int from_tick, const Partition& extra, bool include_pre_of_first) {
    Partition initial = g.initial();
    std::vector<TickPartitions> ticks;
    for (int k = 1; k <= g.ticks(); ++k) {
        Partition pre = g.pre(k);
        Partition at = g.at(k);
        if (k > from_tick || (k == from_tick && include_pre_of_first)) pre = pre.meet(extra);
        if (k >= from_tick) at = at.meet(extra);
        ticks.push_back({std::move(pre), std::move(at)});
    }
    return Filtration(std::move(initial), std::move(ticks));
}

// Cuts a live G_{k-} atom along an F_k child. Returns false when no live atom sits in a split F_{k-} atom.
bool break_support(Rng& rng, EnlargedBasis& eb) {
    struct Candidate {
        int k;
        Block c;
        Block a;
    };
    std::vector<Candidate> candidates;
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const Partition& fpre = eb.f.pre(k);
        const Partition& fat = eb.f.at(k);
        for (const Block& c : eb.g.pre(k).blocks()) {
            if (!eb.alive(c.front(), k)) continue;
            const auto kids = fat.blocks_inside(fpre.block(fpre.block_of(c.front())));
            if (kids.size() < 2) continue;
            for (std::size_t ai : kids) {
                const Block& a = fat.block(ai);
                Block inside;
                std::set_intersection(c.begin(), c.end(), a.begin(), a.end(), std::back_inserter(inside));
                if (!inside.empty() && inside.size() < c.size()) {
                    candidates.push_back({k, c, inside});
                    break;
                }
            }
        }
    }
    if (candidates.empty()) return false;
    const Candidate& pick = candidates[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(candidates.size()) - 1))];
    std::vector<int> key(eb.space.size(), 0);
    for (Outcome w : pick.a) key[w] = 1;
    eb.g = meet_all(eb.g, pick.k, Partition::level_sets(key), true);
    return true;
}

std::vector<int> random_tau(Rng& rng, std::size_t n, int ticks) {
    std::vector<int> tau(n);
    bool alive = false;
    while (!alive) {
        for (auto& t : tau) {
            const auto r = rng.uniform(0, ticks + 1);
            t = r == ticks + 1 ? StoppingTime::kInfinity : static_cast<int>(r);
            if (t == 0 && rng.chance(3, 4)) t = 1;
            alive = alive || t >= 1;
        }
    }
    return tau;
}

std::vector<int> random_xi(Rng& rng, std::size_t n) {
    const auto m = rng.uniform(2, 3);
    std::vector<int> xi(n);
    for (auto& x : xi) x = static_cast<int>(rng.uniform(0, m - 1));
    return xi;
}

}  // namespace

SampleSpace random_space(Rng& rng, std::size_t n) {
    std::vector<std::int64_t> weight(n);
    std::int64_t total = 0;
    for (auto& w : weight) total += (w = rng.uniform(1, 4));
    std::vector<std::string> labels;
    Vec prob;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("w" + std::to_string(i + 1));
        prob.push_back(make_rational(weight[i], total));
    }
    return SampleSpace(std::move(labels), std::move(prob));
}

Filtration random_filtration(Rng& rng, std::size_t n, int ticks, std::size_t max_children) {
    Partition initial = rng.chance(1, 4) && n >= 2 ? random_partition(rng, n, 2) : Partition::trivial(n);
    std::vector<TickPartitions> out;
    const Partition* last = &initial;
    for (int k = 1; k <= ticks; ++k) {
        Partition pre = refine(rng, *last, 1, 5, 2);
        Partition at = refine(rng, pre, 3, 4, max_children);
        out.push_back({std::move(pre), std::move(at)});
        last = &out.back().at;
    }
    return Filtration(std::move(initial), std::move(out));
}

EnlargedBasis gen_random_instance(const GeneratorConfig& cfg) {
    check_config(cfg);
    Rng rng(cfg.seed);
    for (;;) {
        const auto n = static_cast<std::size_t>(
            rng.uniform(static_cast<std::int64_t>(cfg.min_outcomes), static_cast<std::int64_t>(cfg.max_outcomes)));
        const auto ticks = static_cast<int>(rng.uniform(cfg.min_ticks, cfg.max_ticks));
        SampleSpace space = random_space(rng, n);
        Filtration f = random_filtration(rng, n, ticks, cfg.max_children);
        EnlargedBasis eb;
        switch (cfg.kind) {
            case EnlargementKind::Initial:
                eb = gen_initial_enlargement(space, f, random_xi(rng, n)).eb;
                break;
            case EnlargementKind::Progressive:
                eb = gen_progressive_enlargement(space, f, StoppingTime(random_tau(rng, n, ticks))).eb;
                break;
            case EnlargementKind::Random: {
                const bool wild = rng.chance(1, 3);
                Partition g0 = f.initial();
                if (rng.chance(1, 4)) g0 = g0.meet(random_partition(rng, n, 2));
                std::vector<TickPartitions> gt;
                const Partition* last = &g0;
                for (int k = 1; k <= ticks; ++k) {
                    Partition overlay = Partition::trivial(n);
                    if (wild && rng.chance(1, 2))
                        overlay = random_partition(rng, n, static_cast<std::size_t>(rng.uniform(2, 3)));
                    else if (rng.chance(2, 3))
                        overlay = support_preserving_overlay(rng, f.pre(k), f.at(k));
                    Partition pre = f.pre(k).meet(*last).meet(overlay);
                    Partition at = f.at(k).meet(pre);
                    gt.push_back({std::move(pre), std::move(at)});
                    last = &gt.back().at;
                }
                eb = EnlargedBasis{space, f, Filtration(std::move(g0), std::move(gt)), StoppingTime::infinite(n)};
                break;
            }
        }
        if (cfg.random_horizon && cfg.kind != EnlargementKind::Progressive && rng.chance(1, 3))
            eb.horizon = random_stopping_time(rng, eb.g);
        if (cfg.force_condition_failure) {
            if (check_condition_support(eb).holds && !break_support(rng, eb)) continue;
            if (check_condition_support(eb).holds) throw Error(ErrorCode::DataInvariantViolated, "failed to break support");
        }
        if (const Diagnostics d = validate(eb); !d.ok) throw Error(*d.code, "generator produced an invalid basis: " + d.message);
        return eb;
    }
}

EnlargedBasis six_point_instance() {
    const std::size_t n = 6;
    const SampleSpace space = SampleSpace::uniform(n);
    const Partition trivial = Partition::trivial(n);
    const Partition f1({{0, 1, 2}, {3, 4, 5}}, n);
    const Partition g1pre({{0, 1, 3}, {2, 4, 5}}, n);
    Filtration f(trivial, {{trivial, f1}});
    Filtration g(g1pre, {{g1pre, f1.meet(g1pre)}});
    return {space, std::move(f), std::move(g), StoppingTime::infinite(n)};
}

Process six_point_martingale() {
    Process x(6, 1, 1);
    for (Outcome w = 0; w < 6; ++w) x(w, 1) = w < 3 ? make_rational(1, 2) : make_rational(-1, 2);
    return x;
}

EnlargedBasis four_point_instance() {
    const std::size_t n = 4;
    const SampleSpace space = SampleSpace::uniform(n);
    const Partition trivial = Partition::trivial(n);
    const Partition f1({{0, 1}, {2, 3}}, n);
    const Partition g1pre({{0, 1, 2}, {3}}, n);
    Filtration f(trivial, {{trivial, f1}});
    Filtration g(trivial, {{g1pre, f1.meet(g1pre)}});
    return {space, std::move(f), std::move(g), StoppingTime::infinite(n)};
}

EnlargedBasis binary_tree_instance(int ticks) {
    const std::size_t n = std::size_t{1} << ticks;
    const SampleSpace space = SampleSpace::uniform(n);
    std::vector<TickPartitions> out;
    Partition last = Partition::trivial(n);
    for (int k = 1; k <= ticks; ++k) {
        std::vector<std::size_t> key(n);
        for (Outcome w = 0; w < n; ++w) key[w] = w >> (ticks - k);
        Partition at = Partition::level_sets(key);
        out.push_back({last, at});
        last = at;
    }
    Filtration f(Partition::trivial(n), std::move(out));
    return {space, f, f, StoppingTime::infinite(n)};
}

InitialEnlargement gen_initial_enlargement(const SampleSpace& space, const Filtration& f, const std::vector<int>& xi) {
    if (xi.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "xi has the wrong length");
    const Partition tag = Partition::level_sets(xi);
    std::vector<TickPartitions> ticks;
    for (int k = 1; k <= f.ticks(); ++k) ticks.push_back({f.pre(k).meet(tag), f.at(k).meet(tag)});
    InitialEnlargement ie;
    ie.eb = EnlargedBasis{space, f, Filtration(f.initial().meet(tag), std::move(ticks)), StoppingTime::infinite(space.size())};
    ie.xi = xi;
    const std::set<int> range(xi.begin(), xi.end());
    ie.values.assign(range.begin(), range.end());
    for (int x : ie.values) {
        Vec ind(space.size());
        for (Outcome w = 0; w < space.size(); ++w) ind[w] = xi[w] == x ? 1 : 0;
        const Rational inv = 1 / dot(space.probs(), ind);
        std::vector<Vec> q;
        std::vector<Vec> ql;
        for (int k = 0; k <= f.ticks(); ++k) {
            q.push_back(inv * cond_expect(space, f.at(k), ind));
            ql.push_back(inv * cond_expect(space, f.pre(k), ind));
        }
        ie.q.push_back(std::move(q));
        ie.q_left.push_back(std::move(ql));
    }
    return ie;
}

CrossCheck jacod_phi_crosscheck(const InitialEnlargement& ie) {
    const EnlargedBasis& eb = ie.eb;
    const SampleSpace& space = eb.space;
    const int ticks = eb.f.ticks();
    for (std::size_t x = 0; x < ie.values.size(); ++x)
        for (int k = 1; k <= ticks; ++k)
            for (Outcome w = 0; w < space.size(); ++w)
                if (sgn(ie.q_left[x][static_cast<std::size_t>(k)][w]) == 0)
                    throw Error(ErrorCode::JacodDegenerate, "conditional law of xi loses value " +
                                                                std::to_string(ie.values[x]) + " at tick " + std::to_string(k));
    auto slot = [&](Outcome w) {
        return static_cast<std::size_t>(std::lower_bound(ie.values.begin(), ie.values.end(), ie.xi[w]) - ie.values.begin());
    };

    const RepresentationProcess rep = build_representation(space, eb.f);
    const Process gamma = drift_operator(eb, rep.w);
    for (int k = 1; k <= ticks; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (std::size_t j = 0; j < rep.dim(); ++j) {
            const Vec dw = rep.w.jump_slice(k, j);
            std::vector<Vec> cov;
            for (std::size_t x = 0; x < ie.values.size(); ++x) {
                Vec prod(space.size());
                for (Outcome w = 0; w < space.size(); ++w) prod[w] = dw[w] * (ie.q[x][kk][w] - ie.q_left[x][kk][w]);
                cov.push_back(cond_expect(space, eb.f.pre(k), prod));
            }
            for (Outcome w = 0; w < space.size(); ++w) {
                const std::size_t x = slot(w);
                if (gamma.jump(w, k, j) != cov[x][w] / ie.q_left[x][kk][w])
                    return {false, Locator{k, w}, "drift differs from the density formula"};
            }
        }
    }

    const DriftFactors factors = solve_factors(eb, rep);
    for (int k = 1; k <= ticks; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (Outcome w = 0; w < space.size(); ++w) {
            const std::size_t x = slot(w);
            const Rational dq = ie.q[x][kk][w] - ie.q_left[x][kk][w];
            const Rational n = density_factor(factors, w, k) - 1;
            if (n != dq / ie.q_left[x][kk][w]) return {false, Locator{k, w}, "phi^T dN differs from dq/q_-"};
            if (n / (1 + n) != dq / ie.q[x][kk][w]) return {false, Locator{k, w}, "ratio differs from dq/q"};
        }
    }
    return {};
}

InitialEnlargement gen_jacod_instance(Rng& rng) {
    const auto base_n = static_cast<std::size_t>(rng.uniform(2, 5));
    const auto ticks = static_cast<int>(rng.uniform(1, 3));
    const auto tags = static_cast<std::size_t>(rng.uniform(2, 3));
    const SampleSpace base = random_space(rng, base_n);
    const Filtration bf = random_filtration(rng, base_n, ticks, 3);

    // Product outcome (w, x) at index w * tags + x.
    std::vector<char> kept(base_n * tags, 1);
    std::vector<std::size_t> order(kept.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(rng, order);
    const Partition& last_pre = bf.pre(ticks);
    for (std::size_t idx : order) {
        if (!rng.chance(1, 3)) continue;
        kept[idx] = 0;
        const std::size_t x = idx % tags;
        bool present = false;
        for (Outcome w : last_pre.block(last_pre.block_of(idx / tags))) present = present || kept[w * tags + x] != 0;
        if (!present) kept[idx] = 1;
    }
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (kept[i] != 0) survivors.push_back(i);

    std::vector<std::string> labels;
    Vec prob;
    Rational total(0);
    std::vector<int> xi;
    for (std::size_t idx : survivors) {
        labels.push_back(base.label(idx / tags) + "x" + std::to_string(idx % tags));
        prob.push_back(base.prob(idx / tags) * rng.uniform(1, 3));
        total += prob.back();
        xi.push_back(static_cast<int>(idx % tags));
    }
    for (auto& p : prob) p /= total;
    SampleSpace space(std::move(labels), std::move(prob));

    auto lift = [&](const Partition& p) {
        std::vector<std::size_t> key(survivors.size());
        for (std::size_t i = 0; i < survivors.size(); ++i) key[i] = p.block_of(survivors[i] / tags);
        return Partition::level_sets(key);
    };
    std::vector<TickPartitions> lifted;
    for (int k = 1; k <= ticks; ++k) lifted.push_back({lift(bf.pre(k)), lift(bf.at(k))});
    Filtration f(lift(bf.initial()), std::move(lifted));
    return gen_initial_enlargement(space, f, xi);
}

ProgressiveEnlargement gen_progressive_enlargement(const SampleSpace& space, const Filtration& f, const StoppingTime& tau) {
    const int ticks = f.ticks();
    if (tau.outcomes() != space.size()) throw Error(ErrorCode::NotARandomTime, "random time has the wrong length");
    for (Outcome w = 0; w < space.size(); ++w)
        if (tau(w) < 0 || (tau(w) > ticks && tau.is_finite(w)))
            throw Error(ErrorCode::NotARandomTime, "random time value outside the tick grid");
    // Occurrence information up to tick j: the value of tau on {tau <= j}, one shared label otherwise.
    auto revealed = [&](int j) {
        std::vector<int> key(space.size());
        for (Outcome w = 0; w < space.size(); ++w) key[w] = tau(w) <= j ? tau(w) : -1;
        return Partition::level_sets(key);
    };
    std::vector<TickPartitions> gt;
    for (int k = 1; k <= ticks; ++k) gt.push_back({f.pre(k).meet(revealed(k - 1)), f.at(k).meet(revealed(k))});
    ProgressiveEnlargement pe;
    pe.eb = EnlargedBasis{space, f, Filtration(f.initial().meet(revealed(0)), std::move(gt)), tau};
    pe.tau = tau;
    for (int k = 0; k <= ticks; ++k) {
        Vec after(space.size());
        Vec from(space.size());
        for (Outcome w = 0; w < space.size(); ++w) {
            after[w] = tau(w) > k ? 1 : 0;
            from[w] = tau(w) >= k ? 1 : 0;
        }
        pe.z.push_back(cond_expect(space, f.at(k), after));
        pe.z_tilde.push_back(cond_expect(space, f.at(k), from));
        pe.z_left.push_back(cond_expect(space, f.pre(k), from));
    }
    return pe;
}

CrossCheck azema_phi_crosscheck(const ProgressiveEnlargement& pe) {
    const EnlargedBasis& eb = pe.eb;
    const SampleSpace& space = eb.space;
    Rational alive_mass(0);
    for (Outcome w = 0; w < space.size(); ++w)
        if (pe.tau(w) >= 1) alive_mass += space.prob(w);
    if (sgn(alive_mass) == 0) throw Error(ErrorCode::AzemaDegenerate, "tau vanishes before the first tick");

    const RepresentationProcess rep = build_representation(space, eb.f);
    const Process gamma = drift_operator(eb, rep.w);
    bool literal = true;
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (std::size_t j = 0; j < rep.dim(); ++j) {
            const Vec dw = rep.w.jump_slice(k, j);
            Vec prod(space.size());
            Vec prod_literal(space.size());
            for (Outcome w = 0; w < space.size(); ++w) {
                prod[w] = dw[w] * (pe.z_tilde[kk][w] - pe.z_left[kk][w]);
                prod_literal[w] = dw[w] * pe.z[kk][w];
            }
            const Vec cov = cond_expect(space, eb.f.pre(k), prod);
            const Vec cov_literal = cond_expect(space, eb.f.pre(k), prod_literal);
            for (Outcome w = 0; w < space.size(); ++w) {
                if (!eb.alive(w, k)) continue;
                if (gamma.jump(w, k, j) != cov[w] / pe.z_left[kk][w])
                    return {false, Locator{k, w}, "drift differs from the Azema formula"};
                const Rational& zprev = pe.z[kk - 1][w];
                literal = literal && sgn(zprev) > 0 && gamma.jump(w, k, j) == cov_literal[w] / zprev;
            }
        }
    }

    const DriftFactors factors = solve_factors(eb, rep);
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (Outcome w = 0; w < space.size(); ++w) {
            if (!eb.alive(w, k)) continue;
            const Rational dm = pe.z_tilde[kk][w] - pe.z_left[kk][w];
            const Rational n = density_factor(factors, w, k) - 1;
            if (n != dm / pe.z_left[kk][w]) return {false, Locator{k, w}, "phi^T dN differs from dm/Z_-"};
            if (n / (1 + n) != dm / pe.z_tilde[kk][w]) return {false, Locator{k, w}, "ratio differs from dm/Z"};
        }
    }
    return {true, std::nullopt,
            literal ? "P(tau > k | F_k) form agrees" : "P(tau > k | F_k) form differs; tau charges F stopping times"};
}

ProgressiveEnlargement gen_azema_instance(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.uniform(3, 8));
    const auto ticks = static_cast<int>(rng.uniform(1, 3));
    SampleSpace space = random_space(rng, n);
    Filtration f = random_filtration(rng, n, ticks, 3);
    return gen_progressive_enlargement(space, f, StoppingTime(random_tau(rng, n, ticks)));
}

namespace {

// Centered random jumps per (tick, F_{k-} atom); `cap` scales an atom whose jumps reach 1.
Process random_centered(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t dim, bool cap) {
    Process x(space.size(), f.ticks(), dim);
    for (int k = 1; k <= f.ticks(); ++k) {
        const Partition& at = f.at(k);
        for (const Block& b : f.pre(k).blocks()) {
            const auto kids = at.blocks_inside(b);
            const Rational pb = space.mass(b);
            for (std::size_t i = 0; i < dim; ++i) {
                Vec v(kids.size());
                Rational mean(0);
                for (std::size_t c = 0; c < kids.size(); ++c) {
                    v[c] = rng.rational(-4, 4, 4);
                    mean += space.mass(at.block(kids[c])) / pb * v[c];
                }
                Rational top(0);
                for (auto& val : v) {
                    val -= mean;
                    top = std::max(top, val);
                }
                if (cap && top >= 1) {
                    const Rational scale = 1 / (2 * top);
                    for (auto& val : v) val *= scale;
                }
                for (std::size_t c = 0; c < kids.size(); ++c)
                    for (Outcome w : at.block(kids[c])) x(w, k, i) = v[c];
            }
        }
        for (Outcome w = 0; w < space.size(); ++w)
            for (std::size_t i = 0; i < dim; ++i) x(w, k, i) += x(w, k - 1, i);
    }
    return x;
}

}  // namespace

Process random_martingale(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t dim) {
    return random_centered(rng, space, f, dim, false);
}

Process random_connector(Rng& rng, const SampleSpace& space, const Filtration& f) {
    return random_centered(rng, space, f, 1, true);
}

Process random_asset(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t dim) {
    Process s = random_martingale(rng, space, f, dim);
    const Process bracket_comp = compensator(space, f, bracket(s, s));
    const int mode = static_cast<int>(rng.uniform(0, 2));
    for (std::size_t i = 0; i < dim; ++i) {
        const Rational s0 = rng.rational(1, 8, 2);
        for (Outcome w = 0; w < space.size(); ++w) s(w, 0, i) += s0;
        Process drift(space.size(), f.ticks(), 1);
        for (int k = 1; k <= f.ticks(); ++k) {
            for (const Block& b : f.pre(k).blocks()) {
                Rational inc(0);
                if (mode == 1) {
                    // Drift proportional to the conditional variance keeps a connector in reach.
                    inc = rng.rational(-2, 2, 2) * bracket_comp.jump(b.front(), k, i * dim + i);
                } else if (mode == 2) {
                    inc = rng.rational(-3, 3, 2);
                }
                for (Outcome w : b) drift(w, k) = inc;
            }
            for (Outcome w = 0; w < space.size(); ++w) drift(w, k) += drift(w, k - 1);
        }
        for (Outcome w = 0; w < space.size(); ++w)
            for (int k = 1; k <= f.ticks(); ++k) s(w, k, i) += s0 + drift(w, k);
    }
    return s;
}

std::vector<Process> viable_asset_family(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t count) {
    const RepresentationProcess rep = build_representation(space, f);
    const StoppingTime never = StoppingTime::infinite(space.size());
    std::vector<Process> out;
    for (std::size_t h = 0; h < rep.dim() && out.size() < count; ++h) out.push_back(doleans_exp(rep.w.component(h)));
    for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count; ++attempt) {
        Process x = random_martingale(rng, space, f, 1) * make_rational(1, 4);
        const Process var = compensator(space, f, bracket(x, x));
        const Rational theta = rng.rational(-8, 8, 2);
        const Process tilted = x + var * theta;
        bool positive = true;
        for (Outcome w = 0; w < space.size() && positive; ++w)
            for (int k = 1; k <= f.ticks() && positive; ++k) positive = tilted.jump(w, k) > -1;
        if (!positive) continue;
        Process s = doleans_exp(tilted) * rng.rational(1, 4, 1);
        if (find_structure_connector(space, f, s, never).feasible()) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace enlarge

namespace enlarge {

namespace {

Vec random_law(Rng& rng, std::size_t m) {
    Vec w(m);
    Rational total(0);
    for (Rational& x : w) {
        x = rng.uniform(1, 6);
        total += x;
    }
    for (Rational& x : w) x /= total;
    return w;
}

// Largest s in (0, 1] with 1 + s * t_h > 0 (or >= 0 when touch is set) for every tilt t_h.
Rational tilt_scale(const Vec& tilts, bool touch) {
    Rational low(0);
    for (const Rational& t : tilts) low = std::min(low, t);
    if (low > -1) return Rational(1);
    return touch ? Rational(-1 / low) : Rational(-1 / low / 2);
}

}  // namespace

AccessibleEventData gen_accessible_event(Rng& rng, bool allow_null_branch) {
    const auto m = static_cast<std::size_t>(rng.uniform(2, 4));
    const auto nd = static_cast<std::size_t>(rng.uniform(1, 3));
    AccessibleEventData data;
    data.p = random_law(rng, m);
    data.weight = pow2_inverse(static_cast<unsigned>(rng.uniform(1, 4)));

    data.n_vals.assign(m, Vec(nd));
    for (std::size_t i = 0; i < nd; ++i) {
        Rational mean(0);
        for (std::size_t h = 0; h < m; ++h) {
            data.n_vals[h][i] = rng.rational(-4, 4, 4);
            mean += data.p[h] * data.n_vals[h][i];
        }
        for (std::size_t h = 0; h < m; ++h) data.n_vals[h][i] -= mean;
    }
    data.phi = Vec(nd);
    for (Rational& x : data.phi) x = rng.rational(-4, 4, 2);
    Vec tilts(m);
    for (std::size_t h = 0; h < m; ++h) tilts[h] = dot(data.phi, data.n_vals[h]);
    const Rational scale = tilt_scale(tilts, allow_null_branch && rng.chance(1, 2));
    for (Rational& x : data.phi) x *= scale;
    data.pbar = Vec(m);
    for (std::size_t h = 0; h < m; ++h) data.pbar[h] = (1 + scale * tilts[h]) * data.p[h];

    data.d_vals = Vec(m);
    Rational mean(0);
    for (std::size_t h = 0; h < m; ++h) {
        data.d_vals[h] = rng.rational(-6, 6, 4);
        mean += data.p[h] * data.d_vals[h];
    }
    Rational top(0);
    for (Rational& x : data.d_vals) {
        x -= mean;
        top = std::max(top, x);
    }
    if (top >= 1)
        for (Rational& x : data.d_vals) x /= 2 * top;
    validate(data);
    return data;
}

InaccessibleEventData gen_inaccessible_event(Rng& rng) {
    const auto m = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto nd = static_cast<std::size_t>(rng.uniform(1, 3));
    InaccessibleEventData data;
    data.q = random_law(rng, m);
    data.alpha = Vec(m);
    data.j3 = Vec(m);
    data.zeta3.assign(m, Vec(nd));
    data.l_vals.assign(m, Vec(nd));
    for (std::size_t h = 0; h < m; ++h) {
        data.alpha[h] = rng.rational(1, 8, 4) * (rng.chance(1, 2) ? 1 : -1);
        data.j3[h] = rng.rational(-6, 6, 3);
        for (std::size_t i = 0; i < nd; ++i) data.zeta3[h][i] = rng.rational(-4, 4, 2);
    }
    data.phi = Vec(nd);
    for (Rational& x : data.phi) x = rng.rational(-4, 4, 2);
    Vec tilts(m);
    for (std::size_t h = 0; h < m; ++h) tilts[h] = dot(data.phi, data.zeta3[h]) * data.alpha[h];
    const Rational scale = tilt_scale(tilts, false);
    for (Rational& x : data.phi) x *= scale;

    data.r = Vec(nd);
    for (std::size_t h = 0; h < m; ++h)
        for (std::size_t i = 0; i < nd; ++i) {
            data.l_vals[h][i] = data.zeta3[h][i] * data.alpha[h];
            data.r[i] += data.q[h] * data.l_vals[h][i];
        }
    if (nd >= 2 && rng.chance(1, 3)) {
        // Only phi^T R enters the kernel; move R along a direction orthogonal to phi.
        const Rational c = rng.rational(-3, 3, 2);
        data.r[0] += c * data.phi[1];
        data.r[1] -= c * data.phi[0];
    }
    const Rational tilt = 1 + dot(data.phi, data.r);
    data.qbar = Vec(m);
    for (std::size_t h = 0; h < m; ++h) data.qbar[h] = (1 + dot(data.phi, data.l_vals[h])) * data.q[h] / tilt;
    validate(data);
    return data;
}

}  // namespace enlarge
