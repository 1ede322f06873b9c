#include "enlarge/enlargement.hpp"

#include "enlarge/calculus.hpp"
#include "enlarge/linalg.hpp"

#include <functional>

namespace enlarge {

namespace {

void require_factors(const DriftFactors& factors) {
    if (factors.empty()) throw Error(ErrorCode::FactorsMissing, "drift factors have not been solved");
}

Rational conditional_mean(const SampleSpace& space, const Block& atom, const std::function<Rational(Outcome)>& f) {
    Rational num(0);
    Rational den(0);
    for (Outcome w : atom) {
        num += space.prob(w) * f(w);
        den += space.prob(w);
    }
    return num / den;
}

}  // namespace

Diagnostics validate(const EnlargedBasis& eb) {
    if (Diagnostics d = validate(eb.space, eb.f); !d.ok) return d;
    if (Diagnostics d = validate(eb.space, eb.g); !d.ok) return d;
    if (eb.f.ticks() != eb.g.ticks())
        return Diagnostics::failure(ErrorCode::DimensionMismatch, "F and G have different tick counts");
    for (int k = 0; k <= eb.f.ticks(); ++k) {
        if (!eb.g.at(k).refines(eb.f.at(k)) || !eb.g.pre(k).refines(eb.f.pre(k)))
            return Diagnostics::failure(ErrorCode::RefinementBroken, "G does not contain F at tick " + std::to_string(k), k);
    }
    if (!is_stopping_time(eb.g, eb.horizon))
        return Diagnostics::failure(ErrorCode::NotAStoppingTime, "horizon is not a G stopping time");
    return {};
}

Process drift_operator(const EnlargedBasis& eb, const Process& x) {
    if (!is_adapted(eb.f, x) || !is_martingale(eb.space, eb.f, x))
        throw Error(ErrorCode::NotFMartingale, "drift operator applies to F-martingales only");
    Process out(x.outcomes(), x.ticks(), x.dim());
    for (int k = 1; k <= x.ticks(); ++k) {
        for (std::size_t i = 0; i < x.dim(); ++i) {
            const Vec inc = cond_expect(eb.space, eb.g.pre(k), x.jump_slice(k, i));
            for (Outcome w = 0; w < x.outcomes(); ++w)
                out(w, k, i) = out(w, k - 1, i) + (eb.alive(w, k) ? inc[w] : Rational(0));
        }
    }
    return out;
}

Process factor_drift(const EnlargedBasis& eb, const DriftFactors& factors, const Process& x) {
    require_factors(factors);
    Process out(x.outcomes(), x.ticks(), x.dim());
    const std::size_t nd = factors.n.dim();
    for (int k = 1; k <= x.ticks(); ++k) {
        const Partition& pre = eb.f.pre(k);
        for (std::size_t i = 0; i < x.dim(); ++i) {
            // [N, X]^{F.p} increment per F_{k-} atom, one entry per component of N.
            std::vector<Vec> cov(pre.num_blocks(), Vec(nd));
            for (std::size_t b = 0; b < pre.num_blocks(); ++b)
                for (std::size_t j = 0; j < nd; ++j)
                    cov[b][j] = conditional_mean(eb.space, pre.block(b),
                                                 [&](Outcome w) -> Rational { return factors.n.jump(w, k, j) * x.jump(w, k, i); });
            for (Outcome w = 0; w < x.outcomes(); ++w) {
                Rational inc(0);
                if (eb.alive(w, k)) inc = dot(factors.phi.value_vector(w, k), cov[pre.block_of(w)]);
                out(w, k, i) = out(w, k - 1, i) + inc;
            }
        }
    }
    return out;
}

DriftFactors solve_factors(const EnlargedBasis& eb, const RepresentationProcess& rep) {
    const std::size_t dim = rep.dim();
    const SampleSpace& space = eb.space;
    DriftFactors out{rep.w, Process(space.size(), eb.f.ticks(), dim)};
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const Partition& fpre = eb.f.pre(k);
        const Partition& gpre = eb.g.pre(k);
        std::vector<Matrix> pinv(fpre.num_blocks());
        for (std::size_t b = 0; b < fpre.num_blocks(); ++b) {
            Matrix m(dim, dim);
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = r; c < dim; ++c) {
                    m(r, c) = conditional_mean(space, fpre.block(b),
                                               [&](Outcome w) -> Rational { return rep.w.jump(w, k, r) * rep.w.jump(w, k, c); });
                    m(c, r) = m(r, c);
                }
            pinv[b] = pseudo_inverse(m);
        }
        for (const Block& c : gpre.blocks()) {
            if (!eb.alive(c.front(), k)) continue;
            Vec g(dim);
            for (std::size_t j = 0; j < dim; ++j)
                g[j] = conditional_mean(space, c, [&](Outcome w) -> Rational { return rep.w.jump(w, k, j); });
            const Vec phi = pinv[fpre.block_of(c.front())] * g;
            for (Outcome w : c)
                for (std::size_t j = 0; j < dim; ++j) out.phi(w, k, j) = phi[j];
        }
    }
    if (!(factor_drift(eb, out, rep.w) == drift_operator(eb, rep.w)))
        throw Error(ErrorCode::Unsolvable, "drift multiplier does not reproduce the drift of W''");
    return out;
}

IdentityCheck compensator_transfer_check(const EnlargedBasis& eb, const DriftFactors& factors, const Process& a) {
    require_factors(factors);
    if (a.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "compensator transfer takes a scalar process");
    if (!is_adapted(eb.f, a)) throw Error(ErrorCode::NotAdapted, "compensator transfer needs an F-adapted process");
    const Process ff = compensator(eb.space, eb.f, a);
    const Process fd = factor_drift(eb, factors, a);
    for (int k = 1; k <= a.ticks(); ++k) {
        const Vec lhs = cond_expect(eb.space, eb.g.pre(k), a.jump_slice(k));
        for (Outcome w = 0; w < a.outcomes(); ++w) {
            if (!eb.alive(w, k)) continue;
            if (lhs[w] != ff.jump(w, k) + fd.jump(w, k)) return {false, Locator{k, w}};
        }
    }
    return {};
}

SupportCheck check_condition_support(const EnlargedBasis& eb) {
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const Partition& gpre = eb.g.pre(k);
        const Partition& fpre = eb.f.pre(k);
        const Partition& fat = eb.f.at(k);
        for (std::size_t ci = 0; ci < gpre.num_blocks(); ++ci) {
            const Block& c = gpre.block(ci);
            if (!eb.alive(c.front(), k)) continue;
            std::vector<char> in_c(eb.space.size(), 0);
            for (Outcome w : c) in_c[w] = 1;
            for (std::size_t ai : fat.blocks_inside(fpre.block(fpre.block_of(c.front())))) {
                const Block& a = fat.block(ai);
                bool meets = false;
                for (Outcome w : a) meets = meets || in_c[w] != 0;
                if (!meets) return {false, SupportWitness{k, ci, ai, c, a}};
            }
        }
    }
    return {};
}

bool support_sets_agree(const EnlargedBasis& eb, int k, const Vec& xi) {
    const Vec eg = cond_expect(eb.space, eb.g.pre(k), xi);
    const Vec ef = cond_expect(eb.space, eb.f.pre(k), xi);
    for (Outcome w = 0; w < eb.space.size(); ++w) {
        if (!eb.alive(w, k)) continue;
        if ((sgn(eg[w]) > 0) != (sgn(ef[w]) > 0)) return false;
    }
    return true;
}

Rational density_factor(const DriftFactors& factors, Outcome w, int k) {
    return 1 + dot(factors.phi.value_vector(w, k), factors.n.jump_vector(w, k));
}

PositivityCheck check_positivity(const EnlargedBasis& eb, const DriftFactors& factors) {
    require_factors(factors);
    for (int k = 1; k <= eb.f.ticks(); ++k)
        for (Outcome w = 0; w < eb.space.size(); ++w)
            if (eb.alive(w, k) && sgn(density_factor(factors, w, k)) <= 0) return {false, Locator{k, w}};
    return {};
}

}  // namespace enlarge
