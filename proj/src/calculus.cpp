#include "enlarge/calculus.hpp"

#include <algorithm>

namespace enlarge {

namespace {

void require_basis(const Filtration& filt, const Process& x) {
    if (x.outcomes() != filt.outcomes() || x.ticks() != filt.ticks())
        throw Error(ErrorCode::DimensionMismatch, "process does not live on this filtration");
}

bool measurable_at(const Partition& p, const Process& x, int k) {
    for (std::size_t i = 0; i < x.dim(); ++i)
        if (!p.is_measurable(x.slice(k, i))) return false;
    return true;
}

}  // namespace

bool is_adapted(const Filtration& filt, const Process& x) {
    require_basis(filt, x);
    for (int k = 0; k <= x.ticks(); ++k)
        if (!measurable_at(filt.at(k), x, k)) return false;
    return true;
}

bool is_predictable(const Filtration& filt, const Process& x) {
    require_basis(filt, x);
    for (int k = 0; k <= x.ticks(); ++k)
        if (!measurable_at(filt.pre(k), x, k)) return false;
    return true;
}

Process compensator(const SampleSpace& space, const Filtration& filt, const Process& a) {
    if (!is_adapted(filt, a)) throw Error(ErrorCode::NotAdapted, "compensator of a non-adapted process");
    Process out(a.outcomes(), a.ticks(), a.dim());
    for (int k = 1; k <= a.ticks(); ++k) {
        for (std::size_t i = 0; i < a.dim(); ++i) {
            const Vec inc = cond_expect(space, filt.pre(k), a.jump_slice(k, i));
            for (Outcome w = 0; w < a.outcomes(); ++w) out(w, k, i) = out(w, k - 1, i) + inc[w];
        }
    }
    return out;
}

bool is_martingale(const SampleSpace& space, const Filtration& filt, const Process& x) {
    if (!is_adapted(filt, x)) throw Error(ErrorCode::NotAdapted, "martingale test of a non-adapted process");
    for (int k = 1; k <= x.ticks(); ++k) {
        for (std::size_t i = 0; i < x.dim(); ++i) {
            const Vec m = cond_expect(space, filt.pre(k), x.jump_slice(k, i));
            if (std::any_of(m.begin(), m.end(), [](const Rational& v) { return sgn(v) != 0; })) return false;
        }
    }
    return true;
}

Decomposition canonical_decomposition(const SampleSpace& space, const Filtration& filt, const Process& x) {
    Process v = compensator(space, filt, x);
    Process m(x.outcomes(), x.ticks(), x.dim());
    for (Outcome w = 0; w < x.outcomes(); ++w)
        for (int k = 0; k <= x.ticks(); ++k)
            for (std::size_t i = 0; i < x.dim(); ++i) m(w, k, i) = x(w, k, i) - x(w, 0, i) - v(w, k, i);
    return {std::move(m), std::move(v)};
}

Process bracket(const Process& x, const Process& y) {
    if (x.outcomes() != y.outcomes() || x.ticks() != y.ticks())
        throw Error(ErrorCode::DimensionMismatch, "bracket of processes on different bases");
    Process out(x.outcomes(), x.ticks(), x.dim() * y.dim());
    for (Outcome w = 0; w < x.outcomes(); ++w) {
        for (int k = 1; k <= x.ticks(); ++k) {
            for (std::size_t i = 0; i < x.dim(); ++i) {
                const Rational dx = x.jump(w, k, i);
                for (std::size_t j = 0; j < y.dim(); ++j) {
                    const std::size_t c = i * y.dim() + j;
                    out(w, k, c) = out(w, k - 1, c) + dx * y.jump(w, k, j);
                }
            }
        }
    }
    return out;
}

Process integrate(const Process& h, const Process& x) {
    if (h.outcomes() != x.outcomes() || h.ticks() != x.ticks() || h.dim() != x.dim())
        throw Error(ErrorCode::DimensionMismatch, "integrand and integrator do not conform");
    Process out(x.outcomes(), x.ticks(), 1);
    for (Outcome w = 0; w < x.outcomes(); ++w) {
        for (int k = 1; k <= x.ticks(); ++k) {
            Rational inc(0);
            for (std::size_t i = 0; i < x.dim(); ++i) inc += h(w, k, i) * x.jump(w, k, i);
            out(w, k) = out(w, k - 1) + inc;
        }
    }
    return out;
}

Process stoch_integral(const Filtration& filt, const Process& h, const Process& x) {
    require_basis(filt, h);
    // H_0 never multiplies a jump, so only ticks 1..K are tested.
    for (int k = 1; k <= h.ticks(); ++k)
        if (!measurable_at(filt.pre(k), h, k))
            throw Error(ErrorCode::NotPredictable, "integrand not predictable at tick " + std::to_string(k));
    return integrate(h, x);
}

Process doleans_exp(const Process& x) {
    if (x.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "stochastic exponential of a vector process");
    Process out(x.outcomes(), x.ticks(), 1);
    for (Outcome w = 0; w < x.outcomes(); ++w) {
        out(w, 0) = 1;
        for (int k = 1; k <= x.ticks(); ++k) out(w, k) = out(w, k - 1) * (1 + x.jump(w, k));
    }
    return out;
}

Process stop(const Process& x, const StoppingTime& t) {
    if (t.outcomes() != x.outcomes()) throw Error(ErrorCode::DimensionMismatch, "stopping time on a different space");
    Process out = x;
    for (Outcome w = 0; w < x.outcomes(); ++w) {
        if (t(w) >= x.ticks()) continue;
        for (int k = t(w) + 1; k <= x.ticks(); ++k)
            for (std::size_t i = 0; i < x.dim(); ++i) out(w, k, i) = x(w, t(w), i);
    }
    return out;
}

Process stop(const Filtration& filt, const Process& x, const StoppingTime& t) {
    if (!is_stopping_time(filt, t)) throw Error(ErrorCode::NotAStoppingTime, "stopping at a random time that is not a stopping time");
    return stop(x, t);
}

Process lag(const Process& x) {
    Process out(x.outcomes(), x.ticks(), x.dim());
    for (Outcome w = 0; w < x.outcomes(); ++w)
        for (int k = 0; k <= x.ticks(); ++k)
            for (std::size_t i = 0; i < x.dim(); ++i) out(w, k, i) = x(w, std::max(k - 1, 0), i);
    return out;
}

Process multiply(const Process& x, const Process& y) {
    if (x.dim() != 1 || y.dim() != 1 || x.outcomes() != y.outcomes() || x.ticks() != y.ticks())
        throw Error(ErrorCode::DimensionMismatch, "pointwise product needs scalar processes of one shape");
    Process out(x.outcomes(), x.ticks(), 1);
    for (Outcome w = 0; w < x.outcomes(); ++w)
        for (int k = 0; k <= x.ticks(); ++k) out(w, k) = x(w, k) * y(w, k);
    return out;
}

Process constant_process(std::size_t outcomes, int ticks, const Rational& c) {
    Process out(outcomes, ticks, 1);
    for (Outcome w = 0; w < outcomes; ++w)
        for (int k = 0; k <= ticks; ++k) out(w, k) = c;
    return out;
}

}  // namespace enlarge
