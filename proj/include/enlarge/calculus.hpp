#pragma once

#include "enlarge/basis.hpp"

namespace enlarge {

/// X = X_0 + martingale_part + drift_part, with drift_part predictable and both parts zero at 0.
struct Decomposition {
    Process martingale_part;
    Process drift_part;
};

/// X_k is F_k-measurable for every k.
bool is_adapted(const Filtration& filt, const Process& x);
/// X_k is F_{k-}-measurable for every k.
bool is_predictable(const Filtration& filt, const Process& x);

/// E[dX_k | F_{k-}] = 0 for all k >= 1, componentwise. Throws Error(NotAdapted).
bool is_martingale(const SampleSpace& space, const Filtration& filt, const Process& x);

/// Predictable dual projection: increments E[dA_k | F_{k-}], zero at 0. Throws Error(NotAdapted).
Process compensator(const SampleSpace& space, const Filtration& filt, const Process& a);

Decomposition canonical_decomposition(const SampleSpace& space, const Filtration& filt, const Process& x);

/// [X,Y]_k = sum_{j<=k} dX_j dY_j^T, flattened row-major into dim(X)*dim(Y) components.
Process bracket(const Process& x, const Process& y);

/// (H.X)_k = sum_{j<=k} H_j^T dX_j with no predictability check. dim(H) == dim(X), result is scalar.
Process integrate(const Process& h, const Process& x);

/// Same as integrate() but rejects an integrand that is not F-predictable (Error(NotPredictable)).
Process stoch_integral(const Filtration& filt, const Process& h, const Process& x);

/// Product of (1 + dX_j) over j <= k for a scalar X.
Process doleans_exp(const Process& x);

/// Frozen copy X_{min(k, T)}.
Process stop(const Process& x, const StoppingTime& t);
/// As above, rejecting T that is not a stopping time of filt (Error(NotAStoppingTime)).
Process stop(const Filtration& filt, const Process& x, const StoppingTime& t);

/// (lag X)_k = X_{k-1}, (lag X)_0 = X_0; the left-limit process X_-.
Process lag(const Process& x);

/// Pointwise product of two scalar processes.
Process multiply(const Process& x, const Process& y);

/// The constant process equal to c.
Process constant_process(std::size_t outcomes, int ticks, const Rational& c);

}  // namespace enlarge
