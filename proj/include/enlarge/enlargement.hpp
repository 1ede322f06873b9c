#pragma once

#include "enlarge/basis.hpp"
#include "enlarge/representation.hpp"

#include <optional>

namespace enlarge {

/// A filtration G containing F on a shared space, studied on [0, horizon].
struct EnlargedBasis {
    SampleSpace space;
    Filtration f;
    Filtration g;
    StoppingTime horizon;

    /// k lies in [0, horizon] at w. Constant on G_{k-} atoms because horizon is a G stopping time.
    bool alive(Outcome w, int k) const { return horizon.covers(w, k); }
};

/// F and G valid, G_k refines F_k and G_{k-} refines F_{k-}, horizon a G stopping time.
Diagnostics validate(const EnlargedBasis& eb);

/// Gamma(X): increments E[dX_k | G_{k-}] on k <= horizon. Throws Error(NotFMartingale).
Process drift_operator(const EnlargedBasis& eb, const Process& x);

/// Martingale factor N and G-predictable multiplier phi with Gamma(X) = phi^T . [N,X]^{F.p}.
struct DriftFactors {
    Process n;
    Process phi;

    bool empty() const noexcept { return n.dim() == 0; }
};

/// phi^T . [N,X]^{F.p} restricted to [0, horizon], componentwise in X.
Process factor_drift(const EnlargedBasis& eb, const DriftFactors& factors, const Process& x);

/// N := W''; phi per (tick, G_{k-} atom) is the minimum-norm solution of
/// E[dW dW^T | F_{k-}] phi = E[dW | G_{k-}]. Throws Error(Unsolvable) if the result fails to reproduce Gamma(W'').
DriftFactors solve_factors(const EnlargedBasis& eb, const RepresentationProcess& rep);

struct Locator {
    int tick = 0;
    Outcome outcome = 0;
};

struct IdentityCheck {
    bool holds = true;
    std::optional<Locator> first_failure;
};

/// A^{G.p} = A^{F.p} + phi^T . [N,A]^{F.p} on [0, horizon]. Throws Error(FactorsMissing).
IdentityCheck compensator_transfer_check(const EnlargedBasis& eb, const DriftFactors& factors, const Process& a);

/// First (k, C, A) with C a live G_{k-} atom and A an F_k child of the F_{k-} atom around C that misses C.
struct SupportWitness {
    int tick = 0;
    std::size_t g_atom = 0;   // block index in G_{k-}
    std::size_t f_child = 0;  // block index in F_k
    Block c;
    Block a;
};

struct SupportCheck {
    bool holds = true;
    std::optional<SupportWitness> witness;
};

/// Every F_k child of every F_{k-} atom keeps positive G_{k-}-conditional probability on [0, horizon].
SupportCheck check_condition_support(const EnlargedBasis& eb);

/// {E[xi|G_{k-}] > 0, k <= T} == {E[xi|F_{k-}] > 0, k <= T} for one nonnegative F_k-measurable xi.
bool support_sets_agree(const EnlargedBasis& eb, int k, const Vec& xi);

struct PositivityCheck {
    bool holds = true;
    std::optional<Locator> first_failure;
};

/// 1 + phi^T dN > 0 at every (w, k <= horizon). Throws Error(FactorsMissing).
PositivityCheck check_positivity(const EnlargedBasis& eb, const DriftFactors& factors);

/// 1 + phi_k^T dN_k at (w, k).
Rational density_factor(const DriftFactors& factors, Outcome w, int k);

}  // namespace enlarge
