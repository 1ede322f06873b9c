#pragma once

#include "enlarge/basis.hpp"
#include "enlarge/enlargement.hpp"
#include "enlarge/representation.hpp"

#include <optional>

namespace enlarge {

/// Where a connector search ran out of room: tick and F_{k-} atom.
struct InfeasibleAtom {
    int tick = 0;
    std::size_t atom = 0;
    Block outcomes;
};

/// Either a structure connector D (scalar martingale, D_0 = 0, dD < 1) or the atom that blocks one.
struct ConnectorResult {
    std::optional<Process> connector;
    std::optional<InfeasibleAtom> infeasible;

    bool feasible() const noexcept { return connector.has_value(); }
};

/// Per (tick, live F_{k-} atom) finds dD with E[dD | F_{k-}] = 0, E[dS^m dD | F_{k-}] = dS^v and dD < 1.
/// The probability-weighted least-norm candidate is tried first, then an exact simplex that maximizes
/// the gap 1 - max dD. S is stopped at the horizon, which must be a stopping time of filt.
ConnectorResult find_structure_connector(const SampleSpace& space, const Filtration& filt, const Process& s,
                                         const StoppingTime& horizon);

/// D martingale, D_0 = 0, dD < 1 and S^v = [S^m, D]^{p} on the horizon.
bool is_structure_connector(const SampleSpace& space, const Filtration& filt, const Process& s, const Process& d,
                            const StoppingTime& horizon);

/// E(-D) for a valid connector candidate. Throws Error(ConnectorInvalid) unless D is a martingale
/// starting at 0 with dD < 1.
Process deflator_from_connector(const SampleSpace& space, const Filtration& filt, const Process& d);

/// Z > 0, Z_0 = 1, and Z^T, (Z S_i)^T martingales for every component of S.
bool is_deflator(const SampleSpace& space, const Filtration& filt, const Process& z, const Process& s,
                 const StoppingTime& horizon);

/// W~ = W'' - Gamma(W'').
Process compensated_basis(const EnlargedBasis& eb, const RepresentationProcess& rep);

/// G-predictable K'' with K''^T dW~ = (dD + phi^T dN) / (1 + phi^T dN) on [0, horizon].
/// Per (tick, G_{k-} atom): K = pinv(E[dW~ dW~^T | G_{k-}]) E[dW dW^T | F_{k-}] (J + zeta^T phi),
/// with J and zeta the representation coefficients of D and N. Throws Error(SupportConditionFailed).
Process solve_accessible_K(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                           const Process& d);

/// K^T dW~ against (dD + phi^T dN) / (1 + phi^T dN) at every tick and outcome on the horizon.
IdentityCheck jump_identity_check(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                                  const Process& k, const Process& d);

struct GConnector {
    Process k;  // K''
    Process y;  // Y = K''^T . W~, a structure connector in G
};

/// Lifts an F-connector D of S to the G-connector Y and verifies dY < 1 and
/// [Y, M~]^{G.p} = [D, M]^{F.p} + phi^T . [N, M]^{F.p} for M = S^m. Throws Error(SupportConditionFailed),
/// or Error(ConnectorInvalid) if the lifted process fails its own checks.
GConnector g_connector(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                       const Process& s, const Process& d);

struct ViabilityWitness {
    Vec weights;              // coefficients on the components of W''
    Process asset;            // the F-martingale sum of weights_h W''_h
    SupportWitness location;  // where the support condition breaks
    Vec certificate;          // oracle infeasibility certificate for the asset in G
};

struct ViabilityReport {
    bool verdict = false;
    bool condition_support = false;
    bool positivity = false;
    std::optional<Process> connector;  // Y_0 in G, lifted from D = 0
    std::optional<Process> deflator;   // E(-Y_0)
    std::optional<ViabilityWitness> witness;
    DriftFactors factors;
};

/// Full viability on [0, horizon]. The drift multiplier always exists on a finite basis and both
/// integrability requirements hold automatically, so the verdict is the support condition. A true
/// verdict carries the common deflator; a false one carries an asset the oracle cannot deflate in G.
ViabilityReport full_viability_verdict(const EnlargedBasis& eb);

}  // namespace enlarge
