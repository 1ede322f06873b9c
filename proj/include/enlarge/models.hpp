#pragma once

#include "enlarge/basis.hpp"
#include "enlarge/enlargement.hpp"
#include "enlarge/event_kernels.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace enlarge {

/// Seeded source of integers. Uses its own rejection sampling so streams are identical on every
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    bool chance(std::int64_t num, std::int64_t den) { return uniform(1, den) <= num; }
    /// Uniform on {num/den : lo <= num <= hi}.
    Rational rational(std::int64_t lo, std::int64_t hi, std::int64_t den) { return make_rational(uniform(lo, hi), den); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

enum class EnlargementKind { Random, Initial, Progressive };

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::size_t min_outcomes = 4;
    std::size_t max_outcomes = 10;
    int min_ticks = 1;
    int max_ticks = 3;
    std::size_t max_children = 3;
    EnlargementKind kind = EnlargementKind::Random;
    bool force_condition_failure = false;
    bool random_horizon = true;
};

/// Throws Error(SchemaError) on empty ranges or max_children < 2.
void check_config(const GeneratorConfig& cfg);

/// Random positive probabilities with small denominators.
SampleSpace random_space(Rng& rng, std::size_t n);
/// Random refining chain F_0, F_{1-}, F_1, ... with at most max_children children per split.
Filtration random_filtration(Rng& rng, std::size_t n, int ticks, std::size_t max_children);

/// Random F and G. G overlays random partitions on F at every level and is closed forward so it
/// refines in time. With force_condition_failure a live G_{k-} atom is cut along an F_k child, which
/// breaks the support condition by construction (checked before returning).
EnlargedBasis gen_random_instance(const GeneratorConfig& cfg);

/// Uniform 6-point basis with F_1 = {A, B}, G_{1-} = {C1, C2}, horizon infinite.
EnlargedBasis six_point_instance();
/// The scalar F-martingale with dX_1 = 1_A - 1/2 on the 6-point basis.
Process six_point_martingale();
/// Uniform 4-point basis where {w4} misses the child {w1, w2}.
EnlargedBasis four_point_instance();
/// Filtration of a binary tree of depth K over 2^K uniform outcomes, with F_{k-} = F_{k-1}.
EnlargedBasis binary_tree_instance(int ticks);

// ---- initial enlargement ---------------------------------------------------

struct InitialEnlargement {
    EnlargedBasis eb;
    std::vector<int> xi;
    std::vector<int> values;           // range of xi, ascending
    std::vector<std::vector<Vec>> q;   // q[x][k][w] = P(xi = x | F_k) / P(xi = x)
    std::vector<std::vector<Vec>> q_left;  // same with F_{k-}
};

/// G_k = F_k v sigma(xi) and G_{k-} = F_{k-} v sigma(xi), with the density table of xi.
InitialEnlargement gen_initial_enlargement(const SampleSpace& space, const Filtration& f, const std::vector<int>& xi);

struct CrossCheck {
    bool holds = true;
    std::optional<Locator> first_failure;
    std::string detail;
};

/// Gamma(W'') against E[dX dq^xi | F_{k-}] / q^xi_{k-}, and the jump identities
/// phi^T dN = dq / q_- and phi^T dN / (1 + phi^T dN) = dq / q. Throws Error(JacodDegenerate)
/// when some q^x_{k-} vanishes on an F_{k-} atom.
CrossCheck jacod_phi_crosscheck(const InitialEnlargement& ie);

/// Random base basis lifted to a product with a tag xi; some (outcome, tag) pairs are dropped
/// while every tag value stays present in every F_{K-} atom.
InitialEnlargement gen_jacod_instance(Rng& rng);

// ---- progressive enlargement -----------------------------------------------

struct ProgressiveEnlargement {
    EnlargedBasis eb;
    StoppingTime tau;
    std::vector<Vec> z;        // z[k] = P(tau > k | F_k), the Azema supermartingale
    std::vector<Vec> z_tilde;  // P(tau >= k | F_k)
    std::vector<Vec> z_left;   // P(tau >= k | F_{k-})
};

/// G_k = F_k v sigma(tau on {tau <= k}), G_{k-} = F_{k-} v sigma(tau on {tau <= k-1}), horizon tau.
/// Throws Error(NotARandomTime) for values outside {0..K} and infinity.
ProgressiveEnlargement gen_progressive_enlargement(const SampleSpace& space, const Filtration& f,
                                                   const StoppingTime& tau);

/// Gamma(W'') on [0, tau] against E[dX dm | F_{k-}] / Z_{k-} with dm = P(tau >= k | F_k) - Z_{k-},
/// and the ratio identity phi^T dN / (1 + phi^T dN) = dm / P(tau >= k | F_k). Throws
/// Error(AzemaDegenerate) when P(tau >= 1) = 0.
CrossCheck azema_phi_crosscheck(const ProgressiveEnlargement& pe);

ProgressiveEnlargement gen_azema_instance(Rng& rng);

// ---- random processes --------------------------------------------------------

/// F-martingale with small rational jumps and X_0 = 0.
Process random_martingale(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t dim = 1);

/// F-martingale with D_0 = 0 and every jump strictly below 1.
Process random_connector(Rng& rng, const SampleSpace& space, const Filtration& f);

/// Adapted asset S = S_0 + martingale + predictable drift. Drifts are sometimes large enough to
/// make the asset non-viable.
Process random_asset(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t dim);

/// Strictly positive F-viable assets: E(W''_h) for every h, then tilted exponentials
/// s_0 E(X + theta [X, X]^{F.p}) kept only when they admit an F-connector.
std::vector<Process> viable_asset_family(Rng& rng, const SampleSpace& space, const Filtration& f, std::size_t count);

// ---- event data --------------------------------------------------------------

/// Random valid predictable-jump data. With allow_null_branch one branch may get pbar_h = 0.
AccessibleEventData gen_accessible_event(Rng& rng, bool allow_null_branch = false);

/// Random valid totally-inaccessible-jump data. R is sometimes shifted orthogonally to phi.
InaccessibleEventData gen_inaccessible_event(Rng& rng);

}  // namespace enlarge
