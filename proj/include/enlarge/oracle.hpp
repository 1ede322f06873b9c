#pragma once

// Brute-force deflator search used to cross-check the structural results. It depends only on the
// basis types and carries its own simplex, so it shares no code path with the connector machinery.

#include "enlarge/basis.hpp"
#include "enlarge/linalg.hpp"

#include <optional>
#include <vector>

namespace enlarge::oracle {

/// One unknown Z_k(c) per tick k and F_k atom c.
struct Node {
    int tick = 0;
    std::size_t atom = 0;
};

/// Linear system A z = b whose strictly positive solutions are exactly the deflators of S on the horizon.
struct DeflatorSystem {
    Matrix a;
    Vec b;
    std::vector<Node> nodes;
};

DeflatorSystem build_deflator_system(const SampleSpace& space, const Filtration& filt, const Process& s,
                                     const StoppingTime& horizon);

struct OracleResult {
    bool feasible = false;
    std::optional<Process> deflator;  // Z with Z_0 = 1 when feasible
    Vec certificate;                  // y with A^T y >= 0, b^T y <= 0, 1^T A^T y - b^T y = 1 otherwise
};

/// Decides whether some Z > 0 with Z_0 = 1 makes Z and Z S martingales on the horizon.
/// Runs a gap maximization and, when the gap is zero, the alternative system for a certificate.
OracleResult lp_deflator_oracle(const SampleSpace& space, const Filtration& filt, const Process& s,
                                const StoppingTime& horizon);

/// Rebuilds the system and checks the alternative inequalities for y with plain arithmetic.
bool verify_certificate(const SampleSpace& space, const Filtration& filt, const Process& s, const StoppingTime& horizon,
                        const Vec& certificate);

/// Direct check of Z > 0, Z_0 = 1 and the martingale equations of Z and Z S on every live atom.
bool check_deflator(const SampleSpace& space, const Filtration& filt, const Process& s, const StoppingTime& horizon,
                    const Process& z);

}  // namespace enlarge::oracle
