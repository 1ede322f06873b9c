#pragma once

#include "enlarge/basis.hpp"

#include <vector>

namespace enlarge {

/// Children of one F_{k-} atom, labelled 0..d in order of their smallest outcome.
struct AtomSplit {
    std::size_t atom = 0;                // block index in F_{k-}
    std::vector<std::size_t> children;   // block indices in F_k; fewer than d+1 means padding
    Vec p;                               // P(child_h | atom), length d+1, zero on pads
};

/// The canonical martingale basis: dW_{h,k} = 2^{-k} (1_{A_{k,h}} - p_{k,h}).
struct RepresentationProcess {
    std::size_t d = 0;
    std::vector<std::vector<AtomSplit>> splits;  // splits[k][b] for k = 1..K; splits[0] is empty
    std::vector<std::vector<std::size_t>> label; // label[k][w] = h with w in A_{k,h}
    Process w;

    std::size_t dim() const noexcept { return d + 1; }
    const AtomSplit& split_of(const Filtration& filt, int k, Outcome w) const {
        return splits[static_cast<std::size_t>(k)][filt.pre(k).block_of(w)];
    }
};

/// Largest number of F_k children of any F_{k-} atom (1 when nothing ever splits).
std::size_t multiplicity(const Filtration& filt);

RepresentationProcess build_representation(const SampleSpace& space, const Filtration& filt);

/// Minimum-norm predictable H with X - X_0 = H^T . W. Scalar X only. Throws Error(NotAMartingale).
Process represent(const SampleSpace& space, const Filtration& filt, const RepresentationProcess& rep, const Process& x);

/// represent() applied to each component of a vector martingale.
std::vector<Process> represent_all(const SampleSpace& space, const Filtration& filt, const RepresentationProcess& rep,
                                   const Process& x);

}  // namespace enlarge
