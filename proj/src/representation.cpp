#include "enlarge/representation.hpp"

#include "enlarge/calculus.hpp"
#include "enlarge/linalg.hpp"

#include <algorithm>

namespace enlarge {

namespace {

std::vector<std::size_t> children_of(const Filtration& filt, int k, std::size_t atom) {
    // Blocks are ordered by smallest outcome, so this list is already in label order.
    return filt.at(k).blocks_inside(filt.pre(k).block(atom));
}

}  // namespace

std::size_t multiplicity(const Filtration& filt) {
    std::size_t most = 1;
    for (int k = 1; k <= filt.ticks(); ++k)
        for (std::size_t b = 0; b < filt.pre(k).num_blocks(); ++b) most = std::max(most, children_of(filt, k, b).size());
    return most;
}

RepresentationProcess build_representation(const SampleSpace& space, const Filtration& filt) {
    require_valid(space, filt);
    RepresentationProcess rep;
    rep.d = multiplicity(filt) - 1;
    const std::size_t dim = rep.dim();
    const int K = filt.ticks();
    rep.splits.resize(static_cast<std::size_t>(K) + 1);
    rep.label.assign(static_cast<std::size_t>(K) + 1, std::vector<std::size_t>(space.size(), 0));
    rep.w = Process(space.size(), K, dim);

    for (int k = 1; k <= K; ++k) {
        const Partition& pre = filt.pre(k);
        const Partition& at = filt.at(k);
        const Rational weight = pow2_inverse(k);
        auto& level = rep.splits[static_cast<std::size_t>(k)];
        for (std::size_t b = 0; b < pre.num_blocks(); ++b) {
            AtomSplit s;
            s.atom = b;
            s.children = children_of(filt, k, b);
            s.p.assign(dim, Rational(0));
            const Rational pb = space.mass(pre.block(b));
            for (std::size_t h = 0; h < s.children.size(); ++h) {
                s.p[h] = space.mass(at.block(s.children[h])) / pb;
                for (Outcome w : at.block(s.children[h])) rep.label[static_cast<std::size_t>(k)][w] = h;
            }
            level.push_back(std::move(s));
        }
        for (Outcome w = 0; w < space.size(); ++w) {
            const AtomSplit& s = level[pre.block_of(w)];
            const std::size_t h = rep.label[static_cast<std::size_t>(k)][w];
            for (std::size_t j = 0; j < dim; ++j) {
                const Rational jump = weight * ((j == h ? Rational(1) : Rational(0)) - s.p[j]);
                rep.w(w, k, j) = rep.w(w, k - 1, j) + jump;
            }
        }
    }
    return rep;
}

Process represent(const SampleSpace& space, const Filtration& filt, const RepresentationProcess& rep, const Process& x) {
    if (x.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "represent() takes a scalar martingale");
    if (!is_martingale(space, filt, x)) throw Error(ErrorCode::NotAMartingale, "only martingales have a representation");
    const std::size_t dim = rep.dim();
    Process h(space.size(), filt.ticks(), dim);
    for (int k = 1; k <= filt.ticks(); ++k) {
        const Partition& at = filt.at(k);
        for (const AtomSplit& s : rep.splits[static_cast<std::size_t>(k)]) {
            // One equation per child: H^T dW(child) = dX(child).
            Matrix a(s.children.size(), dim);
            Vec rhs(s.children.size());
            for (std::size_t c = 0; c < s.children.size(); ++c) {
                const Outcome w = at.block(s.children[c]).front();
                for (std::size_t j = 0; j < dim; ++j) a(c, j) = rep.w.jump(w, k, j);
                rhs[c] = x.jump(w, k);
            }
            const auto sol = min_norm_solution(a, rhs);
            if (!sol) throw Error(ErrorCode::NotAMartingale, "representation system inconsistent at tick " + std::to_string(k));
            for (Outcome w : filt.pre(k).block(s.atom))
                for (std::size_t j = 0; j < dim; ++j) h(w, k, j) = (*sol)[j];
        }
    }
    return h;
}

std::vector<Process> represent_all(const SampleSpace& space, const Filtration& filt, const RepresentationProcess& rep,
                                   const Process& x) {
    std::vector<Process> out;
    for (std::size_t i = 0; i < x.dim(); ++i) out.push_back(represent(space, filt, rep, x.component(i)));
    return out;
}

}  // namespace enlarge
