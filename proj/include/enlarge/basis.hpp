#pragma once

#include "enlarge/error.hpp"
#include "enlarge/rational.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enlarge {

using Outcome = std::size_t;
using Block = std::vector<Outcome>;

/// Finite outcome set with exact probabilities. Invariants are checked by validate().
class SampleSpace {
public:
    SampleSpace() = default;
    SampleSpace(std::vector<std::string> labels, Vec prob);

    /// n equally likely outcomes labelled w1..wn.
    static SampleSpace uniform(std::size_t n);

    std::size_t size() const noexcept { return prob_.size(); }
    const Rational& prob(Outcome w) const { return prob_.at(w); }
    const Vec& probs() const noexcept { return prob_; }
    const std::string& label(Outcome w) const { return labels_.at(w); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<Outcome> index_of(std::string_view label) const;

    Rational mass(std::span<const Outcome> set) const;

private:
    std::vector<std::string> labels_;
    Vec prob_;
};

/// Atom partition of a finite sigma-algebra. Blocks are sorted internally and
/// ordered by their smallest outcome, so equal sigma-algebras compare equal.
class Partition {
public:
    Partition() = default;
    /// Throws Error(BadPartition) unless blocks are nonempty, disjoint and cover 0..n-1.
    Partition(std::vector<Block> blocks, std::size_t n);

    static Partition trivial(std::size_t n);
    static Partition discrete(std::size_t n);
    /// Level sets of a key function.
    template <typename Key>
    static Partition level_sets(const std::vector<Key>& key);

    std::size_t outcomes() const noexcept { return block_of_.size(); }
    std::size_t num_blocks() const noexcept { return blocks_.size(); }
    const Block& block(std::size_t b) const { return blocks_.at(b); }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    std::size_t block_of(Outcome w) const { return block_of_.at(w); }

    /// True when every block of *this lies inside a block of coarser.
    bool refines(const Partition& coarser) const;
    /// Common refinement (the partition of the generated sigma-algebra F v G).
    Partition meet(const Partition& other) const;
    bool is_measurable(std::span<const Rational> values) const;
    /// Blocks of *this contained in the given set.
    std::vector<std::size_t> blocks_inside(std::span<const Outcome> set) const;

    bool operator==(const Partition& rhs) const { return blocks_ == rhs.blocks_; }

private:
    std::vector<Block> blocks_;
    std::vector<std::size_t> block_of_;
};

template <typename Key>
Partition Partition::level_sets(const std::vector<Key>& key) {
    std::vector<Block> blocks;
    std::vector<Key> seen;
    for (Outcome w = 0; w < key.size(); ++w) {
        std::size_t b = 0;
        while (b < seen.size() && !(seen[b] == key[w])) ++b;
        if (b == seen.size()) {
            seen.push_back(key[w]);
            blocks.emplace_back();
        }
        blocks[b].push_back(w);
    }
    return Partition(std::move(blocks), key.size());
}

struct TickPartitions {
    Partition pre;  // F_{k-}
    Partition at;   // F_k

    bool operator==(const TickPartitions&) const = default;
};

/// F_0, then (F_{k-}, F_k) for k = 1..K. F_{0-} is F_0 by convention.
class Filtration {
public:
    Filtration() = default;
    Filtration(Partition initial, std::vector<TickPartitions> ticks);

    int ticks() const noexcept { return static_cast<int>(ticks_.size()); }
    std::size_t outcomes() const noexcept { return initial_.outcomes(); }
    const Partition& at(int k) const;
    const Partition& pre(int k) const;
    const Partition& initial() const noexcept { return initial_; }

    /// F_0, F_{1-}, F_1, ..., F_{K-}, F_K in order.
    std::vector<const Partition*> chain() const;

    bool operator==(const Filtration&) const = default;

private:
    Partition initial_;
    std::vector<TickPartitions> ticks_;
};

/// Outcome x tick array of rational vectors, ticks 0..K.
class Process {
public:
    Process() = default;
    Process(std::size_t outcomes, int ticks, std::size_t dim = 1);

    std::size_t outcomes() const noexcept { return outcomes_; }
    int ticks() const noexcept { return ticks_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    Rational& operator()(Outcome w, int k, std::size_t i = 0) { return data_[index(w, k, i)]; }
    const Rational& operator()(Outcome w, int k, std::size_t i = 0) const { return data_[index(w, k, i)]; }

    /// Delta_k X; zero at k = 0.
    Rational jump(Outcome w, int k, std::size_t i = 0) const;
    Vec jump_vector(Outcome w, int k) const;
    Vec value_vector(Outcome w, int k) const;
    /// Values over outcomes at tick k for component i.
    Vec slice(int k, std::size_t i = 0) const;
    Vec jump_slice(int k, std::size_t i = 0) const;

    Process component(std::size_t i) const;
    static Process stack(const std::vector<Process>& components);

    Process operator+(const Process& rhs) const;
    Process operator-(const Process& rhs) const;
    Process operator*(const Rational& s) const;

    bool operator==(const Process& rhs) const = default;

private:
    std::size_t index(Outcome w, int k, std::size_t i) const {
        return (w * static_cast<std::size_t>(ticks_ + 1) + static_cast<std::size_t>(k)) * dim_ + i;
    }
    void require_same_shape(const Process& rhs) const;

    std::size_t outcomes_ = 0;
    int ticks_ = 0;
    std::size_t dim_ = 0;
    std::vector<Rational> data_;
};

/// Random time with values in {0..K} or infinity; a stopping time once checked against a filtration.
class StoppingTime {
public:
    static constexpr int kInfinity = std::numeric_limits<int>::max();

    StoppingTime() = default;
    explicit StoppingTime(std::vector<int> values) : values_(std::move(values)) {}
    static StoppingTime constant(std::size_t outcomes, int k) { return StoppingTime(std::vector<int>(outcomes, k)); }
    static StoppingTime infinite(std::size_t outcomes) { return constant(outcomes, kInfinity); }

    std::size_t outcomes() const noexcept { return values_.size(); }
    int operator()(Outcome w) const { return values_.at(w); }
    const std::vector<int>& values() const noexcept { return values_; }
    bool is_finite(Outcome w) const { return values_.at(w) != kInfinity; }
    /// Tick k lies in the closed stochastic interval [0, T] at w.
    bool covers(Outcome w, int k) const { return k <= values_.at(w); }

    bool operator==(const StoppingTime&) const = default;

private:
    std::vector<int> values_;
};

struct Diagnostics {
    bool ok = true;
    std::optional<ErrorCode> code;
    std::optional<int> tick;
    std::string message;

    static Diagnostics failure(ErrorCode code, std::string message, std::optional<int> tick = std::nullopt) {
        return {false, code, tick, std::move(message)};
    }
};

/// Checks probabilities, label uniqueness, partition shapes and the refinement chain.
Diagnostics validate(const SampleSpace& space, const Filtration& filt);

/// Throws the first diagnostic as an Error.
void require_valid(const SampleSpace& space, const Filtration& filt);

/// E[xi | partition], exact; constant on each block.
Vec cond_expect(const SampleSpace& space, const Partition& partition, std::span<const Rational> xi);

bool is_stopping_time(const Filtration& filt, const StoppingTime& t);

enum class StoppingTimeClass { Predictable, AccessibleNotPredictable };

/// On a finite tick grid every stopping time is accessible: its graph is covered by the
/// deterministic predictable times 0..K. It is predictable iff {S = k} is F_{k-}-measurable
/// for every k. Throws Error(NotAStoppingTime).
StoppingTimeClass classify_stopping_time(const Filtration& filt, const StoppingTime& s);

}  // namespace enlarge
