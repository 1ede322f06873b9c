#include "enlarge/basis.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace enlarge {

SampleSpace::SampleSpace(std::vector<std::string> labels, Vec prob) : labels_(std::move(labels)), prob_(std::move(prob)) {
    if (labels_.size() != prob_.size()) throw Error(ErrorCode::DimensionMismatch, "labels and probabilities differ in length");
}

SampleSpace SampleSpace::uniform(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i + 1));
    return SampleSpace(std::move(labels), Vec(n, make_rational(1, static_cast<long>(n))));
}

std::optional<Outcome> SampleSpace::index_of(std::string_view label) const {
    for (Outcome w = 0; w < labels_.size(); ++w)
        if (labels_[w] == label) return w;
    return std::nullopt;
}

Rational SampleSpace::mass(std::span<const Outcome> set) const {
    Rational m(0);
    for (Outcome w : set) m += prob_.at(w);
    return m;
}

Partition::Partition(std::vector<Block> blocks, std::size_t n) : block_of_(n, n) {
    for (auto& b : blocks) {
        if (b.empty()) throw Error(ErrorCode::BadPartition, "empty block");
        std::sort(b.begin(), b.end());
    }
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (Outcome w : blocks[i]) {
            if (w >= n) throw Error(ErrorCode::BadPartition, "outcome index out of range");
            if (block_of_[w] != n) throw Error(ErrorCode::BadPartition, "blocks overlap");
            block_of_[w] = i;
        }
    }
    for (std::size_t w = 0; w < n; ++w)
        if (block_of_[w] == n) throw Error(ErrorCode::BadPartition, "blocks do not cover the sample space");
    blocks_ = std::move(blocks);
}

Partition Partition::trivial(std::size_t n) {
    Block all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return Partition({all}, n);
}

Partition Partition::discrete(std::size_t n) {
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < n; ++i) blocks.push_back({i});
    return Partition(std::move(blocks), n);
}

bool Partition::refines(const Partition& coarser) const {
    if (outcomes() != coarser.outcomes()) return false;
    for (const auto& b : blocks_) {
        const std::size_t target = coarser.block_of(b.front());
        for (Outcome w : b)
            if (coarser.block_of(w) != target) return false;
    }
    return true;
}

Partition Partition::meet(const Partition& other) const {
    if (outcomes() != other.outcomes()) throw Error(ErrorCode::DimensionMismatch, "partitions over different spaces");
    std::vector<std::pair<std::size_t, std::size_t>> key(outcomes());
    for (Outcome w = 0; w < outcomes(); ++w) key[w] = {block_of(w), other.block_of(w)};
    std::map<std::pair<std::size_t, std::size_t>, Block> cells;
    for (Outcome w = 0; w < outcomes(); ++w) cells[key[w]].push_back(w);
    std::vector<Block> blocks;
    for (auto& [k, b] : cells) blocks.push_back(std::move(b));
    return Partition(std::move(blocks), outcomes());
}

bool Partition::is_measurable(std::span<const Rational> values) const {
    if (values.size() != outcomes()) throw Error(ErrorCode::DimensionMismatch, "value vector length");
    for (const auto& b : blocks_)
        for (Outcome w : b)
            if (values[w] != values[b.front()]) return false;
    return true;
}

std::vector<std::size_t> Partition::blocks_inside(std::span<const Outcome> set) const {
    std::vector<char> in(outcomes(), 0);
    for (Outcome w : set) in.at(w) = 1;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (std::all_of(blocks_[i].begin(), blocks_[i].end(), [&](Outcome w) { return in[w] != 0; })) out.push_back(i);
    }
    return out;
}

Filtration::Filtration(Partition initial, std::vector<TickPartitions> ticks)
    : initial_(std::move(initial)), ticks_(std::move(ticks)) {
    for (const auto& t : ticks_) {
        if (t.pre.outcomes() != initial_.outcomes() || t.at.outcomes() != initial_.outcomes())
            throw Error(ErrorCode::DimensionMismatch, "filtration partitions over different spaces");
    }
}

const Partition& Filtration::at(int k) const {
    if (k == 0) return initial_;
    if (k < 0 || k > ticks()) throw Error(ErrorCode::DimensionMismatch, "tick out of range");
    return ticks_[static_cast<std::size_t>(k - 1)].at;
}

const Partition& Filtration::pre(int k) const {
    if (k == 0) return initial_;
    if (k < 0 || k > ticks()) throw Error(ErrorCode::DimensionMismatch, "tick out of range");
    return ticks_[static_cast<std::size_t>(k - 1)].pre;
}

std::vector<const Partition*> Filtration::chain() const {
    std::vector<const Partition*> out{&initial_};
    for (const auto& t : ticks_) {
        out.push_back(&t.pre);
        out.push_back(&t.at);
    }
    return out;
}

Process::Process(std::size_t outcomes, int ticks, std::size_t dim)
    : outcomes_(outcomes), ticks_(ticks), dim_(dim), data_(outcomes * static_cast<std::size_t>(ticks + 1) * dim) {}

Rational Process::jump(Outcome w, int k, std::size_t i) const {
    if (k == 0) return Rational(0);
    return (*this)(w, k, i) - (*this)(w, k - 1, i);
}

Vec Process::jump_vector(Outcome w, int k) const {
    Vec v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = jump(w, k, i);
    return v;
}

Vec Process::value_vector(Outcome w, int k) const {
    Vec v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[i] = (*this)(w, k, i);
    return v;
}

Vec Process::slice(int k, std::size_t i) const {
    Vec v(outcomes_);
    for (Outcome w = 0; w < outcomes_; ++w) v[w] = (*this)(w, k, i);
    return v;
}

Vec Process::jump_slice(int k, std::size_t i) const {
    Vec v(outcomes_);
    for (Outcome w = 0; w < outcomes_; ++w) v[w] = jump(w, k, i);
    return v;
}

Process Process::component(std::size_t i) const {
    if (i >= dim_) throw Error(ErrorCode::DimensionMismatch, "component index");
    Process out(outcomes_, ticks_, 1);
    for (Outcome w = 0; w < outcomes_; ++w)
        for (int k = 0; k <= ticks_; ++k) out(w, k) = (*this)(w, k, i);
    return out;
}

Process Process::stack(const std::vector<Process>& components) {
    if (components.empty()) return {};
    const Process& first = components.front();
    std::size_t dim = 0;
    for (const auto& c : components) {
        if (c.outcomes_ != first.outcomes_ || c.ticks_ != first.ticks_)
            throw Error(ErrorCode::DimensionMismatch, "stacking processes of different shapes");
        dim += c.dim_;
    }
    Process out(first.outcomes_, first.ticks_, dim);
    std::size_t offset = 0;
    for (const auto& c : components) {
        for (Outcome w = 0; w < c.outcomes_; ++w)
            for (int k = 0; k <= c.ticks_; ++k)
                for (std::size_t i = 0; i < c.dim_; ++i) out(w, k, offset + i) = c(w, k, i);
        offset += c.dim_;
    }
    return out;
}

void Process::require_same_shape(const Process& rhs) const {
    if (outcomes_ != rhs.outcomes_ || ticks_ != rhs.ticks_ || dim_ != rhs.dim_)
        throw Error(ErrorCode::DimensionMismatch, "process shapes differ");
}

Process Process::operator+(const Process& rhs) const {
    require_same_shape(rhs);
    Process out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Process Process::operator-(const Process& rhs) const {
    require_same_shape(rhs);
    Process out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Process Process::operator*(const Rational& s) const {
    Process out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
}

Diagnostics validate(const SampleSpace& space, const Filtration& filt) {
    const std::size_t n = space.size();
    if (n == 0) return Diagnostics::failure(ErrorCode::BadProbability, "empty sample space");
    Rational total(0);
    for (Outcome w = 0; w < n; ++w) {
        if (sgn(space.prob(w)) <= 0)
            return Diagnostics::failure(ErrorCode::BadProbability, "outcome " + space.label(w) + " has nonpositive probability");
        total += space.prob(w);
    }
    if (total != 1) return Diagnostics::failure(ErrorCode::BadProbability, "probabilities sum to " + to_string(total));
    std::set<std::string> seen(space.labels().begin(), space.labels().end());
    if (seen.size() != n) return Diagnostics::failure(ErrorCode::BadProbability, "outcome labels are not unique");
    if (filt.ticks() < 1) return Diagnostics::failure(ErrorCode::BadPartition, "filtration needs at least one tick");
    if (filt.outcomes() != n) return Diagnostics::failure(ErrorCode::DimensionMismatch, "filtration and space sizes differ");
    for (int k = 1; k <= filt.ticks(); ++k) {
        if (!filt.pre(k).refines(filt.at(k - 1)) || !filt.at(k).refines(filt.pre(k)))
            return Diagnostics::failure(ErrorCode::RefinementBroken, "refinement broken at tick " + std::to_string(k), k);
    }
    return {};
}

void require_valid(const SampleSpace& space, const Filtration& filt) {
    const Diagnostics d = validate(space, filt);
    if (!d.ok) throw Error(*d.code, d.message);
}

Vec cond_expect(const SampleSpace& space, const Partition& partition, std::span<const Rational> xi) {
    if (xi.size() != space.size() || partition.outcomes() != space.size())
        throw Error(ErrorCode::DimensionMismatch, "conditional expectation operands");
    Vec out(xi.size());
    for (const auto& b : partition.blocks()) {
        Rational num(0);
        Rational den(0);
        for (Outcome w : b) {
            num += space.prob(w) * xi[w];
            den += space.prob(w);
        }
        const Rational avg = num / den;
        for (Outcome w : b) out[w] = avg;
    }
    return out;
}

namespace {

// {t <= k} must be a union of F_k atoms.
bool level_measurable(const Partition& p, const StoppingTime& t, int k, bool equality) {
    for (const auto& b : p.blocks()) {
        auto hit = [&](Outcome w) { return equality ? t(w) == k : t(w) <= k; };
        const bool first = hit(b.front());
        for (Outcome w : b)
            if (hit(w) != first) return false;
    }
    return true;
}

}  // namespace

bool is_stopping_time(const Filtration& filt, const StoppingTime& t) {
    if (t.outcomes() != filt.outcomes()) return false;
    for (Outcome w = 0; w < t.outcomes(); ++w) {
        if (t(w) < 0 || (t(w) > filt.ticks() && t(w) != StoppingTime::kInfinity)) return false;
    }
    for (int k = 0; k <= filt.ticks(); ++k)
        if (!level_measurable(filt.at(k), t, k, false)) return false;
    return true;
}

StoppingTimeClass classify_stopping_time(const Filtration& filt, const StoppingTime& s) {
    if (!is_stopping_time(filt, s)) throw Error(ErrorCode::NotAStoppingTime, "random time is not a stopping time");
    for (int k = 0; k <= filt.ticks(); ++k)
        if (!level_measurable(filt.pre(k), s, k, true)) return StoppingTimeClass::AccessibleNotPredictable;
    return StoppingTimeClass::Predictable;
}

}  // namespace enlarge
