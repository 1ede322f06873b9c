#include "enlarge/event_kernels.hpp"

#include "enlarge/enlargement.hpp"
#include "enlarge/error.hpp"
#include "enlarge/linalg.hpp"
#include "enlarge/representation.hpp"
#include "enlarge/viability.hpp"

#include <algorithm>
#include <cmath>

namespace enlarge {

namespace {

[[noreturn]] void broken(const std::string& what) { throw Error(ErrorCode::DataInvariantViolated, what); }

void require_law(const Vec& v, const char* name) {
    Rational total(0);
    for (const Rational& x : v) {
        if (sgn(x) < 0) broken(std::string(name) + " has a negative entry");
        total += x;
    }
    if (total != 1) broken(std::string(name) + " does not sum to 1");
}

void require_rows(const std::vector<Vec>& rows, std::size_t count, std::size_t width, const char* name) {
    if (rows.size() != count) throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has the wrong number of rows");
    for (const Vec& r : rows)
        if (r.size() != width) throw Error(ErrorCode::DimensionMismatch, std::string(name) + " row width differs from phi");
}

}  // namespace

void validate(const AccessibleEventData& data) {
    const std::size_t m = data.p.size();
    if (m == 0 || data.pbar.size() != m || data.d_vals.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "p, pbar and d must have one entry per branch");
    require_rows(data.n_vals, m, data.phi.size(), "n");
    if (sgn(data.weight) <= 0) broken("weight must be positive");
    require_law(data.p, "p");
    require_law(data.pbar, "pbar");
    Rational mean_d(0);
    Vec mean_n(data.phi.size());
    for (std::size_t h = 0; h < m; ++h) {
        if ((1 + dot(data.phi, data.n_vals[h])) * data.p[h] != data.pbar[h])
            broken("(1 + phi^T n_h) p_h differs from pbar_h at branch " + std::to_string(h));
        if (sgn(data.p[h]) > 0 && data.d_vals[h] >= 1) broken("d_h >= 1 on a charged branch " + std::to_string(h));
        mean_d += data.p[h] * data.d_vals[h];
        mean_n = mean_n + data.p[h] * data.n_vals[h];
    }
    if (sgn(mean_d) != 0) broken("d does not average to zero under p");
    for (const Rational& x : mean_n)
        if (sgn(x) != 0) broken("n does not average to zero under p");
}

void validate(const InaccessibleEventData& data) {
    const std::size_t m = data.q.size();
    const std::size_t nd = data.phi.size();
    if (m == 0 || data.qbar.size() != m || data.alpha.size() != m || data.j3.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "q, qbar, alpha and J''' must have one entry per branch");
    if (data.r.size() != nd) throw Error(ErrorCode::DimensionMismatch, "R must match phi");
    require_rows(data.l_vals, m, nd, "l");
    require_rows(data.zeta3, m, nd, "zeta'''");
    require_law(data.q, "q");
    require_law(data.qbar, "qbar");
    const Rational tilt = 1 + dot(data.phi, data.r);
    if (sgn(tilt) <= 0) broken("1 + phi^T R must be positive");
    for (std::size_t h = 0; h < m; ++h) {
        for (std::size_t i = 0; i < nd; ++i)
            if (data.l_vals[h][i] != data.zeta3[h][i] * data.alpha[h])
                broken("l_h differs from zeta'''_h alpha_h at branch " + std::to_string(h));
        if ((1 + dot(data.phi, data.l_vals[h])) * data.q[h] != tilt * data.qbar[h])
            broken("(1 + phi^T l_h) q_h differs from (1 + phi^T R) qbar_h at branch " + std::to_string(h));
    }
}

Vec k_prime(const Vec& j1, const std::vector<Vec>& zeta1, const Vec& phi) {
    require_rows(zeta1, j1.size(), phi.size(), "zeta'");
    Vec out(j1.size());
    for (std::size_t h = 0; h < j1.size(); ++h) out[h] = j1[h] + dot(phi, zeta1[h]);
    return out;
}

Rational k_triple_prime(const InaccessibleEventData& data, std::size_t h) {
    validate(data);
    if (h >= data.q.size()) throw Error(ErrorCode::DimensionMismatch, "branch index out of range");
    const Rational tilt = dot(data.phi, data.zeta3[h]);
    const Rational denom = 1 + tilt * data.alpha[h];
    if (sgn(denom) == 0) return Rational(0);
    return (data.j3[h] + tilt) / denom;
}

Rational accessible_jump_value(const AccessibleEventData& data, std::size_t h) {
    validate(data);
    if (h >= data.p.size()) throw Error(ErrorCode::DimensionMismatch, "branch index out of range");
    if (sgn(data.p[h]) == 0 || sgn(data.pbar[h]) == 0)
        throw Error(ErrorCode::ZeroProbabilityBranch, "branch " + std::to_string(h) + " is null under F or G");
    const Rational tilt = dot(data.phi, data.n_vals[h]);
    return (data.d_vals[h] + tilt) / (1 + tilt);
}

JumpSeriesCheck accessible_series_check(const AccessibleEventData& data) {
    validate(data);
    const std::size_t m = data.p.size();

    // Scale of the observed atom C inside the predictable atom: small enough that the rest of the
    // mass (the complementary atom) stays positive on every charged branch.
    Rational lambda(1, 2);
    for (std::size_t h = 0; h < m; ++h) {
        if (sgn(data.p[h]) == 0) continue;
        if (sgn(data.pbar[h]) == 0)
            throw Error(ErrorCode::ZeroProbabilityBranch, "branch " + std::to_string(h) + " is null under G");
        lambda = std::min(lambda, Rational(data.p[h] / data.pbar[h] / 2));
    }

    Vec prob;
    std::vector<std::size_t> branch;
    Block in_c;
    Block outside;
    for (std::size_t h = 0; h < m; ++h) {
        if (sgn(data.p[h]) == 0) continue;
        in_c.push_back(prob.size());
        prob.push_back(lambda * data.pbar[h]);
        branch.push_back(h);
        outside.push_back(prob.size());
        prob.push_back(data.p[h] - lambda * data.pbar[h]);
        branch.push_back(h);
    }
    const std::size_t n = prob.size();
    std::vector<std::string> labels;
    for (std::size_t w = 0; w < n; ++w) labels.push_back("b" + std::to_string(branch[w]) + (w % 2 == 0 ? "c" : "o"));
    const SampleSpace space(labels, prob);
    const Partition trivial = Partition::trivial(n);
    const Partition children = Partition::level_sets(branch);
    const Partition observed({in_c, outside}, n);
    EnlargedBasis eb{space, Filtration(trivial, {{trivial, children}}),
                     Filtration(observed, {{observed, children.meet(observed)}}), StoppingTime::infinite(n)};

    Process d(n, 1, 1);
    for (Outcome w = 0; w < n; ++w) d(w, 1) = data.d_vals[branch[w]];
    const RepresentationProcess rep = build_representation(space, eb.f);
    const DriftFactors factors = solve_factors(eb, rep);
    const Process k = solve_accessible_K(eb, factors, rep, d);
    const Process wt = compensated_basis(eb, rep);

    JumpSeriesCheck out;
    for (Outcome w : in_c) {
        const Rational v = dot(k.value_vector(w, 1), wt.jump_vector(w, 1));
        out.kernel_side += data.pbar[branch[w]] * v * v;
    }
    for (std::size_t h = 0; h < m; ++h) {
        if (sgn(data.p[h]) == 0) continue;
        const Rational v = accessible_jump_value(data, h);
        out.closed_form += data.pbar[h] * v * v;
    }
    out.holds = out.kernel_side == out.closed_form;
    return out;
}

std::string to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Finite: return "finite";
        case SeriesVerdict::Divergent: return "divergent";
        case SeriesVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

SeriesVerdict classify_table(const std::vector<double>& table, const SeriesThresholds& thresholds) {
    const std::size_t need = static_cast<std::size_t>(thresholds.refinements) + 1;
    if (table.size() >= need) {
        bool grows = true;
        for (std::size_t i = table.size() - need; i + 1 < table.size(); ++i)
            grows = grows && table[i] > 0 && table[i + 1] >= thresholds.growth * table[i];
        if (grows) return SeriesVerdict::Divergent;
    }
    if (table.size() >= 2) {
        const double last = table.back();
        const double prev = table[table.size() - 2];
        if (std::isfinite(last) && std::abs(last - prev) <= thresholds.tolerance * std::abs(last)) return SeriesVerdict::Finite;
        if (last == 0 && prev == 0) return SeriesVerdict::Finite;
    }
    return SeriesVerdict::Inconclusive;
}

SeriesReport series_diagnostics(const SeriesInput& input, const SeriesThresholds& thresholds) {
    if (!(input.t_end > 0) || !std::isfinite(input.t_end)) throw Error(ErrorCode::BadGrid, "t_end must be positive");
    if (input.levels.empty() && input.jumps.empty()) throw Error(ErrorCode::BadGrid, "no samples and no jumps");
    if (input.first_level < 0 || input.first_level + static_cast<int>(input.levels.size()) > 30)
        throw Error(ErrorCode::BadGrid, "level range out of bounds");
    SeriesReport report;
    for (std::size_t j = 0; j < input.levels.size(); ++j) {
        const std::size_t panels = std::size_t{1} << (static_cast<std::size_t>(input.first_level) + j);
        const std::vector<double>& s = input.levels[j];
        if (s.size() != panels + 1)
            throw Error(ErrorCode::BadGrid, "level " + std::to_string(j) + " needs " + std::to_string(panels + 1) + " samples");
        const double width = input.t_end / static_cast<double>(panels);
        double total = 0;
        for (std::size_t i = 0; i < panels; ++i)
            if (std::isfinite(s[i]) && std::isfinite(s[i + 1])) total += width * (s[i] + s[i + 1]) / 2;
        report.integral_table.push_back(total);
    }
    double partial = 0;
    for (std::size_t j = 0; j < input.jumps.size(); ++j) {
        const double x = input.jumps[j];
        if (!std::isfinite(x) || x == -1) throw Error(ErrorCode::BadGrid, "jump " + std::to_string(j) + " makes 1 + x vanish");
        partial += (x / (1 + x)) * (x / (1 + x));
        const std::size_t count = j + 1;
        if ((count & (count - 1)) == 0) report.jump_table.push_back(partial);
    }
    if (!report.integral_table.empty()) report.integral_verdict = classify_table(report.integral_table, thresholds);
    if (!report.jump_table.empty()) report.jump_verdict = classify_table(report.jump_table, thresholds);

    const bool any_divergent = report.integral_verdict == SeriesVerdict::Divergent ||
                               report.jump_verdict == SeriesVerdict::Divergent;
    const bool all_finite = report.integral_verdict.value_or(SeriesVerdict::Finite) == SeriesVerdict::Finite &&
                            report.jump_verdict.value_or(SeriesVerdict::Finite) == SeriesVerdict::Finite;
    report.verdict = any_divergent ? SeriesVerdict::Divergent : all_finite ? SeriesVerdict::Finite : SeriesVerdict::Inconclusive;
    return report;
}

}  // namespace enlarge
