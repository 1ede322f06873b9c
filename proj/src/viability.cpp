#include "enlarge/viability.hpp"

#include "enlarge/calculus.hpp"
#include "enlarge/linalg.hpp"
#include "enlarge/lp.hpp"
#include "enlarge/oracle.hpp"

#include <algorithm>

namespace enlarge {

namespace {

// Conditional law of the children of one atom and the martingale jumps on each child.
struct AtomProblem {
    Vec p;                  // P(child | atom)
    std::vector<Vec> jumps; // jumps[i][c] = dS^m_i on child c
    Vec drift;              // dS^v_i on the atom
};

std::optional<Vec> solve_atom(const AtomProblem& prob) {
    const std::size_t m = prob.p.size();
    const std::size_t n = prob.jumps.size();

    // Least-norm candidate in L^2(p): dD = sum_i y_i dS^m_i with Cov(S^m) y = dS^v.
    Matrix cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < m; ++c) cov(i, j) += prob.p[c] * prob.jumps[i][c] * prob.jumps[j][c];
    const auto y = solve_any(cov, prob.drift);
    if (!y) return std::nullopt;
    Vec delta(m);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = 0; i < n; ++i) delta[c] += (*y)[i] * prob.jumps[i][c];
    if (std::all_of(delta.begin(), delta.end(), [](const Rational& v) { return v < 1; })) return delta;

    // Otherwise maximize the gap t in v_c = 1 - dD_c = t + w_c, w_c >= 0.
    LinearProgram lp;
    lp.a = Matrix(1 + n, 1 + m);
    lp.b = Vec(1 + n);
    lp.c = Vec(1 + m);
    lp.free.assign(1 + m, false);
    lp.free[0] = true;
    lp.c[0] = 1;
    lp.a(0, 0) = 1;
    for (std::size_t c = 0; c < m; ++c) lp.a(0, 1 + c) = prob.p[c];
    lp.b[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < m; ++c) lp.a(1 + i, 1 + c) = prob.p[c] * prob.jumps[i][c];
        lp.b[1 + i] = -prob.drift[i];
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal || sgn(sol.objective) <= 0) return std::nullopt;
    for (std::size_t c = 0; c < m; ++c) delta[c] = 1 - sol.x[0] - sol.x[1 + c];
    return delta;
}

// E[dX dX^T | atom] for a vector process at tick k.
Matrix second_moment(const SampleSpace& space, const Block& atom, const Process& x, int k) {
    const std::size_t dim = x.dim();
    Matrix m(dim, dim);
    Rational den(0);
    for (Outcome w : atom) {
        den += space.prob(w);
        const Vec j = x.jump_vector(w, k);
        for (std::size_t r = 0; r < dim; ++r) {
            if (sgn(j[r]) == 0) continue;
            for (std::size_t c = 0; c < dim; ++c) m(r, c) += space.prob(w) * j[r] * j[c];
        }
    }
    m *= 1 / den;
    return m;
}

bool jumps_below_one(const Process& d) {
    for (Outcome w = 0; w < d.outcomes(); ++w)
        for (int k = 1; k <= d.ticks(); ++k)
            if (d.jump(w, k) >= 1) return false;
    return true;
}

bool starts_at_zero(const Process& d) {
    for (Outcome w = 0; w < d.outcomes(); ++w)
        if (sgn(d(w, 0)) != 0) return false;
    return true;
}

}  // namespace

ConnectorResult find_structure_connector(const SampleSpace& space, const Filtration& filt, const Process& s,
                                         const StoppingTime& horizon) {
    if (!is_adapted(filt, s)) throw Error(ErrorCode::NotAdapted, "asset is not adapted");
    const Process stopped = stop(filt, s, horizon);
    const Decomposition dec = canonical_decomposition(space, filt, stopped);
    Process d(space.size(), filt.ticks(), 1);
    for (int k = 1; k <= filt.ticks(); ++k) {
        const Partition& pre = filt.pre(k);
        const Partition& at = filt.at(k);
        Vec inc(space.size());
        for (std::size_t bi = 0; bi < pre.num_blocks(); ++bi) {
            const Block& b = pre.block(bi);
            if (!horizon.covers(b.front(), k)) continue;
            const std::vector<std::size_t> kids = at.blocks_inside(b);
            const Rational pb = space.mass(b);
            AtomProblem prob;
            for (std::size_t c : kids) prob.p.push_back(space.mass(at.block(c)) / pb);
            for (std::size_t i = 0; i < s.dim(); ++i) {
                Vec col;
                for (std::size_t c : kids) col.push_back(dec.martingale_part.jump(at.block(c).front(), k, i));
                prob.jumps.push_back(std::move(col));
                prob.drift.push_back(dec.drift_part.jump(b.front(), k, i));
            }
            const auto delta = solve_atom(prob);
            if (!delta) return {std::nullopt, InfeasibleAtom{k, bi, b}};
            for (std::size_t c = 0; c < kids.size(); ++c)
                for (Outcome w : at.block(kids[c])) inc[w] = (*delta)[c];
        }
        for (Outcome w = 0; w < space.size(); ++w) d(w, k) = d(w, k - 1) + inc[w];
    }
    return {std::move(d), std::nullopt};
}

bool is_structure_connector(const SampleSpace& space, const Filtration& filt, const Process& s, const Process& d,
                            const StoppingTime& horizon) {
    if (d.dim() != 1 || !is_adapted(filt, d) || !is_adapted(filt, s)) return false;
    if (!starts_at_zero(d) || !jumps_below_one(d) || !is_martingale(space, filt, d)) return false;
    const Decomposition dec = canonical_decomposition(space, filt, stop(filt, s, horizon));
    const Process drift = compensator(space, filt, bracket(dec.martingale_part, stop(d, horizon)));
    return drift == dec.drift_part;
}

Process deflator_from_connector(const SampleSpace& space, const Filtration& filt, const Process& d) {
    if (d.dim() != 1) throw Error(ErrorCode::ConnectorInvalid, "connector must be scalar");
    if (!is_adapted(filt, d) || !is_martingale(space, filt, d))
        throw Error(ErrorCode::ConnectorInvalid, "connector is not a martingale");
    if (!starts_at_zero(d)) throw Error(ErrorCode::ConnectorInvalid, "connector does not start at 0");
    if (!jumps_below_one(d)) throw Error(ErrorCode::ConnectorInvalid, "connector has a jump of at least 1");
    return doleans_exp(d * Rational(-1));
}

bool is_deflator(const SampleSpace& space, const Filtration& filt, const Process& z, const Process& s,
                 const StoppingTime& horizon) {
    if (z.dim() != 1 || !is_adapted(filt, z) || !is_adapted(filt, s)) return false;
    for (Outcome w = 0; w < z.outcomes(); ++w) {
        if (z(w, 0) != 1) return false;
        for (int k = 0; k <= z.ticks(); ++k)
            if (sgn(z(w, k)) <= 0) return false;
    }
    if (!is_martingale(space, filt, stop(filt, z, horizon))) return false;
    for (std::size_t i = 0; i < s.dim(); ++i)
        if (!is_martingale(space, filt, stop(filt, multiply(z, s.component(i)), horizon))) return false;
    return true;
}

Process compensated_basis(const EnlargedBasis& eb, const RepresentationProcess& rep) {
    return rep.w - drift_operator(eb, rep.w);
}

Process solve_accessible_K(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                           const Process& d) {
    if (!check_condition_support(eb).holds)
        throw Error(ErrorCode::SupportConditionFailed, "support condition fails; no accessible kernel");
    if (factors.empty()) throw Error(ErrorCode::FactorsMissing, "drift factors have not been solved");
    const SampleSpace& space = eb.space;
    const Process j = represent(space, eb.f, rep, d);
    const std::vector<Process> zeta = represent_all(space, eb.f, rep, factors.n);
    const Process wt = compensated_basis(eb, rep);
    const std::size_t dim = rep.dim();
    Process out(space.size(), eb.f.ticks(), dim);
    for (int k = 1; k <= eb.f.ticks(); ++k) {
        const Partition& fpre = eb.f.pre(k);
        std::vector<std::optional<Matrix>> moment(fpre.num_blocks());
        for (const Block& c : eb.g.pre(k).blocks()) {
            const Outcome w0 = c.front();
            if (!eb.alive(w0, k)) continue;
            const std::size_t b = fpre.block_of(w0);
            if (!moment[b]) moment[b] = second_moment(space, fpre.block(b), rep.w, k);
            Vec x = j.value_vector(w0, k);
            for (std::size_t i = 0; i < zeta.size(); ++i) x = x + factors.phi(w0, k, i) * zeta[i].value_vector(w0, k);
            const Vec kk = pseudo_inverse(second_moment(space, c, wt, k)) * (*moment[b] * x);
            for (Outcome w : c)
                for (std::size_t h = 0; h < dim; ++h) out(w, k, h) = kk[h];
        }
    }
    return out;
}

IdentityCheck jump_identity_check(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                                  const Process& k, const Process& d) {
    const Process wt = compensated_basis(eb, rep);
    for (int t = 1; t <= eb.f.ticks(); ++t) {
        for (Outcome w = 0; w < eb.space.size(); ++w) {
            if (!eb.alive(w, t)) continue;
            const Rational denom = density_factor(factors, w, t);
            if (sgn(denom) == 0) return {false, Locator{t, w}};
            const Rational lhs = dot(k.value_vector(w, t), wt.jump_vector(w, t));
            const Rational rhs = (d.jump(w, t) + denom - 1) / denom;
            if (lhs != rhs) return {false, Locator{t, w}};
        }
    }
    return {};
}

GConnector g_connector(const EnlargedBasis& eb, const DriftFactors& factors, const RepresentationProcess& rep,
                       const Process& s, const Process& d) {
    const SampleSpace& space = eb.space;
    Process k = solve_accessible_K(eb, factors, rep, d);
    Process y = stop(integrate(k, compensated_basis(eb, rep)), eb.horizon);
    if (!is_martingale(space, eb.g, y) || !jumps_below_one(y))
        throw Error(ErrorCode::ConnectorInvalid, "lifted connector is not a G-martingale with jumps below 1");

    // [Y, M~]^{G.p} against [D, M]^{F.p} + phi^T . [N, M]^{F.p}, with M the F-martingale part of S.
    const Decomposition dec = canonical_decomposition(space, eb.f, s);
    const Process m = dec.martingale_part;
    const Process mt = m - drift_operator(eb, m);
    const Process lhs = compensator(space, eb.g, bracket(y, mt));
    const Process rhs = stop(compensator(space, eb.f, bracket(d, m)), eb.horizon) + factor_drift(eb, factors, m);
    if (!(lhs == rhs)) throw Error(ErrorCode::ConnectorInvalid, "lifted connector breaks the covariation identity");
    if (!is_structure_connector(space, eb.g, s, y, eb.horizon))
        throw Error(ErrorCode::ConnectorInvalid, "lifted process is not a G structure connector for the asset");
    return {std::move(k), std::move(y)};
}

ViabilityReport full_viability_verdict(const EnlargedBasis& eb) {
    if (const Diagnostics diag = validate(eb); !diag.ok) throw Error(*diag.code, diag.message);
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    ViabilityReport report;
    report.factors = solve_factors(eb, rep);
    const SupportCheck support = check_condition_support(eb);
    report.condition_support = support.holds;
    report.positivity = check_positivity(eb, report.factors).holds;
    report.verdict = support.holds;

    if (support.holds) {
        const Process zero(eb.space.size(), eb.f.ticks(), 1);
        const Process k = solve_accessible_K(eb, report.factors, rep, zero);
        Process y = stop(integrate(k, compensated_basis(eb, rep)), eb.horizon);
        report.deflator = doleans_exp(y * Rational(-1));
        report.connector = std::move(y);
        return report;
    }

    // Unit weights first; the component labelled by the missed child always works.
    std::vector<Vec> candidates;
    const std::size_t dim = rep.dim();
    for (std::size_t h = 0; h < dim; ++h) {
        Vec e(dim);
        e[h] = 1;
        candidates.push_back(std::move(e));
    }
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a + 1; b < dim; ++b)
            for (int sign : {1, -1}) {
                Vec e(dim);
                e[a] = 1;
                e[b] = sign;
                candidates.push_back(std::move(e));
            }
    for (const Vec& weights : candidates) {
        Process asset(eb.space.size(), eb.f.ticks(), 1);
        for (std::size_t h = 0; h < dim; ++h)
            if (sgn(weights[h]) != 0) asset = asset + rep.w.component(h) * weights[h];
        const oracle::OracleResult res = oracle::lp_deflator_oracle(eb.space, eb.g, asset, eb.horizon);
        if (res.feasible) continue;
        if (!oracle::verify_certificate(eb.space, eb.g, asset, eb.horizon, res.certificate)) continue;
        report.witness = ViabilityWitness{weights, std::move(asset), *support.witness, res.certificate};
        break;
    }
    return report;
}

}  // namespace enlarge
