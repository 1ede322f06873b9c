#include "enlarge/suite.hpp"

#include "enlarge/calculus.hpp"
#include "enlarge/oracle.hpp"
#include "enlarge/viability.hpp"

#include <atomic>
#include <map>
#include <thread>

namespace enlarge::suite {

namespace {

struct Collector {
    std::vector<CheckResult> results;
    io::Json context;

    void add(const std::string& name, bool ok, const std::string& detail = {}) {
        CheckResult r{name, ok, ok ? std::string() : detail, nullptr};
        if (!ok) r.reproducer = context;
        results.push_back(std::move(r));
    }

    // Runs fn and records a failure with the error text if it throws.
    template <typename Fn>
    void guarded(const std::string& name, Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            add(name, false, e.what());
        }
    }
};

Process random_f_predictable(Rng& rng, const Filtration& f) {
    Process h(f.outcomes(), f.ticks(), 1);
    for (int k = 1; k <= f.ticks(); ++k)
        for (const Block& b : f.pre(k).blocks()) {
            const Rational v = rng.rational(-3, 3, 2);
            for (Outcome w : b) h(w, k) = v;
        }
    return h;
}

Process random_increasing(Rng& rng, const Filtration& f) {
    Process a(f.outcomes(), f.ticks(), 1);
    for (int k = 1; k <= f.ticks(); ++k)
        for (const Block& b : f.at(k).blocks()) {
            const Rational v = rng.rational(0, 4, 2);
            for (Outcome w : b) a(w, k) = a(w, k - 1) + v;
        }
    return a;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<CheckResult> single_filtration_checks(Rng& rng) {
    const auto n = static_cast<std::size_t>(rng.uniform(2, 12));
    const int ticks = static_cast<int>(rng.uniform(1, 4));
    const SampleSpace space = random_space(rng, n);
    const Filtration f = random_filtration(rng, n, ticks, 3);
    const Process s = random_asset(rng, space, f, static_cast<std::size_t>(rng.uniform(1, 2)));
    const StoppingTime horizon = StoppingTime::infinite(n);

    Collector c;
    c.context = io::to_json(io::Instance{space, f, std::nullopt, std::nullopt, std::nullopt, s});
    c.guarded("connector search agrees with the deflator oracle", [&] {
        const ConnectorResult r = find_structure_connector(space, f, s, horizon);
        const oracle::OracleResult o = oracle::lp_deflator_oracle(space, f, s, horizon);
        c.add("connector search agrees with the deflator oracle", r.feasible() == o.feasible,
              r.feasible() ? "connector found, oracle infeasible" : "no connector, oracle feasible");
        if (r.feasible()) {
            const Process z = deflator_from_connector(space, f, *r.connector);
            c.add("connector deflator passes exact martingale checks",
                  is_structure_connector(space, f, s, *r.connector, horizon) && is_deflator(space, f, z, s, horizon) &&
                      oracle::check_deflator(space, f, s, horizon, z),
                  "connector deflator rejected");
        } else if (!o.feasible) {
            c.add("oracle certificate verifies", oracle::verify_certificate(space, f, s, horizon, o.certificate),
                  "certificate rejected");
        }
    });
    return c.results;
}

std::vector<CheckResult> enlargement_checks(Rng& rng, bool force_failure, std::size_t assets) {
    GeneratorConfig cfg;
    cfg.seed = rng.next();
    cfg.force_condition_failure = force_failure;
    const EnlargedBasis eb = gen_random_instance(cfg);
    const SampleSpace& space = eb.space;
    const std::size_t n = space.size();
    const StoppingTime never = StoppingTime::infinite(n);

    Collector c;
    c.context = io::to_json(eb);
    c.context["generator_seed"] = cfg.seed;
    c.context["force_failure"] = force_failure;

    const RepresentationProcess rep = build_representation(space, eb.f);
    DriftFactors factors;
    c.guarded("drift factors reproduce the drift operator", [&] {
        factors = solve_factors(eb, rep);
        const Process x = random_martingale(rng, space, eb.f);
        c.add("drift factors reproduce the drift operator", factor_drift(eb, factors, x) == drift_operator(eb, x),
              "factor drift differs from the drift operator");
        const Process h = random_f_predictable(rng, eb.f);
        c.add("drift commutes with predictable integrands",
              drift_operator(eb, stoch_integral(eb.f, h, x)) == integrate(h, drift_operator(eb, x)),
              "drift of an integral differs from the integral of the drift");
        c.add("compensator transfer identity", compensator_transfer_check(eb, factors, random_increasing(rng, eb.f)).holds,
              "G compensator differs from the transferred F compensator");
    });
    if (factors.empty()) return c.results;

    const SupportCheck support = check_condition_support(eb);
    if (support.holds)
        c.add("support condition implies positive density factor", check_positivity(eb, factors).holds,
              "1 + phi^T dN fails to be positive");
    bool agree = true;
    for (int k = 1; k <= eb.f.ticks(); ++k)
        for (const Block& b : eb.f.at(k).blocks()) {
            Vec xi(n);
            const Rational v = rng.rational(1, 4, 1);
            for (Outcome w : b) xi[w] = v;
            agree = agree && support_sets_agree(eb, k, xi);
        }
    c.add("support condition matches the conditional support equality", agree == support.holds,
          "support check and support-set equality disagree");

    ViabilityReport report;
    c.guarded("verdict matches G connectors of viable assets", [&] {
        report = full_viability_verdict(eb);
        std::vector<Process> family = viable_asset_family(rng, space, eb.f, assets);
        if (report.witness) family.push_back(report.witness->asset);
        std::size_t viable_in_g = 0;
        for (const Process& s : family)
            if (find_structure_connector(space, eb.g, s, eb.horizon).feasible()) ++viable_in_g;
        const bool all = viable_in_g == family.size();
        c.add("verdict matches G connectors of viable assets", report.verdict == all && family.size() >= assets,
              "verdict " + std::string(report.verdict ? "true" : "false") + " but " + std::to_string(viable_in_g) +
                  " of " + std::to_string(family.size()) + " assets have G connectors");

        if (force_failure || !report.verdict) {
            const bool witnessed = !report.verdict && report.witness &&
                                   oracle::verify_certificate(space, eb.g, report.witness->asset, eb.horizon,
                                                              report.witness->certificate) &&
                                   is_martingale(space, eb.f, report.witness->asset);
            c.add("failed support yields a verified witness", witnessed, "missing or unverifiable witness");
        }
        if (!report.verdict) return;

        // Common deflator against every basis component at once.
        c.add("common deflator deflates every basis component",
              report.deflator && is_deflator(space, eb.g, *report.deflator, rep.w, eb.horizon),
              "common deflator fails on the representation basis");

        const Process zero(n, eb.f.ticks(), 1);
        c.add("accessible kernel matches the jump closed form",
              jump_identity_check(eb, factors, rep, solve_accessible_K(eb, factors, rep, zero), zero).holds,
              "jump identity fails for D = 0");
        const Process d = random_connector(rng, space, eb.f);
        c.add("accessible kernel matches the jump closed form",
              jump_identity_check(eb, factors, rep, solve_accessible_K(eb, factors, rep, d), d).holds,
              "jump identity fails for a random connector");

        for (std::size_t i = 0; i < family.size() && i < 3; ++i) {
            const Process& s = family[family.size() - 1 - i];
            const ConnectorResult fc = find_structure_connector(space, eb.f, s, never);
            if (!fc.feasible()) {
                c.add("lifted connector deflates the asset in G", false, "generated asset lacks an F connector");
                continue;
            }
            const GConnector gc = g_connector(eb, factors, rep, s, *fc.connector);
            const Process zg = deflator_from_connector(space, eb.g, gc.y);
            c.add("lifted connector deflates the asset in G",
                  jump_identity_check(eb, factors, rep, gc.k, *fc.connector).holds &&
                      is_deflator(space, eb.g, zg, s, eb.horizon),
                  "lifted connector fails its checks");
            const Process zf = deflator_from_connector(space, eb.f, *fc.connector);
            c.add("F deflator times common deflator deflates the asset in G",
                  is_deflator(space, eb.g, multiply(zf, *report.deflator), s, eb.horizon), "product deflator fails");
        }
    });
    return c.results;
}

std::vector<CheckResult> model_crosschecks(Rng& rng) {
    Collector c;
    const InitialEnlargement ie = gen_jacod_instance(rng);
    c.context = io::to_json(ie.eb);
    c.context["xi"] = ie.xi;
    c.guarded("initial enlargement drift and density ratios agree", [&] {
        const CrossCheck r = jacod_phi_crosscheck(ie);
        c.add("initial enlargement drift and density ratios agree", r.holds, r.detail);
    });

    const ProgressiveEnlargement pe = gen_azema_instance(rng);
    c.context = io::to_json(pe.eb);
    c.context["tau"] = io::to_json(pe.tau);
    c.guarded("progressive enlargement drift and survival ratios agree", [&] {
        const CrossCheck r = azema_phi_crosscheck(pe);
        c.add("progressive enlargement drift and survival ratios agree", r.holds, r.detail);
    });
    return c.results;
}

std::vector<CheckResult> kernel_checks(Rng& rng, std::size_t events) {
    Collector c;
    for (std::size_t e = 0; e < events; ++e) {
        const InaccessibleEventData data = gen_inaccessible_event(rng);
        c.context = io::to_json(data);
        const Rational tilt = 1 + dot(data.phi, data.r);
        bool reduced = true;
        bool quotient = true;
        for (std::size_t h = 0; h < data.q.size(); ++h) {
            const Rational k = k_triple_prime(data, h);
            reduced = reduced && tilt * k * data.qbar[h] == (data.j3[h] + dot(data.phi, data.zeta3[h])) * data.q[h];
            const Rational dn = dot(data.phi, data.l_vals[h]);
            quotient = quotient && k * data.alpha[h] == (data.j3[h] * data.alpha[h] + dn) / (1 + dn);
        }
        c.add("inaccessible kernel solves the reduced equation", reduced, "reduced equation fails");
        c.add("inaccessible kernel matches the jump quotient", quotient, "jump quotient fails");
    }
    const AccessibleEventData data = gen_accessible_event(rng);
    c.context = io::to_json(data);
    c.guarded("accessible squared jump identity", [&] {
        const JumpSeriesCheck r = accessible_series_check(data);
        c.add("accessible squared jump identity", r.holds,
              "kernel side " + to_string(r.kernel_side) + " vs closed form " + to_string(r.closed_form));
    });
    return c.results;
}

std::vector<CheckResult> run_instance(const SuiteOptions& opts, std::size_t index) {
    Rng rng(instance_seed(opts.seed, index));
    std::vector<CheckResult> all = single_filtration_checks(rng);
    const bool force = opts.failure_every != 0 && index % opts.failure_every == opts.failure_every - 1;
    auto add = [&](std::vector<CheckResult> more) {
        for (auto& r : more) all.push_back(std::move(r));
    };
    add(enlargement_checks(rng, force, opts.assets_per_instance));
    add(model_crosschecks(rng));
    add(kernel_checks(rng, opts.kernel_events));
    return all;
}

SuiteSummary run_suite(const SuiteOptions& opts) {
    std::vector<std::vector<CheckResult>> results(opts.instances);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < opts.instances; i = next++) {
            try {
                results[i] = run_instance(opts, i);
            } catch (const Error& e) {
                results[i] = {CheckResult{"instance generation", false, e.what(), nullptr}};
            }
        }
    };
    const unsigned workers = std::max(1u, opts.workers);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    SuiteSummary summary;
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < results.size(); ++i)
        for (const CheckResult& r : results[i]) {
            auto [it, fresh] = slot.try_emplace(r.name, summary.tallies.size());
            if (fresh) summary.tallies.push_back({r.name});
            Tally& t = summary.tallies[it->second];
            if (r.passed) {
                ++t.passed;
            } else {
                ++t.failed;
                if (!summary.first_violation) summary.first_violation = Violation{i, r};
            }
        }
    return summary;
}

io::Json to_json(const SuiteSummary& s, const SuiteOptions& opts) {
    io::Json checks = io::Json::array();
    for (const Tally& t : s.tallies) checks.push_back({{"name", t.name}, {"passed", t.passed}, {"failed", t.failed}});
    io::Json out{{"seed", opts.seed}, {"instances", opts.instances}, {"checks", checks},
                 {"status", s.first_violation ? "violation" : "ok"}};
    if (s.first_violation) {
        const Violation& v = *s.first_violation;
        out["violation"] = {{"index", v.index},
                            {"check", v.check.name},
                            {"detail", v.check.detail},
                            {"instance_seed", instance_seed(opts.seed, v.index)},
                            {"reproducer", v.check.reproducer}};
    }
    return out;
}

}  // namespace enlarge::suite
