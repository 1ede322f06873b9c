#include "enlarge/cli.hpp"

#include "enlarge/io.hpp"
#include "enlarge/oracle.hpp"
#include "enlarge/representation.hpp"
#include "enlarge/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace enlarge::cli {

namespace {

using io::Json;

struct Options {
    std::string input;
    std::string output;
    std::uint64_t seed = 0;
    std::size_t instances = 1;
    std::string horizon;
    bool force_failure = false;
    unsigned workers = 1;
    std::string filtration = "f";
    std::string kind = "random";
};

Json load(const Options& o) {
    if (o.input.empty()) throw Error(ErrorCode::SchemaError, "--input is required");
    std::ifstream in(o.input);
    if (!in) throw Error(ErrorCode::SchemaError, "cannot read " + o.input);
    std::stringstream buf;
    buf << in.rdbuf();
    return io::parse(buf.str());
}

// --horizon overrides the instance horizon: a tick number or "inf".
StoppingTime horizon_override(const std::string& text, std::size_t outcomes) {
    if (text == "inf") return StoppingTime::infinite(outcomes);
    try {
        std::size_t used = 0;
        const int k = std::stoi(text, &used);
        if (used != text.size() || k < 0) throw std::invalid_argument(text);
        return StoppingTime::constant(outcomes, k);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::SchemaError, "--horizon expects a tick or inf, got " + text);
    }
}

EnlargedBasis basis(const Options& o, const Json& j) {
    EnlargedBasis eb = io::instance_from_json(j).enlarged();
    if (!o.horizon.empty()) eb.horizon = horizon_override(o.horizon, eb.space.size());
    return eb;
}

const Process& need(const std::optional<Process>& p, const char* key) {
    if (!p) throw Error(ErrorCode::SchemaError, std::string("missing \"") + key + "\"");
    return *p;
}

Json cmd_validate(const Options& o, int& code) {
    const Json j = load(o);
    Json out;
    try {
        const io::Instance inst = io::instance_from_json(j);
        Diagnostics d = validate(inst.space, inst.f);
        out["filtration"] = io::to_json(d);
        if (inst.g) {
            EnlargedBasis eb{inst.space, inst.f, *inst.g, inst.horizon.value_or(StoppingTime::infinite(inst.space.size()))};
            const Diagnostics dg = validate(eb);
            out["enlarged"] = io::to_json(dg);
            d.ok = d.ok && dg.ok;
        }
        out["valid"] = d.ok;
        if (!d.ok) code = kDomainError;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) throw;
        // Bad partitions and probabilities surface while building the objects.
        out = Json{{"valid", false}, {"code", std::string(to_string(e.code()))}, {"message", e.what()}};
        code = kDomainError;
    }
    return out;
}

Json cmd_drift(const Options& o) {
    const Json j = load(o);
    const EnlargedBasis eb = basis(o, j);
    const io::Instance inst = io::instance_from_json(j);
    const Process& x = need(inst.x, "X");
    return Json{{"drift", io::to_json(drift_operator(eb, x))}};
}

Json cmd_factors(const Options& o) {
    const EnlargedBasis eb = basis(o, load(o));
    const RepresentationProcess rep = build_representation(eb.space, eb.f);
    const DriftFactors factors = solve_factors(eb, rep);
    const PositivityCheck pos = check_positivity(eb, factors);
    Json out{{"N", io::to_json(factors.n)}, {"phi", io::to_json(factors.phi)}, {"positivity", pos.holds}};
    if (pos.first_failure)
        out["positivity_failure"] = {{"tick", pos.first_failure->tick},
                                     {"outcome", eb.space.label(pos.first_failure->outcome)}};
    return out;
}

Json cmd_check_viability(const Options& o) {
    const EnlargedBasis eb = basis(o, load(o));
    return io::to_json(full_viability_verdict(eb), eb);
}

// Connector and oracle answer for the asset S in F, or in G with --filtration g.
Json cmd_deflator(const Options& o) {
    const Json j = load(o);
    const io::Instance inst = io::instance_from_json(j);
    const Process& s = need(inst.s, "S");
    const bool in_g = o.filtration == "g";
    if (in_g && !inst.g) throw Error(ErrorCode::SchemaError, "--filtration g needs \"enlarged\"");
    const Filtration& filt = in_g ? *inst.g : inst.f;
    StoppingTime horizon = inst.horizon.value_or(StoppingTime::infinite(inst.space.size()));
    if (!o.horizon.empty()) horizon = horizon_override(o.horizon, inst.space.size());

    const ConnectorResult r = find_structure_connector(inst.space, filt, s, horizon);
    Json out{{"filtration", in_g ? "G" : "F"}, {"feasible", r.feasible()}};
    if (r.feasible()) {
        out["connector"] = io::to_json(*r.connector);
        out["deflator"] = io::to_json(deflator_from_connector(inst.space, filt, *r.connector));
    } else {
        const Partition& atoms = filt.pre(r.infeasible->tick);
        out["infeasible"] = {{"tick", r.infeasible->tick},
                             {"atom", io::block_to_json(atoms.block(r.infeasible->atom), inst.space)}};
        const oracle::OracleResult orc = oracle::lp_deflator_oracle(inst.space, filt, s, horizon);
        if (!orc.feasible) out["certificate"] = io::to_json(orc.certificate);
    }
    return out;
}

Json cmd_verify(const Options& o, int& code, std::ostream& err) {
    suite::SuiteOptions so;
    so.seed = o.seed;
    so.instances = o.instances;
    so.workers = o.workers;
    const suite::SuiteSummary s = suite::run_suite(so);
    Json out = suite::to_json(s, so);
    if (s.first_violation) {
        code = kViolation;
        err << out["violation"].dump(2) << "\n";
    }
    return out;
}

Json cmd_generate(const Options& o) {
    GeneratorConfig cfg;
    cfg.force_condition_failure = o.force_failure;
    if (o.kind == "initial")
        cfg.kind = EnlargementKind::Initial;
    else if (o.kind == "progressive")
        cfg.kind = EnlargementKind::Progressive;
    else if (o.kind != "random")
        throw Error(ErrorCode::SchemaError, "unknown --kind " + o.kind);
    Json list = Json::array();
    for (std::size_t i = 0; i < o.instances; ++i) {
        cfg.seed = suite::instance_seed(o.seed, i);
        EnlargedBasis eb = gen_random_instance(cfg);
        if (!o.horizon.empty()) eb.horizon = horizon_override(o.horizon, eb.space.size());
        list.push_back(io::to_json(eb));
    }
    return o.instances == 1 ? list.front() : Json{{"instances", list}};
}

Json cmd_kernel_eval(const Options& o) {
    const Json j = load(o);
    const std::string kind = j.value("kind", "");
    if (kind == "inaccessible") {
        const InaccessibleEventData d = io::inaccessible_from_json(j);
        validate(d);
        const Rational tilt = 1 + dot(d.phi, d.r);
        Json k = Json::array();
        bool reduced = true;
        bool quotient = true;
        for (std::size_t h = 0; h < d.q.size(); ++h) {
            const Rational kh = k_triple_prime(d, h);
            k.push_back(io::to_json(kh));
            reduced = reduced && tilt * kh * d.qbar[h] == (d.j3[h] + dot(d.phi, d.zeta3[h])) * d.q[h];
            const Rational dn = dot(d.phi, d.l_vals[h]);
            quotient = quotient && kh * d.alpha[h] == (d.j3[h] * d.alpha[h] + dn) / (1 + dn);
        }
        return Json{{"kind", kind}, {"K", k}, {"reduced_equation", reduced}, {"jump_quotient", quotient}};
    }
    if (kind == "accessible") {
        const AccessibleEventData d = io::accessible_from_json(j);
        validate(d);
        Json jumps = Json::array();
        for (std::size_t h = 0; h < d.p.size(); ++h) jumps.push_back(io::to_json(accessible_jump_value(d, h)));
        const JumpSeriesCheck s = accessible_series_check(d);
        return Json{{"kind", kind},
                    {"jump", jumps},
                    {"squared_jump", {{"kernel_side", io::to_json(s.kernel_side)},
                                      {"closed_form", io::to_json(s.closed_form)},
                                      {"holds", s.holds}}}};
    }
    if (kind == "continuous") {
        try {
            std::vector<Vec> zeta;
            for (const Json& row : j.at("zeta")) zeta.push_back(io::vec_from_json(row));
            const Vec k = k_prime(io::vec_from_json(j.at("J")), zeta, io::vec_from_json(j.at("phi")));
            return Json{{"kind", kind}, {"K", io::to_json(k)}};
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::SchemaError, e.what());
        }
    }
    throw Error(ErrorCode::SchemaError, "\"kind\" must be continuous, accessible or inaccessible");
}

Json cmd_series(const Options& o) { return io::to_json(series_diagnostics(io::series_from_json(load(o)))); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact viability checks for enlarged filtrations on finite probability spaces", "enlarge"};
    app.require_subcommand(1, 1);

    auto with_input = [&](CLI::App* c) {
        c->add_option("--input,-i", o.input, "JSON instance")->required();
        c->add_option("--output,-o", o.output, "write the report here instead of stdout");
        return c;
    };
    auto with_horizon = [&](CLI::App* c) {
        c->add_option("--horizon", o.horizon, "override the horizon: a tick or inf");
        return c;
    };

    CLI::App* validate_cmd = with_input(app.add_subcommand("validate", "check partitions, refinement and horizon"));
    CLI::App* drift = with_horizon(with_input(app.add_subcommand("drift", "G drift of the F-martingale X")));
    CLI::App* factors = with_horizon(with_input(app.add_subcommand("factors", "drift factors N and phi")));
    CLI::App* viability =
        with_horizon(with_input(app.add_subcommand("check-viability", "support condition verdict with certificates")));
    CLI::App* deflator = with_horizon(with_input(app.add_subcommand("deflator", "structure connector and deflator of S")));
    deflator->add_option("--filtration", o.filtration, "f or g")->check(CLI::IsMember({"f", "g"}));

    CLI::App* verify = app.add_subcommand("verify-theorems", "seeded property suite");
    verify->add_option("--seed", o.seed);
    verify->add_option("--instances", o.instances)->check(CLI::PositiveNumber);
    verify->add_option("--workers", o.workers)->check(CLI::PositiveNumber);
    verify->add_option("--output,-o", o.output);

    CLI::App* generate = with_horizon(app.add_subcommand("generate", "random enlarged bases"));
    generate->add_option("--seed", o.seed);
    generate->add_option("--instances", o.instances)->check(CLI::PositiveNumber);
    generate->add_flag("--force-failure", o.force_failure, "break the support condition");
    generate->add_option("--kind", o.kind, "random, initial or progressive");
    generate->add_option("--output,-o", o.output);

    CLI::App* kernel = with_input(app.add_subcommand("kernel-eval", "event kernels on explicit data"));
    CLI::App* series = with_input(app.add_subcommand("diagnose-series", "approximate integrability diagnostics"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kSchemaError;
    }
    (void)validate_cmd;

    int code = kOk;
    Json report;
    try {
        if (app.got_subcommand(drift))
            report = cmd_drift(o);
        else if (app.got_subcommand(factors))
            report = cmd_factors(o);
        else if (app.got_subcommand(viability))
            report = cmd_check_viability(o);
        else if (app.got_subcommand(deflator))
            report = cmd_deflator(o);
        else if (app.got_subcommand(verify))
            report = cmd_verify(o, code, err);
        else if (app.got_subcommand(generate))
            report = cmd_generate(o);
        else if (app.got_subcommand(kernel))
            report = cmd_kernel_eval(o);
        else if (app.got_subcommand(series))
            report = cmd_series(o);
        else
            report = cmd_validate(o, code);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return e.code() == ErrorCode::SchemaError ? kSchemaError : kDomainError;
    } catch (const nlohmann::json::exception& e) {
        err << "SCHEMA_ERROR: " << e.what() << "\n";
        return kSchemaError;
    }

    const std::string text = report.dump(2) + "\n";
    if (o.output.empty()) {
        out << text;
    } else {
        std::ofstream file(o.output, std::ios::binary);
        if (!file) {
            err << "cannot write " << o.output << "\n";
            return kSchemaError;
        }
        file << text;
    }
    return code;
}

}  // namespace enlarge::cli
