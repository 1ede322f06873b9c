#include "enlarge/io.hpp"

#include "enlarge/error.hpp"

#include <cmath>
#include <limits>

namespace enlarge::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

const Json& array(const Json& j, const char* what) {
    if (!j.is_array()) schema(std::string(what) + " must be an array");
    return j;
}

std::vector<Vec> rows_from_json(const Json& j, const char* what) {
    std::vector<Vec> out;
    for (const Json& r : array(j, what)) out.push_back(vec_from_json(r));
    return out;
}

Json rows_to_json(const std::vector<Vec>& rows) {
    Json out = Json::array();
    for (const Vec& r : rows) out.push_back(to_json(r));
    return out;
}

double number(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    if (!j.is_number()) schema("samples must be numbers or null");
    return j.get<double>();
}

std::vector<double> numbers(const Json& j, const char* what) {
    std::vector<double> out;
    for (const Json& x : array(j, what)) out.push_back(number(x));
    return out;
}

}  // namespace

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    schema("rationals must be \"p/q\" strings or integers");
}

Json to_json(const Vec& v) {
    Json out = Json::array();
    for (const Rational& r : v) out.push_back(to_json(r));
    return out;
}

Vec vec_from_json(const Json& j) {
    Vec out;
    for (const Json& x : array(j, "vector")) out.push_back(rational_from_json(x));
    return out;
}

Json block_to_json(const Block& b, const SampleSpace& space) {
    Json out = Json::array();
    for (Outcome w : b) out.push_back(space.label(w));
    return out;
}

Json to_json(const Partition& p, const SampleSpace& space) {
    Json out = Json::array();
    for (const Block& b : p.blocks()) out.push_back(block_to_json(b, space));
    return out;
}

Partition partition_from_json(const Json& j, const SampleSpace& space) {
    std::vector<Block> blocks;
    for (const Json& jb : array(j, "partition")) {
        Block b;
        for (const Json& x : array(jb, "block")) {
            if (x.is_string()) {
                const auto w = space.index_of(x.get<std::string>());
                if (!w) schema("unknown outcome label \"" + x.get<std::string>() + "\"");
                b.push_back(*w);
            } else if (x.is_number_integer() && x.get<long>() >= 0 && static_cast<std::size_t>(x.get<long>()) < space.size()) {
                b.push_back(static_cast<Outcome>(x.get<long>()));
            } else {
                schema("block entries must be outcome labels or indices");
            }
        }
        blocks.push_back(std::move(b));
    }
    return Partition(std::move(blocks), space.size());
}

Json to_json(const Filtration& f, const SampleSpace& space) {
    Json ticks = Json::array();
    for (int k = 1; k <= f.ticks(); ++k) ticks.push_back({{"pre", to_json(f.pre(k), space)}, {"at", to_json(f.at(k), space)}});
    return {{"initial", to_json(f.initial(), space)}, {"ticks", ticks}};
}

Filtration filtration_from_json(const Json& j, const SampleSpace& space) {
    const Partition initial = partition_from_json(field(j, "initial"), space);
    std::vector<TickPartitions> ticks;
    for (const Json& t : array(field(j, "ticks"), "ticks"))
        ticks.push_back({partition_from_json(field(t, "pre"), space), partition_from_json(field(t, "at"), space)});
    return Filtration(initial, std::move(ticks));
}

Json to_json(const Process& x) {
    auto matrix = [&](std::size_t i) {
        Json m = Json::array();
        for (Outcome w = 0; w < x.outcomes(); ++w) {
            Json row = Json::array();
            for (int k = 0; k <= x.ticks(); ++k) row.push_back(to_json(x(w, k, i)));
            m.push_back(row);
        }
        return m;
    };
    if (x.dim() == 1) return matrix(0);
    Json out = Json::array();
    for (std::size_t i = 0; i < x.dim(); ++i) out.push_back(matrix(i));
    return out;
}

Process process_from_json(const Json& j, std::size_t outcomes, int ticks) {
    auto read_matrix = [&](const Json& m, Process& out, std::size_t i) {
        if (!m.is_array() || m.size() != outcomes) schema("process needs one row per outcome");
        for (Outcome w = 0; w < outcomes; ++w) {
            const Vec row = vec_from_json(m[w]);
            if (row.size() != static_cast<std::size_t>(ticks) + 1) schema("process rows need one value per tick 0..K");
            for (int k = 0; k <= ticks; ++k) out(w, k, i) = row[static_cast<std::size_t>(k)];
        }
    };
    if (!j.is_array() || j.empty()) schema("process must be a nonempty array");
    const bool vector = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    if (!vector) {
        Process out(outcomes, ticks, 1);
        read_matrix(j, out, 0);
        return out;
    }
    Process out(outcomes, ticks, j.size());
    for (std::size_t i = 0; i < j.size(); ++i) read_matrix(j[i], out, i);
    return out;
}

Json to_json(const StoppingTime& t) {
    Json out = Json::array();
    for (int v : t.values()) {
        if (v == StoppingTime::kInfinity) out.push_back(nullptr);
        else out.push_back(v);
    }
    return out;
}

StoppingTime stopping_time_from_json(const Json& j, std::size_t outcomes) {
    if (!j.is_array() || j.size() != outcomes) schema("horizon needs one entry per outcome");
    std::vector<int> values;
    for (const Json& x : j) {
        if (x.is_null()) values.push_back(StoppingTime::kInfinity);
        else if (x.is_number_integer() && x.get<long>() >= 0 && x.get<long>() < StoppingTime::kInfinity) values.push_back(x.get<int>());
        else schema("horizon entries must be nonnegative ticks or null");
    }
    return StoppingTime(std::move(values));
}

EnlargedBasis Instance::enlarged() const {
    if (!g) schema("this command needs an \"enlarged\" filtration");
    return {space, f, *g, horizon.value_or(StoppingTime::infinite(space.size()))};
}

Instance instance_from_json(const Json& j) {
    try {
        std::vector<std::string> labels;
        for (const Json& x : array(field(j, "outcomes"), "outcomes")) {
            if (!x.is_string()) schema("outcome labels must be strings");
            labels.push_back(x.get<std::string>());
        }
        Vec prob = vec_from_json(field(j, "prob"));
        if (prob.size() != labels.size()) schema("prob needs one entry per outcome");
        Instance inst;
        inst.space = SampleSpace(std::move(labels), std::move(prob));
        inst.f = filtration_from_json(field(j, "filtration"), inst.space);
        if (j.contains("enlarged")) inst.g = filtration_from_json(j.at("enlarged"), inst.space);
        if (j.contains("horizon")) inst.horizon = stopping_time_from_json(j.at("horizon"), inst.space.size());
        if (j.contains("X")) inst.x = process_from_json(j.at("X"), inst.space.size(), inst.f.ticks());
        if (j.contains("S")) inst.s = process_from_json(j.at("S"), inst.space.size(), inst.f.ticks());
        return inst;
    } catch (const nlohmann::json::exception& e) {
        schema(e.what());
    }
}

Json to_json(const Instance& inst) {
    Json out{{"outcomes", inst.space.labels()}, {"prob", to_json(inst.space.probs())}, {"filtration", to_json(inst.f, inst.space)}};
    if (inst.g) out["enlarged"] = to_json(*inst.g, inst.space);
    if (inst.horizon) out["horizon"] = to_json(*inst.horizon);
    if (inst.x) out["X"] = to_json(*inst.x);
    if (inst.s) out["S"] = to_json(*inst.s);
    return out;
}

Json to_json(const EnlargedBasis& eb) {
    Instance inst{eb.space, eb.f, eb.g, eb.horizon, std::nullopt, std::nullopt};
    return to_json(inst);
}

Json to_json(const Diagnostics& d) {
    Json out{{"ok", d.ok}};
    if (!d.ok) {
        out["code"] = d.code ? std::string(to_string(*d.code)) : "";
        out["message"] = d.message;
        if (d.tick) out["tick"] = *d.tick;
    }
    return out;
}

Json to_json(const ViabilityReport& report, const EnlargedBasis& eb) {
    Json out{{"verdict", report.verdict},
             {"condition_support", report.condition_support},
             {"positivity", report.positivity},
             {"drift_multiplier", "auto-satisfied"},
             {"integrability", "auto-satisfied"}};
    if (!report.factors.empty()) out["phi"] = to_json(report.factors.phi);
    if (report.connector) out["connector"] = to_json(*report.connector);
    if (report.deflator) out["deflator"] = to_json(*report.deflator);
    if (report.witness) {
        const ViabilityWitness& w = *report.witness;
        out["witness"] = {{"weights", to_json(w.weights)},
                          {"asset", to_json(w.asset)},
                          {"tick", w.location.tick},
                          {"g_atom", block_to_json(w.location.c, eb.space)},
                          {"f_child", block_to_json(w.location.a, eb.space)},
                          {"certificate", to_json(w.certificate)}};
    }
    return out;
}

AccessibleEventData accessible_from_json(const Json& j) {
    try {
        AccessibleEventData d;
        d.p = vec_from_json(field(j, "p"));
        d.pbar = vec_from_json(field(j, "pbar"));
        d.d_vals = vec_from_json(field(j, "d"));
        d.n_vals = rows_from_json(field(j, "n"), "n");
        d.phi = vec_from_json(field(j, "phi"));
        if (j.contains("weight")) d.weight = rational_from_json(j.at("weight"));
        return d;
    } catch (const nlohmann::json::exception& e) {
        schema(e.what());
    }
}

InaccessibleEventData inaccessible_from_json(const Json& j) {
    try {
        InaccessibleEventData d;
        d.q = vec_from_json(field(j, "q"));
        d.qbar = vec_from_json(field(j, "qbar"));
        d.l_vals = rows_from_json(field(j, "l"), "l");
        d.r = vec_from_json(field(j, "R"));
        d.alpha = vec_from_json(field(j, "alpha"));
        d.j3 = vec_from_json(field(j, "J"));
        d.zeta3 = rows_from_json(field(j, "zeta"), "zeta");
        d.phi = vec_from_json(field(j, "phi"));
        return d;
    } catch (const nlohmann::json::exception& e) {
        schema(e.what());
    }
}

Json to_json(const AccessibleEventData& d) {
    return {{"kind", "accessible"}, {"p", to_json(d.p)},     {"pbar", to_json(d.pbar)},    {"d", to_json(d.d_vals)},
            {"n", rows_to_json(d.n_vals)}, {"phi", to_json(d.phi)}, {"weight", to_json(d.weight)}};
}

Json to_json(const InaccessibleEventData& d) {
    return {{"kind", "inaccessible"}, {"q", to_json(d.q)},         {"qbar", to_json(d.qbar)},
            {"l", rows_to_json(d.l_vals)}, {"R", to_json(d.r)},         {"alpha", to_json(d.alpha)},
            {"J", to_json(d.j3)},          {"zeta", rows_to_json(d.zeta3)}, {"phi", to_json(d.phi)}};
}

SeriesInput series_from_json(const Json& j) {
    try {
        SeriesInput in;
        if (j.contains("t_end")) in.t_end = number(j.at("t_end"));
        if (j.contains("first_level")) {
            if (!j.at("first_level").is_number_integer()) schema("first_level must be an integer");
            in.first_level = j.at("first_level").get<int>();
        }
        if (j.contains("density")) {
            for (const Json& level : array(j.at("density"), "density")) in.levels.push_back(numbers(level, "density level"));
        } else if (j.contains("c") || j.contains("phi")) {
            const Json& c = field(j, "c");
            const Json& phi = field(j, "phi");
            if (!c.is_array() || !phi.is_array() || c.size() != phi.size()) schema("c and phi need the same levels");
            for (std::size_t l = 0; l < c.size(); ++l) {
                const std::vector<double> cv = numbers(c[l], "c level");
                const std::vector<double> pv = numbers(phi[l], "phi level");
                if (cv.size() != pv.size()) schema("c and phi levels differ in length");
                std::vector<double> level(cv.size());
                for (std::size_t i = 0; i < cv.size(); ++i) level[i] = pv[i] * cv[i] * pv[i];
                in.levels.push_back(std::move(level));
            }
        }
        if (j.contains("jumps")) in.jumps = numbers(j.at("jumps"), "jumps");
        return in;
    } catch (const nlohmann::json::exception& e) {
        schema(e.what());
    }
}

Json to_json(const SeriesReport& r) {
    Json out{{"verdict", to_string(r.verdict)}, {"approximate", r.approximate}};
    if (r.integral_verdict) {
        out["integral"] = {{"verdict", to_string(*r.integral_verdict)}, {"table", r.integral_table}};
    }
    if (r.jump_verdict) out["jumps"] = {{"verdict", to_string(*r.jump_verdict)}, {"table", r.jump_table}};
    return out;
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema(e.what());
    }
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace enlarge::io
