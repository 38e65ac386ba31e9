#include "limdim/config.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>

namespace limdim {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& v, const char* what) {
    try {
        if (v.is_string()) return parse_rat(v.get<std::string>());
        if (v.is_number_integer()) return Rat(Int(static_cast<long>(v.get<long long>())));
        if (v.is_number_float()) return Rat(mpq_class(v.get<double>()));
    } catch (const std::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
    throw ValidationError(std::string(what) + ": expected number or rational string");
}

Int int_from_json(const json& v, const char* what) {
    if (v.is_string()) return Int(v.get<std::string>());
    if (v.is_number_integer()) return Int(static_cast<long>(v.get<long long>()));
    throw ValidationError(std::string(what) + ": expected integer");
}

SystemConfig parse_system(const json& j) {
    if (!j.contains("kind")) throw ValidationError("system.kind missing");
    std::string kind = j.at("kind").get<std::string>();
    int n = j.value("n", 1);
    SystemConfig cfg;
    if (kind == "real_lattice") {
        cfg = make_real_lattice(n);
        if (j.contains("theta")) {
            const json& t = j.at("theta");
            if (t.is_array()) {
                for (const auto& v : t) cfg.theta.fallback.push_back(rat_from_json(v, "theta"));
            } else {
                if (t.contains("default"))
                    for (const auto& v : t.at("default"))
                        cfg.theta.fallback.push_back(rat_from_json(v, "theta.default"));
                if (t.contains("per_level"))
                    for (auto it = t.at("per_level").begin(); it != t.at("per_level").end(); ++it) {
                        std::vector<Rat> row;
                        for (const auto& v : it.value())
                            row.push_back(rat_from_json(v, "theta.per_level"));
                        cfg.theta.per_level[Int(it.key())] = std::move(row);
                    }
            }
        }
    } else if (kind == "p_adic") {
        cfg = make_padic(int_from_json(j.at("p"), "system.p"), n,
                         j.value("truncation_depth", 24));
    } else if (kind == "gaussian") {
        if (n != 1) throw ValidationError("gaussian system ships with n = 1");
        cfg = make_gaussian();
    } else if (kind == "missing_digit") {
        if (n != 1) throw ValidationError("missing-digit system ships with n = 1");
        std::vector<int> digits = j.at("digits").get<std::vector<int>>();
        std::optional<Rat> anchor;
        if (j.contains("anchor")) anchor = rat_from_json(j.at("anchor"), "system.anchor");
        cfg = make_missing_digit(j.at("base").get<long>(), std::move(digits), anchor);
    } else {
        throw ValidationError("unknown system.kind: " + kind);
    }
    if (j.contains("enum_cap")) cfg.enum_cap = int_from_json(j.at("enum_cap"), "enum_cap");
    if (const char* env = std::getenv("LIMDIM_CAP")) cfg.enum_cap = Int(env);
    cfg.validate();
    return cfg;
}

Level parse_level(const json& v, const SystemConfig& cfg) {
    switch (cfg.kind) {
        case SystemKind::RealLattice: return IntLevel{int_from_json(v, "level")};
        case SystemKind::PAdic:
        case SystemKind::MissingDigit: return ExpLevel{v.get<long>()};
        case SystemKind::Gaussian: {
            if (!v.is_array() || v.size() != 2)
                throw ValidationError("gaussian level must be [re, im]");
            return GaussLevel{int_from_json(v[0], "level.re"), int_from_json(v[1], "level.im")};
        }
    }
    throw ValidationError("unknown kind");
}

SequenceSpec parse_sequence(const json& j, const SystemConfig& cfg, bool has_system) {
    SequenceSpec spec;
    std::string form = j.value("form", "explicit");
    if (form == "doubly_exponential") {
        DoublyExponentialSeq d;
        d.a = j.at("a").get<long>();
        d.b = j.at("b").get<long>();
        d.start = j.value("start", 0L);
        if (d.a < 2 || d.b < 2) throw ValidationError("doubly-exponential needs a, b >= 2");
        spec.form = d;
        spec.depth = j.at("depth").get<int>();
    } else if (form == "geometric_exponents") {
        GeometricExponentsSeq g;
        g.k1 = j.at("k1").get<long>();
        g.ratio = j.at("ratio").get<long>();
        g.start = j.value("start", 0L);
        if (g.k1 < 1 || g.ratio < 2)
            throw ValidationError("geometric exponents need k1 >= 1 and integer ratio >= 2");
        spec.form = g;
        spec.depth = j.at("depth").get<int>();
    } else if (form == "explicit") {
        if (!has_system) throw ValidationError("explicit sequences need a system block");
        ExplicitSeq e;
        for (const auto& v : j.at("levels")) e.levels.push_back(parse_level(v, cfg));
        spec.form = e;
        spec.depth = j.value("depth", static_cast<int>(e.levels.size()));
        if (spec.depth > static_cast<int>(std::get<ExplicitSeq>(spec.form).levels.size()))
            throw ValidationError("sequence depth exceeds level list");
    } else {
        throw ValidationError("unknown sequence.form: " + form);
    }
    return spec;
}

}  // namespace

NestingRule parse_rule(const std::string& name) {
    if (name == "cover") return NestingRule::Cover;
    if (name == "cantor") return NestingRule::Cantor;
    if (name == "cantor_strict") return NestingRule::CantorStrict;
    throw ValidationError("unknown nesting rule: " + name);
}

RunConfig parse_config(const json& j) {
    RunConfig rc;
    if (j.contains("system")) {
        rc.system = parse_system(j.at("system"));
        rc.has_system = true;
    }
    if (j.contains("sequence")) {
        rc.sequence = parse_sequence(j.at("sequence"), rc.system, rc.has_system);
        rc.has_sequence = true;
    }
    if (j.contains("weights")) {
        const json& w = j.at("weights");
        for (const auto& v : w.at("taus")) rc.weights.taus.push_back(rat_from_json(v, "taus"));
        if (w.contains("deltas")) {
            for (const auto& v : w.at("deltas"))
                rc.weights.deltas.push_back(DeltaExp::from_rat(rat_from_json(v, "deltas")));
        } else if (rc.has_system) {
            for (const auto& f : rc.system.factors) rc.weights.deltas.push_back(f.delta);
        } else {
            rc.weights.deltas.assign(rc.weights.taus.size(), DeltaExp::from_rat(Rat(1)));
        }
        rc.weights.validate();
    }
    rc.mode = j.value("mode", std::string("general"));
    if (rc.mode != "general" && rc.mode != "real" && rc.mode != "doubly_exponential" &&
        rc.mode != "rynne")
        throw ValidationError("unknown mode: " + rc.mode);
    rc.depth = j.value("depth", rc.has_sequence ? rc.sequence.depth : 0);
    if (j.contains("alpha")) rc.alpha = j.at("alpha").get<double>();
    if (j.contains("k")) rc.k = j.at("k").get<double>();
    if (j.contains("estimator")) {
        const json& e = j.at("estimator");
        rc.estimator.axis = e.value("axis", 1);
        rc.estimator.window = e.value("window", 3);
        rc.estimator.samples = e.value("samples", 10000L);
        rc.estimator.seed = e.value("seed", 0ULL);
        rc.estimator.strict_containment = e.value("strict_containment", false);
        rc.estimator.rule = e.value("rule", std::string("cover"));
        if (e.contains("holder_s")) rc.estimator.holder_s = e.at("holder_s").get<double>();
        rc.estimator.holder_offset = e.value("holder_offset", 0.05);
    }
    if (j.contains("verify")) {
        const json& v = j.at("verify");
        rc.verify.probes = v.value("probes", 1000L);
        rc.verify.count_trials = v.value("count_trials", 0L);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        if (o.contains("json")) rc.output.json = o.at("json").get<std::string>();
        if (o.contains("csv")) rc.output.csv = o.at("csv").get<std::string>();
        if (o.contains("layers")) rc.output.layers = o.at("layers").get<std::string>();
        if (o.contains("plot")) rc.output.plot = o.at("plot").get<std::string>();
    }
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace limdim
