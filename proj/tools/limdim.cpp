#include "limdim/config.hpp"
#include "limdim/dimension.hpp"
#include "limdim/parallel.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>

using namespace limdim;
using nlohmann::json;

namespace {

json er_to_json(const ExactReal& x) {
    return json{{"base", rat_to_string(x.base())},
                {"exp_num", x.exponent().get_num().get_str()},
                {"exp_den", x.exponent().get_den().get_str()}};
}

json dist_to_json(const Dist& d) {
    json j;
    j["value"] = d.to_double();
    j[d.squared ? "squared_exact" : "exact"] = rat_to_string(d.v);
    return j;
}

json stats_to_json(const SequenceStats& st) {
    json j;
    j["depth"] = st.depth;
    j["h_inf"] = st.h_inf;
    j["h_liminf"] = st.h_liminf;
    j["alpha_finite"] = st.alpha_finite;
    if (st.alpha_limit) j["alpha_limit"] = *st.alpha_limit;
    j["vanishing_ok"] = st.vanishing_ok;
    if (st.h_inf_exact) j["h_inf_exact"] = rat_to_string(*st.h_inf_exact);
    if (st.alpha_finite_exact) j["alpha_finite_exact"] = rat_to_string(*st.alpha_finite_exact);
    if (!st.warnings.empty()) j["warnings"] = st.warnings;
    return j;
}

json dim_to_json(const DimensionResult& r) {
    json j;
    j["value"] = r.value;
    j["candidates"] = r.candidates;
    j["argmin"] = r.argmin;
    j["admissible"] = r.admissible;
    j["mode"] = r.mode;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

json series_to_json(const CoverSeries& s) {
    json arr = json::array();
    for (const auto& e : s.entries) {
        json row;
        row["depth"] = e.depth;
        row["radius"] = er_to_json(e.radius);
        row["count"] = e.count.get_str();
        row["log_count"] = e.log_count;
        row["neg_log_radius"] = e.neg_log_radius;
        if (e.local_slope) row["local_slope"] = *e.local_slope;
        arr.push_back(std::move(row));
    }
    return json{{"axis", s.axis}, {"entries", std::move(arr)}};
}

void write_series_csv(std::ostream& os, const CoverSeries& s) {
    os << "depth,radius_base,radius_exponent,count,log_count,neg_log_radius,local_slope\n";
    for (const auto& e : s.entries) {
        os << e.depth << "," << rat_to_string(e.radius.base()) << ","
           << e.radius.exponent().get_num().get_str() << "/"
           << e.radius.exponent().get_den().get_str() << "," << e.count.get_str() << ","
           << e.log_count << "," << e.neg_log_radius << ",";
        if (e.local_slope) os << *e.local_slope;
        os << "\n";
    }
}

void write_layers(std::ostream& os, const LayerSet& layers) {
    for (const auto& layer : layers.layers) {
        std::string radius;
        for (size_t i = 0; i < layer.radii.size(); ++i) {
            if (i) radius += "|";
            radius += rat_to_string(layer.radii[i].base()) + "^" +
                      layer.radii[i].exponent().get_num().get_str() + "/" +
                      layer.radii[i].exponent().get_den().get_str();
        }
        for (const auto& r : layer.rects)
            os << layer.level_index << "," << point_to_string(r.center) << "," << radius << ","
               << r.parent << "\n";
    }
}

double resolve_alpha(const RunConfig& rc, const SequenceStats* st) {
    if (rc.alpha) return *rc.alpha;
    if (!st) throw ValidationError("alpha requires either an explicit value or a sequence");
    if (st->alpha_limit) return *st->alpha_limit;
    return st->alpha_finite;
}

int run(int argc, char** argv) {
    CLI::App app{"liminf approximation-set dimension toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool strict = false;
    std::string format = "json";
    app.add_option("-c,--config", config_path, "JSON config path")->required();
    app.add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--threads", threads, "worker cap (0 = auto)");
    app.add_flag("--strict", strict, "fail on inadmissible parameters");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* cmd_stats = app.add_subcommand("stats", "sequence statistics h_S, alpha_S");
    auto* cmd_dim = app.add_subcommand("dim", "dimension formula value");
    auto* cmd_layers = app.add_subcommand("layers", "export the layer construction");
    auto* cmd_estimate = app.add_subcommand("estimate", "box-count estimate vs formula");
    auto* cmd_holder = app.add_subcommand("holder", "mass-distribution ratio probe");
    auto* cmd_verify = app.add_subcommand("verify", "system axioms and counting brackets");

    CLI11_PARSE(app, argc, argv);

    RunConfig rc = load_config(config_path);
    if (seed_set) rc.estimator.seed = seed;

    auto emit = [&](const json& j) {
        std::string text = j.dump(2) + "\n";
        if (rc.output.json) {
            std::ofstream out(*rc.output.json);
            out << text;
        }
        std::cout << text;
    };

    if (cmd_stats->parsed()) {
        if (!rc.has_system || !rc.has_sequence)
            throw ValidationError("stats needs system and sequence blocks");
        emit(stats_to_json(stats(rc.sequence, rc.system)));
        return 0;
    }

    if (cmd_dim->parsed()) {
        if (rc.weights.taus.empty()) throw ValidationError("dim needs weights.taus");
        std::optional<SequenceStats> st;
        if (rc.has_system && rc.has_sequence) st = stats(rc.sequence, rc.system);
        DimensionResult r;
        int n = rc.weights.n();
        if (rc.mode == "general") {
            r = dim_general(rc.weights.taus_d(), rc.weights.deltas_d(),
                            resolve_alpha(rc, st ? &*st : nullptr));
        } else if (rc.mode == "real") {
            r = dim_real(n, rc.weights.taus_d(), resolve_alpha(rc, st ? &*st : nullptr));
        } else if (rc.mode == "doubly_exponential") {
            double k = 0;
            if (rc.k) k = *rc.k;
            else if (const auto* d = std::get_if<DoublyExponentialSeq>(&rc.sequence.form))
                k = double(d->b);
            else
                throw ValidationError("doubly_exponential mode needs k or a matching sequence");
            r = dim_doubly_exponential(n, rc.weights.taus_d(), k);
        } else {
            r = dim_rynne(n, rc.weights.taus_d());
        }
        if (strict && !r.admissible) {
            json j = dim_to_json(r);
            std::cerr << "inadmissible: " << j["warnings"].dump() << "\n";
            return 2;
        }
        emit(dim_to_json(r));
        return 0;
    }

    if (cmd_layers->parsed()) {
        if (!rc.has_system || !rc.has_sequence || rc.weights.taus.empty())
            throw ValidationError("layers needs system, sequence and weights");
        NestingRule rule = parse_rule(rc.estimator.strict_containment &&
                                              rc.estimator.rule == "cantor"
                                          ? "cantor_strict"
                                          : rc.estimator.rule);
        LayerSet layers = build_layers(rc.system, rc.sequence, rc.weights,
                                       rc.depth ? rc.depth : rc.sequence.depth, rule);
        if (rc.output.layers) {
            std::ofstream out(*rc.output.layers);
            write_layers(out, layers);
        } else {
            write_layers(std::cout, layers);
        }
        return 0;
    }

    if (cmd_estimate->parsed()) {
        if (!rc.has_system || !rc.has_sequence || rc.weights.taus.empty())
            throw ValidationError("estimate needs system, sequence and weights");
        EstimateReport rep = run_estimate(rc.system, rc.sequence, rc.weights,
                                          rc.depth ? rc.depth : rc.sequence.depth,
                                          rc.estimator.axis, rc.estimator.window);
        if (rc.output.csv) {
            std::ofstream out(*rc.output.csv);
            write_series_csv(out, rep.series);
        }
        if (rc.output.plot) {
            json plot;
            plot["x"] = json::array();
            plot["y"] = json::array();
            for (const auto& e : rep.series.entries) {
                plot["x"].push_back(e.neg_log_radius);
                plot["y"].push_back(e.log_count);
            }
            std::ofstream out(*rc.output.plot);
            out << plot.dump(2) << "\n";
        }
        if (format == "csv") {
            write_series_csv(std::cout, rep.series);
            return 0;
        }
        json j;
        j["window_slope"] = rep.fit.window_slope;
        j["single_point_exponent"] = rep.fit.single_point;
        j["local_slopes"] = rep.fit.local_slopes;
        j["formula_value"] = rep.formula_value;
        j["finite_depth_formula"] = rep.finite_depth_formula;
        j["abs_error"] = rep.abs_error;
        j["alpha_finite"] = rep.alpha_finite;
        if (rep.alpha_limit) j["alpha_limit"] = *rep.alpha_limit;
        j["series"] = series_to_json(rep.series);
        if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
        emit(j);
        return 0;
    }

    if (cmd_holder->parsed()) {
        if (!rc.has_system || !rc.has_sequence || rc.weights.taus.empty())
            throw ValidationError("holder needs system, sequence and weights");
        NestingRule rule =
            rc.estimator.strict_containment ? NestingRule::CantorStrict : NestingRule::Cantor;
        LayerSet layers = build_layers(rc.system, rc.sequence, rc.weights,
                                       rc.depth ? rc.depth : rc.sequence.depth, rule);
        MeasureTree tree = assign_measure(layers);
        double s;
        if (rc.estimator.holder_s) {
            s = *rc.estimator.holder_s;
        } else {
            SequenceStats st = stats(rc.sequence, rc.system);
            DimensionResult finite =
                dim_general(rc.weights.taus_d(), rc.weights.deltas_d(), st.alpha_finite);
            s = finite.value - rc.estimator.holder_offset;
        }
        HolderReport rep = holder_probe(tree, layers, rc.system, rc.weights, s,
                                        rc.estimator.samples, rc.estimator.seed);
        json j;
        j["s"] = s;
        j["max_ratio"] = rep.max_ratio;
        j["empirical_exponent"] = rep.empirical_exponent;
        j["worst_ball"] = rep.worst_ball;
        j["samples"] = rep.samples;
        j["seed"] = rep.seed;
        emit(j);
        return 0;
    }

    if (cmd_verify->parsed()) {
        if (!rc.has_system || !rc.has_sequence)
            throw ValidationError("verify needs system and sequence blocks");
        auto verify_one = [&](int j) {
            Level level = seq_level(rc.sequence, rc.system, j);
            json entry;
            entry["level"] = level_to_string(level);
            SeparationReport sep = verify_separated(rc.system, level);
            entry["separated"] = {{"ok", sep.ok},
                                  {"min_distance", dist_to_json(sep.min_distance)},
                                  {"worst_pair", sep.worst_pair},
                                  {"points", sep.points_checked.get_str()}};
            Rng rng(rc.estimator.seed + static_cast<std::uint64_t>(j));
            MaximalityReport max = verify_maximal(rc.system, level, rc.verify.probes, rng);
            entry["maximal"] = {{"ok", max.ok},
                                {"worst_gap", dist_to_json(max.worst_gap)},
                                {"worst_probe", max.worst_probe},
                                {"probes", max.probes},
                                {"closed_ball", max.closed_ball}};
            bool level_ok = sep.ok && max.ok;
            if (rc.verify.count_trials > 0) {
                LevelWeight lw = beta_weight(rc.system, level);
                // radius window (beta^-1, r_max); empty for very coarse levels
                double lo = -lw.log_beta;
                double hi = rat_log(rc.system.factors[0].r_max);
                if (hi <= lo) {
                    entry["count_trials_skipped"] = "r_max <= beta^-1";
                } else {
                    long violations = 0;
                    for (long t = 0; t < rc.verify.count_trials; ++t) {
                        Point center = random_probe(rc.system, level, rng);
                        double u = rng.unit_double();
                        double lr = lo + (hi - lo) * (0.02 + 0.96 * u);
                        Rat r = Rat(mpq_class(std::exp(lr)));
                        if (r <= 0) continue;
                        CountReport cr =
                            count_in_ball(rc.system, level, center, ExactReal::from_rat(r));
                        if (!cr.all_within) ++violations;
                    }
                    entry["count_violations"] = violations;
                    if (violations > 0) level_ok = false;
                }
            }
            entry["ok"] = level_ok;
            return entry;
        };
        // levels are independent; merge preserves sequence order
        auto merged = parallel_map_reduce<std::vector<json>>(
            static_cast<std::size_t>(rc.sequence.depth), threads, {},
            [&](std::size_t, std::size_t lo, std::size_t hi) {
                std::vector<json> part;
                for (std::size_t idx = lo; idx < hi; ++idx)
                    part.push_back(verify_one(static_cast<int>(idx) + 1));
                return part;
            },
            [](std::vector<json> acc, std::vector<json> part) {
                for (auto& e : part) acc.push_back(std::move(e));
                return acc;
            });
        json levels = json::array();
        bool all_ok = true;
        for (auto& e : merged) {
            if (!e.at("ok").get<bool>()) all_ok = false;
            levels.push_back(std::move(e));
        }
        json j;
        j["levels"] = std::move(levels);
        j["all_ok"] = all_ok;
        emit(j);
        return all_ok ? 0 : 2;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const EmptyRefinementError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
