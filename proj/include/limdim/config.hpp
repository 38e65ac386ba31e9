#pragma once

#include "limdim/construction.hpp"
#include "limdim/estimator.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace limdim {

struct EstimatorOptions {
    int axis = 1;
    int window = 3;
    long samples = 10000;
    std::uint64_t seed = 0;
    bool strict_containment = false;
    std::string rule = "cover";  // cover | cantor | cantor_strict
    std::optional<double> holder_s;
    double holder_offset = 0.05;  // s = finite-depth formula - offset when holder_s unset
};

struct VerifyOptions {
    long probes = 1000;
    long count_trials = 0;  // random count_in_ball trials per level
};

struct OutputPaths {
    std::optional<std::string> json, csv, layers, plot;
};

struct RunConfig {
    SystemConfig system;
    bool has_system = false;
    SequenceSpec sequence;
    bool has_sequence = false;
    WeightVector weights;
    std::string mode = "general";  // general | real | doubly_exponential | rynne
    int depth = 0;                 // construction depth; defaults to sequence depth
    std::optional<double> alpha;   // explicit alpha override for dim
    std::optional<double> k;       // explicit k for doubly_exponential mode
    EstimatorOptions estimator;
    VerifyOptions verify;
    OutputPaths output;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

NestingRule parse_rule(const std::string& name);

}  // namespace limdim
