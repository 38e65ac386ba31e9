#pragma once

#include "limdim/rational.hpp"

#include <stdexcept>
#include <string>

namespace limdim {

/// Bad configuration or violated operation precondition. CLI exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sequence/weight combination outside a theorem's hypotheses. CLI exit code 2.
struct AdmissibilityError : ValidationError {
    explicit AdmissibilityError(const std::string& msg) : ValidationError(msg) {}
};

/// A refinement step produced no child rectangle under some parent. CLI exit code 3.
struct EmptyRefinementError : std::runtime_error {
    EmptyRefinementError(int level_index, long parent_index, std::string parent_desc)
        : std::runtime_error("empty refinement at layer " + std::to_string(level_index) +
                             ", parent #" + std::to_string(parent_index) + " (" + parent_desc + ")"),
          level_index(level_index),
          parent_index(parent_index),
          parent(std::move(parent_desc)) {}
    int level_index;
    long parent_index;
    std::string parent;
};

/// Enumeration would exceed the configured cap. CLI exit code 4.
struct ResourceCapError : std::runtime_error {
    ResourceCapError(Int required_count, Int cap)
        : std::runtime_error("enumeration of " + required_count.get_str() +
                             " points exceeds cap " + cap.get_str()),
          required(std::move(required_count)),
          cap(std::move(cap)) {}
    Int required;
    Int cap;
};

}  // namespace limdim
