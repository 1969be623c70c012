#pragma once
#include <map>
#include <optional>
#include <string>

#include "escape/constants.hpp"
#include "escape/rate.hpp"
#include "escape/simulate.hpp"

namespace escape {

// Flat key-value experiment description with dotted sections.  Parsing is
// strict: an unknown or duplicated key is an error, values are typed.
struct ExperimentConfig {
    VolumeProfile volume;
    ScaleFunction scale;
    RateFunction rate;
    ProcessSpec process;
    SimulationPlan plan;
    std::optional<KernelBounds> kernel_bounds;  // empty -> measure from process
    std::optional<RecurrentComparability> comparability;
    RateMode mode = RateMode::Transient;
    std::string output_dir;

    // Every effective key=value pair after defaulting, for artifact
    // embedding and reproducibility.
    std::map<std::string, std::string> resolved;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace escape
