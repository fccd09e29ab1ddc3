#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccn/common.hpp"

namespace ccn {

/// Run settings, read from a key=value file. Unknown keys are errors; every
/// field below has a key of the same name.
struct RunConfig {
    std::string dataset;
    std::string task = "classification";
    int order = 2;
    int levels = 2;
    bool use_adjacency = true;
    std::vector<int> channel_widths;  // empty = auto: 16 at level 1, doubling per level
    int contractions = 10;
    real_t lr = 1e-3;
    real_t momentum = 0.9;
    real_t lr_min = 1e-6;
    real_t lr_decay = -1.0;  // negative = auto: reach lr_min at the last step
    int epochs = 30;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> split_seeds = {0};
    int hist_depth = 10;

    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);

    std::string serialize() const;
    void validate() const;

    /// channel_widths, or the doubling default when unset.
    std::vector<int> resolved_widths() const;
    real_t resolved_lr_decay(int steps_per_epoch) const;
};

} // namespace ccn
