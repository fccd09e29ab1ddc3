#pragma once

#include <map>
#include <string>

#include "ccn/config.hpp"
#include "ccn/tensor.hpp"

namespace ccn {

/// Self-describing binary container: magic, format version, the serialized
/// RunConfig, scalar metadata and length-prefixed named arrays. Round trips
/// are bit-identical.
struct Checkpoint {
    static constexpr std::uint32_t kVersion = 1;

    RunConfig config;
    std::int32_t epoch = 0;
    double best_metric = 0.0;
    std::map<std::string, DenseTensor> arrays;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

} // namespace ccn
