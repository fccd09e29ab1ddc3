#pragma once

#include <string>
#include <vector>

#include "ccn/graph.hpp"
#include "ccn/model.hpp"

namespace ccn {

/// A graph learning corpus. For classification, targets hold class ids
/// remapped to 0..num_classes-1; for regression they hold real vectors.
struct Dataset {
    std::string name;
    std::vector<Graph> graphs;
    std::vector<std::vector<int>> node_labels;  // discrete ids 0..num_node_labels-1
    std::vector<int> class_ids;                 // classification targets
    std::vector<std::vector<real_t>> targets;   // regression targets
    int num_classes = 0;
    int num_node_labels = 0;
    int target_dim = 0;

    bool is_classification() const { return num_classes > 0; }
    int size() const { return static_cast<int>(graphs.size()); }
    void validate() const;
};

/// Reads the standard graph-kernel text distribution from `dir`:
/// <DS>_A.txt (comma separated 1-indexed edge pairs, both directions),
/// <DS>_graph_indicator.txt, <DS>_graph_labels.txt, <DS>_node_labels.txt,
/// with <DS> the directory basename. Class and node label values are
/// remapped to dense ids in sorted order.
Dataset load_tu_dataset(const std::string& dir);

/// Per-vertex base features: concatenation over j = 1..depth of the relative
/// label-frequency histogram of the vertices at shortest-path distance
/// exactly j (zero block when no vertex sits at that distance).
FeatureMatrix histogram_features(const Graph& g, const std::vector<int>& labels, int depth,
                                 int label_count);

struct SplitPlan {
    std::vector<int> train, valid, test;
    std::uint64_t seed = 0;
};

/// Stratified 80/10/10 split, deterministic per seed. Per class, valid and
/// test sizes round down and the remainder goes to train.
SplitPlan stratified_split(const Dataset& ds, std::uint64_t seed);

/// Standardizes every target dimension to mean 0, standard deviation 1
/// (population convention). Returns per-dimension statistics.
struct TargetStats {
    std::vector<real_t> mean, stddev;
};
TargetStats normalize_targets(Dataset& ds);

} // namespace ccn
