#pragma once

#include <map>
#include <optional>
#include <string>

#include "ccn/checkpoint.hpp"
#include "ccn/config.hpp"
#include "ccn/data.hpp"
#include "ccn/optimizer.hpp"

namespace ccn {

/// Dataset plus everything derived from it that training needs.
struct PreparedData {
    Dataset ds;
    std::vector<CompositionScheme> schemes;
    std::vector<FeatureMatrix> features;
    int in_channels = 0;
    int out_dim = 0;
    TargetStats stats;  // regression only

    Architecture architecture(const RunConfig& cfg) const;
};

/// Loads cfg.dataset from disk and derives schemes and histogram features.
PreparedData prepare_data(const RunConfig& cfg);
/// Same derivation for an in-memory dataset.
PreparedData prepare_data(const RunConfig& cfg, Dataset ds);

using Metrics = std::map<std::string, real_t>;

/// Forward-only pass over the listed graphs. Classification reports loss and
/// accuracy; regression reports loss (normalized MSE) plus de-normalized mae
/// and rmse.
Metrics evaluate(const CcnModel& model, const RunConfig& cfg, const PreparedData& data,
                 const std::vector<int>& indices);

struct TrainResult {
    std::uint64_t split_seed = 0;
    SplitPlan split;
    int best_epoch = 0;
    real_t best_valid_metric = 0;
    Metrics test_metrics;
    std::string metrics_text;  // line-delimited records for this split
    CcnModel best_model;
    CcnModel final_model;
    OptimizerState final_opt;
};

/// Trains one stratified split: one optimizer step per graph, seed-shuffled
/// order per epoch, model selection on the validation metric (ties to the
/// earliest epoch).
TrainResult train_split(const RunConfig& cfg, const PreparedData& data, std::uint64_t split_seed);

/// The metric used for model selection; higher is better.
real_t selection_metric(const RunConfig& cfg, const Metrics& m);

Checkpoint make_checkpoint(const RunConfig& cfg, const PreparedData& data, const CcnModel& model,
                           const OptimizerState* opt, std::uint64_t split_seed, int epoch,
                           real_t best_metric);
CcnModel model_from_checkpoint(const Checkpoint& ckpt, const PreparedData& data);

/// One metrics line: "<split_seed> <epoch> <phase> <metric> <value>".
std::string metrics_line(std::uint64_t split_seed, int epoch, const std::string& phase,
                         const std::string& metric, real_t value);

} // namespace ccn
