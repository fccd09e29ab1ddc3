#include "ccn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ccn/random.hpp"
#include "ccn/threads.hpp"

namespace ccn {

Architecture PreparedData::architecture(const RunConfig& cfg) const {
    Architecture arch;
    arch.order = cfg.order;
    arch.levels = cfg.levels;
    arch.use_adjacency = cfg.use_adjacency;
    arch.in_channels = in_channels;
    arch.widths = cfg.resolved_widths();
    arch.contraction_cap = cfg.contractions;
    arch.out_dim = out_dim;
    return arch;
}

PreparedData prepare_data(const RunConfig& cfg) {
    require(!cfg.dataset.empty(), "config has no dataset path");
    return prepare_data(cfg, load_tu_dataset(cfg.dataset));
}

PreparedData prepare_data(const RunConfig& cfg, Dataset ds) {
    cfg.validate();
    ds.validate();
    PreparedData data;
    if (cfg.task == "classification") {
        require(ds.is_classification(), "dataset ", ds.name, " carries no class labels");
        data.out_dim = ds.num_classes;
    } else {
        require(!ds.targets.empty(), "dataset ", ds.name, " carries no regression targets");
        data.stats = normalize_targets(ds);
        data.out_dim = ds.target_dim = static_cast<int>(ds.targets[0].size());
    }
    data.in_channels = cfg.hist_depth * ds.num_node_labels;
    const int n = ds.size();
    data.schemes.resize(n);
    data.features.resize(n);
    data.ds = std::move(ds);
    parallel_for(n, [&](int i) {
        data.schemes[i] = build_scheme(data.ds.graphs[i], cfg.levels);
        data.features[i] = histogram_features(data.ds.graphs[i], data.ds.node_labels[i],
                                              cfg.hist_depth, data.ds.num_node_labels);
    });
    return data;
}

std::string metrics_line(std::uint64_t split_seed, int epoch, const std::string& phase,
                         const std::string& metric, real_t value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(value));
    return concat(split_seed, " ", epoch, " ", phase, " ", metric, " ", buf, "\n");
}

Metrics evaluate(const CcnModel& model, const RunConfig& cfg, const PreparedData& data,
                 const std::vector<int>& indices) {
    const int n = static_cast<int>(indices.size());
    require(n > 0, "cannot evaluate an empty index list");
    const bool classify = cfg.task == "classification";

    struct Row {
        real_t loss = 0;
        bool correct = false;
        real_t abs_err = 0, sq_err = 0;
    };
    std::vector<Row> rows(n);
    parallel_for(n, [&](int r) {
        const int i = indices[r];
        Tape tape;
        const Tape::NodeId logits =
            build_forward(tape, model, data.ds.graphs[i], data.schemes[i], data.features[i],
                          nullptr);
        Row row;
        if (classify) {
            const int target = data.ds.class_ids[i];
            row.loss = tape.value(tape.softmax_cross_entropy(logits, target))[0];
            const DenseTensor& z = tape.value(logits);
            int argmax = 0;
            for (index_t c = 1; c < z.size(); ++c)
                if (z[c] > z[argmax]) argmax = static_cast<int>(c);
            row.correct = argmax == target;
        } else {
            const auto& target = data.ds.targets[i];
            row.loss = tape.value(tape.mse(logits, target))[0];
            const DenseTensor& z = tape.value(logits);
            for (index_t d = 0; d < z.size(); ++d) {
                const real_t err = (z[d] - target[d]) * data.stats.stddev[d];
                row.abs_err += std::abs(err);
                row.sq_err += err * err;
            }
        }
        rows[r] = row;
    });

    Metrics m;
    real_t loss = 0;
    for (const auto& row : rows) loss += row.loss;
    m["loss"] = loss / n;
    if (classify) {
        int correct = 0;
        for (const auto& row : rows) correct += row.correct ? 1 : 0;
        m["accuracy"] = static_cast<real_t>(correct) / n;
    } else {
        real_t abs_err = 0, sq_err = 0;
        const real_t count = static_cast<real_t>(n) * data.out_dim;
        for (const auto& row : rows) {
            abs_err += row.abs_err;
            sq_err += row.sq_err;
        }
        m["mae"] = abs_err / count;
        m["rmse"] = std::sqrt(sq_err / count);
    }
    return m;
}

real_t selection_metric(const RunConfig& cfg, const Metrics& m) {
    return cfg.task == "classification" ? m.at("accuracy") : -m.at("rmse");
}

TrainResult train_split(const RunConfig& cfg, const PreparedData& data, std::uint64_t split_seed) {
    const SplitPlan split = stratified_split(data.ds, split_seed);
    require(!split.train.empty(), "empty training split");

    TrainResult result;
    result.split_seed = split_seed;
    result.split = split;

    CcnModel model = CcnModel::init(data.architecture(cfg), cfg.seed);
    {
        // Unit-RMS calibration over a fixed slice of the training split.
        std::vector<const Graph*> graphs;
        std::vector<const CompositionScheme*> schemes;
        std::vector<const FeatureMatrix*> features;
        for (size_t r = 0; r < split.train.size() && r < 8; ++r) {
            const int i = split.train[r];
            graphs.push_back(&data.ds.graphs[i]);
            schemes.push_back(&data.schemes[i]);
            features.push_back(&data.features[i]);
        }
        calibrate_init(model, graphs, schemes, features);
    }
    OptimizerState opt = OptimizerState::init(
        model, cfg.momentum, cfg.lr, cfg.lr_min,
        cfg.resolved_lr_decay(static_cast<int>(split.train.size())));

    // The shuffle stream is derived from both seeds so splits are independent.
    Rng shuffle_rng(cfg.seed * 0x9e3779b97f4a7c15ULL + split_seed + 1);

    std::string metrics;
    real_t best = 0;
    bool have_best = false;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<int> order = shuffle_rng.shuffled_indices(static_cast<int>(split.train.size()));
        for (int r : order) {
            const int i = split.train[r];
            real_t loss = 0;
            std::vector<DenseTensor> grads;
            if (cfg.task == "classification") {
                grads = loss_gradients(model, data.ds.graphs[i], data.schemes[i], data.features[i],
                                       data.ds.class_ids[i], &loss);
            } else {
                Tape tape;
                std::vector<Tape::NodeId> leaves;
                const Tape::NodeId logits = build_forward(tape, model, data.ds.graphs[i],
                                                          data.schemes[i], data.features[i],
                                                          &leaves);
                const Tape::NodeId l = tape.mse(logits, data.ds.targets[i]);
                tape.backward(l);
                for (Tape::NodeId id : leaves)
                    grads.push_back(tape.has_grad(id) ? tape.grad(id)
                                                      : DenseTensor(tape.value(id).shape()));
            }
            sgd_step(model.params(), grads, opt);
        }

        const Metrics train_m = evaluate(model, cfg, data, split.train);
        const Metrics valid_m = evaluate(model, cfg, data, split.valid);
        for (const auto& [name, value] : train_m)
            metrics += metrics_line(split_seed, epoch, "train", name, value);
        for (const auto& [name, value] : valid_m)
            metrics += metrics_line(split_seed, epoch, "valid", name, value);

        const real_t score = selection_metric(cfg, valid_m);
        if (!have_best || score > best) {  // strict: ties keep the earliest epoch
            best = score;
            have_best = true;
            result.best_epoch = epoch;
            result.best_model = model;
        }
    }
    result.best_valid_metric = best;
    result.final_model = model;
    result.final_opt = std::move(opt);

    result.test_metrics = evaluate(result.best_model, cfg, data, split.test);
    for (const auto& [name, value] : result.test_metrics)
        metrics += metrics_line(split_seed, result.best_epoch, "test", name, value);
    result.metrics_text = std::move(metrics);
    return result;
}

Checkpoint make_checkpoint(const RunConfig& cfg, const PreparedData& data, const CcnModel& model,
                           const OptimizerState* opt, std::uint64_t split_seed, int epoch,
                           real_t best_metric) {
    Checkpoint ckpt;
    ckpt.config = cfg;
    ckpt.config.split_seeds = {split_seed};
    ckpt.epoch = epoch;
    ckpt.best_metric = static_cast<double>(best_metric);
    for (const auto& p : model.params()) ckpt.arrays.emplace(p.name, *p.tensor);
    if (opt) {
        const auto params = model.params();
        for (size_t t = 0; t < params.size(); ++t)
            ckpt.arrays.emplace("opt.velocity." + params[t].name, opt->velocity[t]);
    }
    if (cfg.task == "regression") {
        ckpt.arrays.emplace("norm.mean", DenseTensor({data.out_dim}, data.stats.mean));
        ckpt.arrays.emplace("norm.stddev", DenseTensor({data.out_dim}, data.stats.stddev));
    }
    return ckpt;
}

CcnModel model_from_checkpoint(const Checkpoint& ckpt, const PreparedData& data) {
    CcnModel model = CcnModel::init(data.architecture(ckpt.config), ckpt.config.seed);
    for (auto& p : model.params()) {
        const auto it = ckpt.arrays.find(p.name);
        require(it != ckpt.arrays.end(), "checkpoint is missing array ", p.name);
        require(it->second.same_shape(*p.tensor), "checkpoint array ", p.name,
                " has the wrong shape");
        *p.tensor = it->second;
    }
    return model;
}

} // namespace ccn
