#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ccn/train.hpp"
#include "ccn/verify.hpp"

namespace {

int cmd_train(const std::string& config_path, const std::string& out_dir) {
    const ccn::RunConfig cfg = ccn::RunConfig::parse_file(config_path);
    const ccn::PreparedData data = ccn::prepare_data(cfg);
    std::filesystem::create_directories(out_dir);

    std::string all_metrics;
    double metric_sum = 0;
    std::cout << "dataset " << data.ds.name << ": " << data.ds.size() << " graphs, "
              << data.in_channels << " base features, " << data.out_dim
              << (cfg.task == "classification" ? " classes" : " targets") << "\n";
    for (const auto split_seed : cfg.split_seeds) {
        const ccn::TrainResult result = ccn::train_split(cfg, data, split_seed);
        all_metrics += result.metrics_text;

        const auto best_path =
            (std::filesystem::path(out_dir) / ("checkpoint_best_s" + std::to_string(split_seed) +
                                               ".ccn"))
                .string();
        const auto final_path =
            (std::filesystem::path(out_dir) / ("checkpoint_final_s" + std::to_string(split_seed) +
                                               ".ccn"))
                .string();
        ccn::make_checkpoint(cfg, data, result.best_model, nullptr, split_seed, result.best_epoch,
                             result.best_valid_metric)
            .save(best_path);
        ccn::make_checkpoint(cfg, data, result.final_model, &result.final_opt, split_seed,
                             cfg.epochs - 1, result.best_valid_metric)
            .save(final_path);

        const std::string key = cfg.task == "classification" ? "accuracy" : "rmse";
        const double test_metric = result.test_metrics.at(key);
        metric_sum += test_metric;
        std::cout << "split " << split_seed << ": best epoch " << result.best_epoch << ", test "
                  << key << " " << test_metric << ", best checkpoint " << best_path << "\n";
    }
    const auto metrics_path = (std::filesystem::path(out_dir) / "metrics.txt").string();
    std::ofstream metrics_file(metrics_path);
    metrics_file << all_metrics;
    std::cout << "mean test " << (cfg.task == "classification" ? "accuracy" : "rmse") << " over "
              << cfg.split_seeds.size() << " split(s): "
              << metric_sum / static_cast<double>(cfg.split_seeds.size()) << "\n";
    std::cout << "metrics written to " << metrics_path << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& dataset_dir,
             const std::string& split_name) {
    const ccn::Checkpoint ckpt = ccn::Checkpoint::load(checkpoint_path);
    ccn::RunConfig cfg = ckpt.config;
    if (!dataset_dir.empty()) cfg.dataset = dataset_dir;
    const ccn::PreparedData data = ccn::prepare_data(cfg);
    const ccn::CcnModel model = ccn::model_from_checkpoint(ckpt, data);

    const ccn::SplitPlan plan = ccn::stratified_split(data.ds, cfg.split_seeds.at(0));
    const std::vector<int>* indices = nullptr;
    if (split_name == "train")
        indices = &plan.train;
    else if (split_name == "valid")
        indices = &plan.valid;
    else if (split_name == "test")
        indices = &plan.test;
    else {
        std::cerr << "unknown split '" << split_name << "' (expected train|valid|test)\n";
        return 2;
    }
    const ccn::Metrics metrics = ccn::evaluate(model, cfg, data, *indices);
    std::cout.precision(17);
    for (const auto& [name, value] : metrics)
        std::cout << split_name << " " << name << " " << value << "\n";
    return 0;
}

int cmd_verify(const std::string& level_name) {
    ccn::verify::Level level;
    if (level_name == "quick")
        level = ccn::verify::Level::quick;
    else if (level_name == "full")
        level = ccn::verify::Level::full;
    else {
        std::cerr << "unknown level '" << level_name << "' (expected quick|full)\n";
        return 2;
    }
    return ccn::verify::run_all(level, std::cout) ? 0 : 1;
}

int cmd_enumerate(int order_in, int order_out) {
    if (order_in <= order_out) {
        std::cerr << "usage error: --in must exceed --out (got " << order_in << " -> " << order_out
                  << ")\n";
        return 2;
    }
    const auto specs = ccn::enumerate_contractions(order_in, order_out);
    std::map<std::string, int> by_tag;
    for (size_t i = 0; i < specs.size(); ++i) {
        std::cout << i << "\t" << specs[i].case_tag() << "\t" << specs[i].to_string() << "\n";
        ++by_tag[specs[i].case_tag()];
    }
    std::cout << specs.size() << " contractions of order " << order_in << " down to order "
              << order_out << " (";
    bool first = true;
    for (const auto& [tag, count] : by_tag) {
        std::cout << (first ? "" : ", ") << count << " of " << tag;
        first = false;
    }
    std::cout << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covariant compositional networks for graph learning"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "runs/latest";
    auto* train = app.add_subcommand("train", "Train a model from a config file");
    train->add_option("--config", config_path, "key = value run configuration")->required();
    train->add_option("--out", out_dir, "output directory for metrics and checkpoints");

    std::string checkpoint_path, dataset_dir, split_name = "test";
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset split");
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    eval->add_option("--dataset", dataset_dir, "dataset directory (defaults to the one trained on)");
    eval->add_option("--split", split_name, "train|valid|test");

    std::string level_name = "quick";
    auto* verify = app.add_subcommand("verify", "Run the covariance/invariance property suites");
    verify->add_option("--level", level_name, "quick|full");

    int order_in = 0, order_out = 0;
    auto* enumerate = app.add_subcommand("enumerate", "List the generalized contraction catalog");
    enumerate->add_option("--in", order_in, "input tensor order")->required();
    enumerate->add_option("--out", order_out, "output tensor order")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(train)) return cmd_train(config_path, out_dir);
        if (app.got_subcommand(eval)) return cmd_eval(checkpoint_path, dataset_dir, split_name);
        if (app.got_subcommand(verify)) return cmd_verify(level_name);
        if (app.got_subcommand(enumerate)) return cmd_enumerate(order_in, order_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
