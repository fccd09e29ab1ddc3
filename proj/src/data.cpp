#include "ccn/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <queue>

#include "ccn/random.hpp"

namespace ccn {

void Dataset::validate() const {
    const size_t n = graphs.size();
    require(node_labels.size() == n, "node label rows do not match graph count");
    if (is_classification())
        require(class_ids.size() == n, "class ids do not match graph count");
    else
        require(targets.size() == n, "targets do not match graph count");
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

long parse_long(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const long v = std::stol(s, &pos);
        require(pos == s.size(), "trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("cannot parse integer '", s, "' in ", context);
    }
}

// Dense remap of arbitrary integer labels to 0..k-1 in sorted value order.
std::map<long, int> dense_ids(const std::vector<long>& values) {
    std::map<long, int> ids;
    for (long v : values) ids[v] = 0;
    int next = 0;
    for (auto& [v, id] : ids) id = next++;
    return ids;
}

} // namespace

Dataset load_tu_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    const std::string name = fs::path(dir).filename().string();
    require(!name.empty(), "dataset directory ", dir, " has no basename");
    auto file = [&](const std::string& suffix) {
        return (fs::path(dir) / (name + suffix)).string();
    };

    const auto indicator_lines = read_lines(file("_graph_indicator.txt"));
    const auto graph_label_lines = read_lines(file("_graph_labels.txt"));
    const auto node_label_lines = read_lines(file("_node_labels.txt"));
    const auto edge_lines = read_lines(file("_A.txt"));

    const int total_nodes = static_cast<int>(indicator_lines.size());
    require(node_label_lines.size() == indicator_lines.size(),
            "node label count does not match graph indicator count");
    const int num_graphs = static_cast<int>(graph_label_lines.size());

    // Vertex -> graph assignment; graphs must be 1..num_graphs.
    std::vector<int> graph_of(total_nodes);
    std::vector<int> local_id(total_nodes);
    std::vector<int> graph_size(num_graphs, 0);
    for (int v = 0; v < total_nodes; ++v) {
        const long gid = parse_long(indicator_lines[v], "graph indicator");
        require(gid >= 1 && gid <= num_graphs, "graph indicator ", gid, " out of range");
        graph_of[v] = static_cast<int>(gid) - 1;
        local_id[v] = graph_size[graph_of[v]]++;
    }

    std::vector<long> raw_node_labels(total_nodes);
    for (int v = 0; v < total_nodes; ++v)
        raw_node_labels[v] = parse_long(node_label_lines[v], "node labels");
    const auto node_ids = dense_ids(raw_node_labels);
    const int d = static_cast<int>(node_ids.size());

    Dataset ds;
    ds.name = name;
    ds.num_node_labels = d;
    ds.graphs.reserve(num_graphs);
    ds.node_labels.resize(num_graphs);
    for (int gi = 0; gi < num_graphs; ++gi) {
        require(graph_size[gi] > 0, "graph ", gi + 1, " has no vertices");
        ds.graphs.emplace_back(graph_size[gi], d);
        ds.node_labels[gi].resize(graph_size[gi]);
    }
    for (int v = 0; v < total_nodes; ++v) {
        const int id = node_ids.at(raw_node_labels[v]);
        ds.node_labels[graph_of[v]][local_id[v]] = id;
        ds.graphs[graph_of[v]].labels[local_id[v]][id] = 1.0;  // one-hot
    }

    // Edges arrive 1-indexed over the whole corpus, each undirected edge
    // listed in both directions.
    std::vector<std::pair<int, int>> pairs;
    for (const auto& line : edge_lines) {
        const auto comma = line.find(',');
        require(comma != std::string::npos, "malformed edge line '", line, "'");
        const long a = parse_long(line.substr(0, comma), "edge list");
        std::string second = line.substr(comma + 1);
        second.erase(0, second.find_first_not_of(' '));
        const long b = parse_long(second, "edge list");
        require(a >= 1 && a <= total_nodes && b >= 1 && b <= total_nodes,
                "dangling vertex id in edge (", a, ",", b, ")");
        pairs.emplace_back(static_cast<int>(a) - 1, static_cast<int>(b) - 1);
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [u, v] : pairs) {
        require(u != v, "self-loop at vertex ", u + 1);
        require(graph_of[u] == graph_of[v], "edge (", u + 1, ",", v + 1, ") crosses graphs");
        require(std::binary_search(pairs.begin(), pairs.end(), std::make_pair(v, u)),
                "non-symmetric edge list: (", u + 1, ",", v + 1, ") has no reverse");
        ds.graphs[graph_of[u]].set_edge(local_id[u], local_id[v]);
    }

    std::vector<long> raw_classes(num_graphs);
    for (int gi = 0; gi < num_graphs; ++gi)
        raw_classes[gi] = parse_long(graph_label_lines[gi], "graph labels");
    const auto class_ids = dense_ids(raw_classes);
    ds.num_classes = static_cast<int>(class_ids.size());
    for (int gi = 0; gi < num_graphs; ++gi)
        ds.class_ids.push_back(class_ids.at(raw_classes[gi]));

    for (const auto& g : ds.graphs) g.validate();
    ds.validate();
    return ds;
}

FeatureMatrix histogram_features(const Graph& g, const std::vector<int>& labels, int depth,
                                 int label_count) {
    require(static_cast<int>(labels.size()) == g.n, "label row count mismatch");
    for (int l : labels)
        require(l >= 0 && l < label_count, "node label ", l, " out of range 0..", label_count - 1);

    FeatureMatrix features(g.n, std::vector<real_t>(static_cast<size_t>(depth) * label_count, 0.0));
    std::vector<int> dist(g.n);
    for (int src = 0; src < g.n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[src] = 0;
        std::queue<int> frontier;
        frontier.push(src);
        std::vector<int> count_at(depth + 1, 0);
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            if (dist[u] >= depth) continue;
            for (int w = 0; w < g.n; ++w) {
                if (g.adj(u, w) == 0.0 || dist[w] >= 0) continue;
                dist[w] = dist[u] + 1;
                features[src][static_cast<size_t>(dist[w] - 1) * label_count + labels[w]] += 1.0;
                ++count_at[dist[w]];
                frontier.push(w);
            }
        }
        for (int j = 1; j <= depth; ++j) {
            if (count_at[j] == 0) continue;
            for (int c = 0; c < label_count; ++c)
                features[src][static_cast<size_t>(j - 1) * label_count + c] /= count_at[j];
        }
    }
    return features;
}

namespace {

// Largest-remainder apportionment of `total` among classes proportional to
// their sizes; ties between equal remainders break in seeded order.
std::vector<int> apportion(const std::vector<int>& class_sizes, int total, int corpus_size,
                           Rng& rng) {
    const int k = static_cast<int>(class_sizes.size());
    std::vector<int> alloc(k);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    const auto tie_order = rng.shuffled_indices(k);
    for (int c = 0; c < k; ++c) {
        const double quota = static_cast<double>(total) * class_sizes[c] / corpus_size;
        alloc[c] = static_cast<int>(std::floor(quota));
        assigned += alloc[c];
        remainders.push_back({quota - alloc[c], tie_order[c]});
    }
    std::vector<int> order(k);
    for (int c = 0; c < k; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return remainders[a] > remainders[b]; });
    for (int r = 0; assigned < total; ++r) {
        ++alloc[order[r % k]];
        ++assigned;
    }
    return alloc;
}

} // namespace

SplitPlan stratified_split(const Dataset& ds, std::uint64_t seed) {
    require(ds.is_classification(), "stratified split needs a classification dataset");
    SplitPlan plan;
    plan.seed = seed;
    std::vector<std::vector<int>> by_class(ds.num_classes);
    for (int i = 0; i < ds.size(); ++i) by_class[ds.class_ids[i]].push_back(i);
    std::vector<int> class_sizes;
    for (const auto& members : by_class) {
        require(static_cast<int>(members.size()) >= 3, "a class has only ", members.size(),
                " graphs; cannot stratify three ways");
        class_sizes.push_back(static_cast<int>(members.size()));
    }

    const int n = ds.size();
    const int n_valid = std::max(1, static_cast<int>(std::floor(0.1 * n)));
    const int n_test = std::max(1, static_cast<int>(std::floor(0.1 * n)));

    Rng rng(seed);
    auto valid_alloc = apportion(class_sizes, n_valid, n, rng);
    auto test_alloc = apportion(class_sizes, n_test, n, rng);
    for (int c = 0; c < ds.num_classes; ++c) {
        auto& members = by_class[c];
        // Keep at least one graph of every class in train.
        while (valid_alloc[c] + test_alloc[c] >= class_sizes[c])
            (valid_alloc[c] > test_alloc[c] ? valid_alloc[c] : test_alloc[c])--;
        const auto order = rng.shuffled_indices(class_sizes[c]);
        for (int r = 0; r < class_sizes[c]; ++r) {
            const int idx = members[order[r]];
            if (r < valid_alloc[c])
                plan.valid.push_back(idx);
            else if (r < valid_alloc[c] + test_alloc[c])
                plan.test.push_back(idx);
            else
                plan.train.push_back(idx);
        }
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.valid.begin(), plan.valid.end());
    std::sort(plan.test.begin(), plan.test.end());
    return plan;
}

TargetStats normalize_targets(Dataset& ds) {
    require(!ds.is_classification(), "target normalization applies to regression datasets");
    require(!ds.targets.empty(), "empty target list");
    const int dim = static_cast<int>(ds.targets[0].size());
    const real_t n = static_cast<real_t>(ds.targets.size());
    TargetStats stats;
    stats.mean.assign(dim, 0.0);
    stats.stddev.assign(dim, 0.0);
    for (const auto& row : ds.targets) {
        require(static_cast<int>(row.size()) == dim, "ragged target rows");
        for (int d = 0; d < dim; ++d) stats.mean[d] += row[d];
    }
    for (int d = 0; d < dim; ++d) stats.mean[d] /= n;
    for (const auto& row : ds.targets)
        for (int d = 0; d < dim; ++d) {
            const real_t diff = row[d] - stats.mean[d];
            stats.stddev[d] += diff * diff;
        }
    for (int d = 0; d < dim; ++d) {
        stats.stddev[d] = std::sqrt(stats.stddev[d] / n);
        require(stats.stddev[d] > 0, "target dimension ", d, " has zero variance");
    }
    for (auto& row : ds.targets)
        for (int d = 0; d < dim; ++d) row[d] = (row[d] - stats.mean[d]) / stats.stddev[d];
    return stats;
}

} // namespace ccn
