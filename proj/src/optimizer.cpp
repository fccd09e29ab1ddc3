#include "ccn/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace ccn {

OptimizerState OptimizerState::init(const CcnModel& model, real_t momentum, real_t lr,
                                    real_t lr_min, real_t lr_decay) {
    require(lr >= lr_min && lr_min >= 0, "need lr >= lr_min >= 0");
    OptimizerState s;
    s.momentum = momentum;
    s.lr = lr;
    s.lr_min = lr_min;
    s.lr_decay = lr_decay;
    for (const auto& p : model.params()) s.velocity.emplace_back(p.tensor->shape());
    return s;
}

void sgd_step(std::vector<CcnModel::ParamRef> params, const std::vector<DenseTensor>& grads,
              OptimizerState& state) {
    require(params.size() == grads.size() && params.size() == state.velocity.size(),
            "parameter, gradient and velocity lists disagree");
    for (size_t t = 0; t < params.size(); ++t) {
        DenseTensor& p = *params[t].tensor;
        DenseTensor& v = state.velocity[t];
        const DenseTensor& g = grads[t];
        require(p.same_shape(g) && p.same_shape(v), "shape mismatch for ", params[t].name);
        for (index_t i = 0; i < p.size(); ++i) {
            v[i] = state.momentum * v[i] - state.lr * g[i];
            p[i] += v[i];
        }
    }
    state.lr = std::max(state.lr - state.lr_decay, state.lr_min);
}

std::vector<DenseTensor> loss_gradients(const CcnModel& model, const Graph& g,
                                        const CompositionScheme& scheme,
                                        const FeatureMatrix& features, int target_class,
                                        real_t* loss_out) {
    Tape tape;
    std::vector<Tape::NodeId> leaves;
    const Tape::NodeId logits = build_forward(tape, model, g, scheme, features, &leaves);
    const Tape::NodeId loss = tape.softmax_cross_entropy(logits, target_class);
    if (loss_out) *loss_out = tape.value(loss)[0];
    tape.backward(loss);
    std::vector<DenseTensor> grads;
    for (Tape::NodeId id : leaves)
        grads.push_back(tape.has_grad(id) ? tape.grad(id) : DenseTensor(tape.value(id).shape()));
    return grads;
}

namespace {

real_t loss_at(const CcnModel& model, const Graph& g, const CompositionScheme& scheme,
               const FeatureMatrix& features, int target_class) {
    Tape tape;
    const Tape::NodeId logits = build_forward(tape, model, g, scheme, features, nullptr);
    return tape.value(tape.softmax_cross_entropy(logits, target_class))[0];
}

} // namespace

GradCheckReport grad_check(CcnModel& model, const Graph& g, const CompositionScheme& scheme,
                           const FeatureMatrix& features, int target_class, real_t tolerance,
                           real_t step, index_t budget) {
    const auto analytic = loss_gradients(model, g, scheme, features, target_class);
    const real_t center = loss_at(model, g, scheme, features, target_class);
    auto params = model.params();

    index_t total = 0;
    for (const auto& p : params) total += p.tensor->size();

    GradCheckReport report;
    for (size_t t = 0; t < params.size(); ++t) {
        DenseTensor& tensor = *params[t].tensor;
        index_t take = tensor.size();
        if (budget > 0) {
            take = std::max<index_t>(1, budget * tensor.size() / total);
            take = std::min(take, tensor.size());
        }
        for (index_t s = 0; s < take; ++s) {
            const index_t i = s * tensor.size() / take;  // strided, deterministic
            const real_t saved = tensor[i];
            tensor[i] = saved + step;
            const real_t up = loss_at(model, g, scheme, features, target_class);
            tensor[i] = saved - step;
            const real_t down = loss_at(model, g, scheme, features, target_class);
            tensor[i] = saved;
            const real_t slope_up = (up - center) / step;
            const real_t slope_down = (center - down) / step;
            if (std::abs(slope_up - slope_down) >
                1e-3 * std::max({real_t(1), std::abs(slope_up), std::abs(slope_down)})) {
                ++report.kinks_skipped;
                continue;
            }
            const real_t numeric = (up - down) / (2 * step);
            const real_t a = analytic[t][i];
            const real_t rel =
                std::abs(a - numeric) / std::max({real_t(1), std::abs(a), std::abs(numeric)});
            ++report.checked;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_param = params[t].name;
                report.worst_index = i;
            }
        }
    }
    report.pass = report.max_rel_error < tolerance;
    return report;
}

} // namespace ccn
