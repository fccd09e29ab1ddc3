#pragma once

#include "ccn/model.hpp"

namespace ccn {

/// Heavy-ball SGD state. The learning rate decays linearly after each step
/// down to lr_min.
struct OptimizerState {
    std::vector<DenseTensor> velocity;  // aligned with CcnModel::params()
    real_t momentum = 0.9;
    real_t lr = 1e-3;
    real_t lr_min = 1e-6;
    real_t lr_decay = 0.0;

    static OptimizerState init(const CcnModel& model, real_t momentum, real_t lr, real_t lr_min,
                               real_t lr_decay);
};

/// v <- momentum*v - lr*g;  p <- p + v;  lr <- max(lr - decay, lr_min).
void sgd_step(std::vector<CcnModel::ParamRef> params, const std::vector<DenseTensor>& grads,
              OptimizerState& state);

/// Gradients of the cross-entropy loss on one graph, in params() order.
std::vector<DenseTensor> loss_gradients(const CcnModel& model, const Graph& g,
                                        const CompositionScheme& scheme,
                                        const FeatureMatrix& features, int target_class,
                                        real_t* loss_out = nullptr);

struct GradCheckReport {
    real_t max_rel_error = 0.0;
    std::string worst_param;
    index_t worst_index = 0;
    index_t checked = 0;
    index_t kinks_skipped = 0;
    bool pass = false;
};

/// Central finite differences against the reverse-mode gradients on one
/// graph. budget == 0 checks every parameter; otherwise a deterministic
/// strided sample of roughly `budget` coordinates spread over all parameter
/// tensors. Relative error uses denominator max(1, |analytic|, |numeric|).
/// Coordinates whose one-sided slopes disagree sit on a ReLU kink, where
/// central differences are meaningless; they are skipped and counted.
GradCheckReport grad_check(CcnModel& model, const Graph& g, const CompositionScheme& scheme,
                           const FeatureMatrix& features, int target_class, real_t tolerance,
                           real_t step = 1e-6, index_t budget = 0);

} // namespace ccn
