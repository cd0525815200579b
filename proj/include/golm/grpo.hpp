#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace golm {

struct GrpoParams {
    double clip_epsilon = 0.2;
    double kl_coef = 5e-4;
    double std_floor = 1e-8;
    // Rollout shape defaults of the training setup; carried for trainers,
    // not used by the objective itself.
    int group_size = 16;
    int max_response_tokens = 8192;
    int batch_size = 64;

    void validate() const;
};

struct TokenLogProbs {
    double logp_new = 0.0;
    double logp_old = 0.0;
    double logp_ref = 0.0;
};

struct ResponseRollout {
    double reward = 0.0;
    std::vector<TokenLogProbs> tokens;  // |o_i| >= 1
};

using GroupRollout = std::vector<ResponseRollout>;

/// (r_i - mean) / std with the population standard deviation; all zeros when
/// std < std_floor.
std::vector<double> group_advantages(std::span<const double> rewards, double std_floor = 1e-8);

/// Per-token k3 estimator exp(ref - new) - (ref - new) - 1, always >= 0.
std::vector<double> token_kl(std::span<const double> logp_new, std::span<const double> logp_ref);

struct GrpoReport {
    double objective = 0.0;
    // Token-mean per response, then mean over the group (same weighting as the objective).
    double mean_kl = 0.0;
    // Fraction of all tokens where the clipped branch is strictly smaller.
    double clip_fraction = 0.0;
    std::vector<double> advantages;
    // Per response, per token: surrogate minus kl_coef * kl.
    std::vector<std::vector<double>> token_terms;
};

// Clipped surrogate with the KL penalty inside the token mean.
// Throws LengthMismatch, NonFiniteInput, InvalidArgument.
GrpoReport grpo_objective(const GroupRollout& group, const GrpoParams& params = {});

}  // namespace golm
