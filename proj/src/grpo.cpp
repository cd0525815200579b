#include "golm/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "golm/error.hpp"

namespace golm {

namespace {

// Mean as first + mean of offsets: exact for constant inputs.
double shifted_mean(const std::vector<double>& v) {
    const double base = v.front();
    double acc = 0.0;
    for (double x : v) acc += x - base;
    return base + acc / static_cast<double>(v.size());
}

}  // namespace

void GrpoParams::validate() const {
    if (!(clip_epsilon > 0.0)) throw Error(Errc::InvalidArgument, "clip_epsilon must be > 0");
    if (!(kl_coef >= 0.0)) throw Error(Errc::InvalidArgument, "kl_coef must be >= 0");
    if (!(std_floor >= 0.0)) throw Error(Errc::InvalidArgument, "std_floor must be >= 0");
}

namespace {

struct Spread {
    std::vector<double> dev;  // r_i - mean
    double sd = 0.0;
};

// Deviations are taken against the first reward before averaging, so an
// exactly representable shift of every reward leaves them bit-identical.
Spread spread_of(std::span<const double> rewards) {
    Spread s;
    const std::size_t g = rewards.size();
    if (g == 0) return s;
    std::vector<double> delta(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        delta[i] = rewards[i] - rewards[0];
        acc += delta[i];
    }
    const double centre = acc / static_cast<double>(g);
    double var = 0.0;
    s.dev.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        s.dev[i] = delta[i] - centre;
        var += s.dev[i] * s.dev[i];
    }
    s.sd = std::sqrt(var / static_cast<double>(g));
    return s;
}

bool degenerate(double sd, double std_floor) { return !(sd >= std_floor) || sd == 0.0; }

}  // namespace

std::vector<double> group_advantages(std::span<const double> rewards, double std_floor) {
    std::vector<double> adv(rewards.size(), 0.0);
    const Spread s = spread_of(rewards);
    if (degenerate(s.sd, std_floor)) return adv;
    for (std::size_t i = 0; i < adv.size(); ++i) adv[i] = s.dev[i] / s.sd;
    return adv;
}

std::vector<double> token_kl(std::span<const double> logp_new, std::span<const double> logp_ref) {
    if (logp_new.size() != logp_ref.size()) {
        throw Error(Errc::LengthMismatch, "logp_new has " + std::to_string(logp_new.size()) +
                                              " entries, logp_ref has " + std::to_string(logp_ref.size()));
    }
    std::vector<double> out(logp_new.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const double d = logp_ref[t] - logp_new[t];
        // expm1(d) - d keeps precision near d = 0; clamp guards the last ulp
        out[t] = std::max(0.0, std::expm1(d) - d);
    }
    return out;
}

GrpoReport grpo_objective(const GroupRollout& group, const GrpoParams& params) {
    params.validate();
    if (group.empty()) throw Error(Errc::InvalidArgument, "empty group");
    std::vector<double> rewards;
    for (std::size_t i = 0; i < group.size(); ++i) {
        const auto& resp = group[i];
        if (resp.tokens.empty()) {
            throw Error(Errc::LengthMismatch, "response " + std::to_string(i) + " has no tokens", i + 1);
        }
        if (!std::isfinite(resp.reward)) throw Error(Errc::NonFiniteInput, "non-finite reward", i + 1);
        for (const auto& tok : resp.tokens) {
            if (!std::isfinite(tok.logp_new) || !std::isfinite(tok.logp_old) || !std::isfinite(tok.logp_ref)) {
                throw Error(Errc::NonFiniteInput, "non-finite log-probability in response " + std::to_string(i), i + 1);
            }
        }
        rewards.push_back(resp.reward);
    }

    GrpoReport report;
    report.advantages = group_advantages(rewards, params.std_floor);
    const double lo = 1.0 - params.clip_epsilon;
    const double hi = 1.0 + params.clip_epsilon;
    const std::size_t g = group.size();

    // min(r*A, clip(r)*A) = A * h(r), with h picking the smaller factor for
    // A >= 0 and the larger one for A < 0. scale[i] is the token mean of h.
    std::vector<double> scale(g, 0.0);
    std::size_t clipped = 0;
    std::size_t total_tokens = 0;
    double kl_sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        const auto& toks = group[i].tokens;
        const double a = report.advantages[i];
        std::vector<double> lp_new;
        std::vector<double> lp_ref;
        for (const auto& t : toks) {
            lp_new.push_back(t.logp_new);
            lp_ref.push_back(t.logp_ref);
        }
        const std::vector<double> kl = token_kl(lp_new, lp_ref);
        std::vector<double> terms(toks.size());
        std::vector<double> factors(toks.size());
        for (std::size_t t = 0; t < toks.size(); ++t) {
            const double ratio = std::exp(toks[t].logp_new - toks[t].logp_old);
            const double bounded = std::clamp(ratio, lo, hi);
            factors[t] = a >= 0.0 ? std::min(ratio, bounded) : std::max(ratio, bounded);
            if (bounded * a < ratio * a) ++clipped;
            terms[t] = std::min(ratio * a, bounded * a) - params.kl_coef * kl[t];
        }
        scale[i] = shifted_mean(factors);
        kl_sum += shifted_mean(kl);
        total_tokens += toks.size();
        report.token_terms.push_back(std::move(terms));
    }
    const double gd = static_cast<double>(g);
    report.mean_kl = kl_sum / gd;
    report.clip_fraction = static_cast<double>(clipped) / static_cast<double>(total_tokens);

    // sum_i A_i * scale_i. For a non-degenerate group A_i = dev_i / sd, and
    // since the deviations sum to zero this equals
    // sum_i dev_i * (scale_i - mean(scale)) / sd, which is exactly zero
    // whenever every scale_i is equal (e.g. all ratios 1).
    double surrogate = 0.0;
    const Spread spread = spread_of(rewards);
    if (!degenerate(spread.sd, params.std_floor)) {
        const double scale_mean = shifted_mean(scale);
        for (std::size_t i = 0; i < g; ++i) surrogate += spread.dev[i] * (scale[i] - scale_mean);
        surrogate /= spread.sd;
    }
    report.objective = surrogate / gd - params.kl_coef * report.mean_kl;
    return report;
}

}  // namespace golm
