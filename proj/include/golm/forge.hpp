#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "golm/dataset.hpp"

namespace golm {

struct SampledPositions {
    std::vector<GameRecord> prefixes;  // record order, ascending cut index
    std::size_t skipped_empty = 0;
};

/// Draws per_game distinct cut indices per record uniformly from 0..L-1
/// (all of them when L <= per_game). Each record gets its own stream seeded
/// from (seed, record index), so results do not depend on batching.
SampledPositions sample_positions(const std::vector<GameRecord>& records, std::size_t per_game,
                                  std::uint64_t seed);

struct TemplateConfig {
    int variations_shown = 3;
    int pv_depth = 8;  // plies after the candidate move
    int winrate_decimals = 1;
    std::string language = "en";

    void validate() const;
};

enum class QueryMode { MoveListOnly, WithRender };

inline constexpr const char* kPredictInstruction = "Please predict the next move.";
inline constexpr const char* kCommentaryInstruction = "Please comment on the current position.";

std::string build_query(const GameRecord& prefix, QueryMode mode = QueryMode::MoveListOnly,
                        const std::string& instruction = kPredictInstruction);

// Percent text of a [0,1] fraction, rounded half-up: 0.524 -> "52.4%".
std::string format_winrate_percent(double w, int decimals = 1);

/// Four-step response built from the annotation. Throws InsufficientCandidates.
TrainingSample synth_prediction_sample(const AnnotatedPosition& p, const TemplateConfig& cfg = {},
                                       QueryMode mode = QueryMode::MoveListOnly);

/// Throws IndexOutOfRange or RejectedEmptyComment.
TrainingSample synth_commentary_sample(const CommentaryPair& pair, QueryMode mode = QueryMode::MoveListOnly);

/// Applies fn to 0..n-1 on up to `jobs` threads; results keep index order.
/// The exception of the lowest failing index is rethrown.
template <typename R>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, const std::function<R(std::size_t)>& fn) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace golm
