#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "golm/dataset.hpp"

namespace golm {

// Lower edges of move-count buckets; the last bucket is open-ended.
std::vector<int> default_bucket_boundaries();
int bucket_index(std::size_t move_count, const std::vector<int>& boundaries);

struct Prediction {
    std::string sample_id;
    // Canonical coordinate text ("pass" for a pass); empty = format failure.
    std::optional<std::string> move;
};

// Prediction from a model response via the answer-block parser.
Prediction prediction_from_response(const std::string& sample_id, const std::string& response,
                                    int size = kDefaultBoardSize);

// Membership of the predicted coordinate in the sample's candidate set.
bool score_prediction(const std::optional<std::string>& predicted, const BenchSample& sample);

struct BucketStats {
    int lower = 0;
    std::optional<int> upper;  // exclusive; empty = open-ended
    std::size_t n = 0;
    std::size_t correct = 0;
    double accuracy() const { return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0; }
};

struct EvalReport {
    std::size_t n = 0;
    std::size_t correct = 0;
    std::size_t format_failures = 0;
    std::vector<BucketStats> per_bucket;

    double accuracy() const { return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0; }
    // Folds another shard in; bucket layouts must match.
    void merge(const EvalReport& other);
};

/// Pairs predictions with samples by id (LengthMismatch, UnknownSampleId)
/// and buckets by the prefix move count.
EvalReport evaluate_run(const std::vector<Prediction>& predictions, const std::vector<BenchSample>& samples,
                        const std::vector<int>& boundaries = default_bucket_boundaries());

nlohmann::json report_to_json(const EvalReport& r);
std::string report_table(const EvalReport& r);

struct BenchBuildOptions {
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    // Candidates below this winrate are left out of the answer set.
    std::optional<double> winrate_floor;
    std::vector<int> boundaries = default_bucket_boundaries();
};

/// Stratified sample over level tags (one tag per position, e.g. player
/// strength). Strata get equal shares, the remainder going to the earliest
/// tags in sorted order. Output keeps pool order.
/// Throws InsufficientPositions when any stratum is short.
std::vector<BenchSample> build_bench(const std::vector<AnnotatedPosition>& positions,
                                     const std::vector<std::string>& level_tags, const BenchBuildOptions& opts);

// Level tag of an annotated position: its "level" extra field, or "all".
std::string level_tag_of(const AnnotatedPosition& p);

}  // namespace golm
