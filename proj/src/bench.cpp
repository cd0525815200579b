#include "golm/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "golm/reward.hpp"
#include "golm/rng.hpp"

namespace golm {

std::vector<int> default_bucket_boundaries() { return {0, 50, 100, 150, 200, 250}; }

int bucket_index(std::size_t move_count, const std::vector<int>& boundaries) {
    int idx = 0;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (static_cast<long long>(move_count) >= boundaries[i]) idx = static_cast<int>(i);
    }
    return idx;
}

Prediction prediction_from_response(const std::string& sample_id, const std::string& response, int size) {
    Prediction p{sample_id, std::nullopt};
    const ParseResult pr = parse_response(response, size);
    if (const auto* ok = std::get_if<ParsedResponse>(&pr)) p.move = format_vertex(ok->move, size);
    return p;
}

bool score_prediction(const std::optional<std::string>& predicted, const BenchSample& sample) {
    if (!predicted) return false;
    return std::find(sample.candidate_moves.begin(), sample.candidate_moves.end(), *predicted) !=
           sample.candidate_moves.end();
}

void EvalReport::merge(const EvalReport& other) {
    if (per_bucket.size() != other.per_bucket.size()) {
        throw Error(Errc::InvalidArgument, "cannot merge reports with different bucket layouts");
    }
    n += other.n;
    correct += other.correct;
    format_failures += other.format_failures;
    for (std::size_t i = 0; i < per_bucket.size(); ++i) {
        per_bucket[i].n += other.per_bucket[i].n;
        per_bucket[i].correct += other.per_bucket[i].correct;
    }
}

EvalReport evaluate_run(const std::vector<Prediction>& predictions, const std::vector<BenchSample>& samples,
                        const std::vector<int>& boundaries) {
    if (boundaries.empty() || !std::is_sorted(boundaries.begin(), boundaries.end()) || boundaries.front() != 0) {
        throw Error(Errc::InvalidArgument, "bucket boundaries must be ascending and start at 0");
    }
    if (predictions.size() != samples.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                              std::to_string(samples.size()) + " samples");
    }
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string id = samples[i].id.empty() ? std::to_string(i) : samples[i].id;
        if (!by_id.emplace(id, i).second) throw Error(Errc::InvalidArgument, "duplicate sample id '" + id + "'");
    }

    EvalReport report;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        BucketStats b;
        b.lower = boundaries[i];
        if (i + 1 < boundaries.size()) b.upper = boundaries[i + 1];
        report.per_bucket.push_back(b);
    }
    std::vector<bool> used(samples.size(), false);
    for (const auto& pred : predictions) {
        auto it = by_id.find(pred.sample_id);
        if (it == by_id.end()) throw Error(Errc::UnknownSampleId, "no sample with id '" + pred.sample_id + "'");
        if (used[it->second]) throw Error(Errc::InvalidArgument, "sample '" + pred.sample_id + "' predicted twice");
        used[it->second] = true;
        const BenchSample& s = samples[it->second];
        const bool ok = score_prediction(pred.move, s);
        if (!pred.move) ++report.format_failures;
        auto& bucket = report.per_bucket[static_cast<std::size_t>(bucket_index(s.prefix.moves.size(), boundaries))];
        ++report.n;
        ++bucket.n;
        if (ok) {
            ++report.correct;
            ++bucket.correct;
        }
    }
    return report;
}

nlohmann::json report_to_json(const EvalReport& r) {
    nlohmann::json buckets = nlohmann::json::array();
    for (const auto& b : r.per_bucket) {
        nlohmann::json jb{{"lower", b.lower}, {"n", b.n}, {"correct", b.correct}, {"accuracy", b.accuracy()}};
        jb["upper"] = b.upper ? nlohmann::json(*b.upper) : nlohmann::json(nullptr);
        buckets.push_back(jb);
    }
    return nlohmann::json{{"n", r.n},
                          {"correct", r.correct},
                          {"accuracy", r.accuracy()},
                          {"format_failures", r.format_failures},
                          {"per_bucket", buckets}};
}

std::string report_table(const EvalReport& r) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof line, "%-12s %8s %8s %9s\n", "moves", "n", "correct", "accuracy");
    out += line;
    for (const auto& b : r.per_bucket) {
        const std::string range =
            b.upper ? std::to_string(b.lower) + "-" + std::to_string(*b.upper - 1) : std::to_string(b.lower) + "+";
        std::snprintf(line, sizeof line, "%-12s %8zu %8zu %9.3f\n", range.c_str(), b.n, b.correct, b.accuracy());
        out += line;
    }
    std::snprintf(line, sizeof line, "%-12s %8zu %8zu %9.3f\n", "all", r.n, r.correct, r.accuracy());
    out += line;
    std::snprintf(line, sizeof line, "format failures: %zu\n", r.format_failures);
    out += line;
    return out;
}

std::string level_tag_of(const AnnotatedPosition& p) {
    auto it = p.extra.find("level");
    if (it != p.extra.end() && it->is_string()) return it->get<std::string>();
    return "all";
}

std::vector<BenchSample> build_bench(const std::vector<AnnotatedPosition>& positions,
                                     const std::vector<std::string>& level_tags, const BenchBuildOptions& opts) {
    if (level_tags.size() != positions.size()) {
        throw Error(Errc::LengthMismatch, "one level tag per position is required");
    }
    if (opts.n > positions.size()) {
        throw Error(Errc::InsufficientPositions,
                    "asked for " + std::to_string(opts.n) + " samples from " + std::to_string(positions.size()));
    }
    std::map<std::string, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < positions.size(); ++i) strata[level_tags[i]].push_back(i);

    const std::size_t k = strata.size();
    std::vector<std::size_t> chosen;
    std::size_t stratum_no = 0;
    for (auto& [tag, members] : strata) {
        const std::size_t quota = opts.n / k + (stratum_no < opts.n % k ? 1 : 0);
        if (members.size() < quota) {
            throw Error(Errc::InsufficientPositions, "stratum '" + tag + "' has " + std::to_string(members.size()) +
                                                         " positions, needs " + std::to_string(quota));
        }
        Rng rng(mix_seed(opts.seed, fnv1a64(tag)));
        std::vector<std::size_t> order = members;
        rng.shuffle(order);
        chosen.insert(chosen.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(quota));
        ++stratum_no;
    }
    std::sort(chosen.begin(), chosen.end());

    std::vector<BenchSample> out;
    for (std::size_t idx : chosen) {
        const AnnotatedPosition& p = positions[idx];
        BenchSample s;
        s.prefix = p.prefix;
        s.id = p.source_id.empty() ? std::to_string(idx) : p.source_id;
        for (const auto& c : p.candidates.candidates) {
            if (c.rank > kDefaultTopK) continue;
            if (opts.winrate_floor && c.winrate < *opts.winrate_floor && c.rank != 1) continue;
            s.candidate_moves.push_back(format_vertex(c.move, p.prefix.size));
        }
        s.bucket = bucket_index(p.prefix.moves.size(), opts.boundaries);
        s.extra["level"] = level_tags[idx];
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace golm
