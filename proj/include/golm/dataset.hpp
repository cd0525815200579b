#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "golm/candidates.hpp"
#include "golm/error.hpp"
#include "golm/record.hpp"

namespace golm {

using json = nlohmann::json;

enum class DatasetKind { AnnotatedPositions, TrainingSamples, BenchSamples, CommentaryPairs, GameRecords };

// Engine-annotated position prefix. `extra` keeps unknown JSON fields so a
// read/write cycle is lossless.
struct AnnotatedPosition {
    GameRecord prefix;
    Color to_play = Color::Black;
    CandidateList candidates;
    std::string source_id;
    json extra = json::object();

    std::size_t move_number() const { return prefix.moves.size(); }
};

struct BenchSample {
    std::string id;  // optional on the wire; defaults to the line index
    GameRecord prefix;
    std::vector<std::string> candidate_moves;
    int bucket = 0;
    json extra = json::object();
};

enum class SampleKind { Prediction, Commentary };

struct TrainingSample {
    std::string query;
    std::string response;
    SampleKind kind = SampleKind::Prediction;
    json extra = json::object();
};

struct CommentaryPair {
    GameRecord record;  // the full source record
    std::size_t move_index = 0;
    std::string comment;
    json extra = json::object();
};

void to_json(json& j, const GameRecord& r);
void from_json(const json& j, GameRecord& r);
void to_json(json& j, const AnnotatedPosition& p);
void from_json(const json& j, AnnotatedPosition& p);
void to_json(json& j, const BenchSample& s);
void from_json(const json& j, BenchSample& s);
void to_json(json& j, const TrainingSample& s);
void from_json(const json& j, TrainingSample& s);
void to_json(json& j, const CommentaryPair& c);
void from_json(const json& j, CommentaryPair& c);

bool operator==(const AnnotatedPosition& a, const AnnotatedPosition& b);
bool operator==(const BenchSample& a, const BenchSample& b);
bool operator==(const TrainingSample& a, const TrainingSample& b);
bool operator==(const CommentaryPair& a, const CommentaryPair& b);

const char* sample_kind_name(SampleKind k);

// One JSON object per line. Lines are parsed independently; a failure raises
// SchemaError carrying the 1-based line number.
template <typename T>
void write_jsonl(std::ostream& out, const std::vector<T>& records) {
    for (const auto& r : records) out << json(r).dump() << '\n';
}

template <typename T>
std::vector<T> read_jsonl(std::istream& in) {
    std::vector<T> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line).get<T>());
        } catch (const Error& e) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": " + e.what(), line_no, line);
        } catch (const json::exception& e) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line_no) + ": " + e.what(), line_no, line);
        }
    }
    return out;
}

template <typename T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
    write_jsonl(out, records);
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    return read_jsonl<T>(in);
}

// Raw JSON lines, for inputs without a fixed record type.
std::vector<json> read_json_lines(const std::filesystem::path& path);

}  // namespace golm
