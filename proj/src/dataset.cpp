#include "golm/dataset.hpp"

#include <initializer_list>

namespace golm {

namespace {

[[noreturn]] void schema_fail(const std::string& why) { throw Error(Errc::SchemaError, why); }

const json& require(const json& j, const char* key) {
    if (!j.is_object()) schema_fail("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) schema_fail(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) schema_fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

long long require_int(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_number_integer()) schema_fail(std::string("field '") + key + "' must be an integer");
    return v.get<long long>();
}

json extras_of(const json& j, std::initializer_list<const char*> known) {
    json extra = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool is_known = false;
        for (const char* k : known) {
            if (it.key() == k) {
                is_known = true;
                break;
            }
        }
        if (!is_known) extra[it.key()] = it.value();
    }
    return extra;
}

void merge_extra(json& j, const json& extra) {
    for (auto it = extra.begin(); it != extra.end(); ++it) {
        if (!j.contains(it.key())) j[it.key()] = it.value();
    }
}

int board_size_of(const json& j) {
    auto it = j.find("board_size");
    if (it == j.end()) return kDefaultBoardSize;
    if (!it->is_number_integer()) schema_fail("field 'board_size' must be an integer");
    return it->get<int>();
}

double komi_of(const json& j) {
    auto it = j.find("komi");
    if (it == j.end()) return kDefaultKomi;
    if (!it->is_number()) schema_fail("field 'komi' must be a number");
    return it->get<double>();
}

Color color_field(const json& j, const char* key) {
    const std::string s = require_string(j, key);
    if (s.size() != 1 || !color_from_symbol(s[0])) schema_fail(std::string("field '") + key + "' must be X or O");
    return *color_from_symbol(s[0]);
}

std::string symbol_string(Color c) { return std::string(1, color_symbol(c)); }

}  // namespace

const char* sample_kind_name(SampleKind k) { return k == SampleKind::Prediction ? "prediction" : "commentary"; }

// ---------------------------------------------------------------------------

void to_json(json& j, const GameRecord& r) {
    j = json{{"moves", format_move_list(r)}, {"board_size", r.size}, {"komi", r.komi}, {"source_id", r.source_id}};
    if (!r.alternation_checked) j["alternation_checked"] = false;
    if (r.black_player) j["black"] = *r.black_player;
    if (r.white_player) j["white"] = *r.white_player;
    if (r.result) j["result"] = r.result->raw;
    if (r.dropped_variations) j["dropped_variations"] = r.dropped_variations;
}

void from_json(const json& j, GameRecord& r) {
    bool alternation = true;
    if (j.contains("alternation_checked")) alternation = j.at("alternation_checked").get<bool>();
    r = parse_move_list(require_string(j, "moves"), board_size_of(j), alternation);
    r.komi = komi_of(j);
    if (j.contains("source_id")) r.source_id = require_string(j, "source_id");
    if (j.contains("black")) r.black_player = require_string(j, "black");
    if (j.contains("white")) r.white_player = require_string(j, "white");
    if (j.contains("result")) r.result = parse_sgf_result(require_string(j, "result"));
    if (j.contains("dropped_variations")) r.dropped_variations = static_cast<int>(require_int(j, "dropped_variations"));
}

void to_json(json& j, const AnnotatedPosition& p) {
    json cands = json::array();
    for (const auto& c : p.candidates.candidates) {
        json pv = json::array();
        for (const auto& v : c.pv) pv.push_back(format_vertex(v, p.prefix.size));
        cands.push_back(json{{"move", format_vertex(c.move, p.prefix.size)},
                             {"winrate", c.winrate},
                             {"pv", pv},
                             {"rank", c.rank}});
    }
    j = json{{"moves", format_move_list(p.prefix)},
             {"candidates", cands},
             {"to_play", symbol_string(p.to_play)},
             {"source_id", p.source_id},
             {"komi", p.prefix.komi}};
    if (p.prefix.size != kDefaultBoardSize) j["board_size"] = p.prefix.size;
    merge_extra(j, p.extra);
}

void from_json(const json& j, AnnotatedPosition& p) {
    const int size = board_size_of(j);
    p.prefix = parse_move_list(require_string(j, "moves"), size, true);
    p.prefix.komi = komi_of(j);
    p.to_play = color_field(j, "to_play");
    if (p.to_play != p.prefix.to_play()) schema_fail("to_play disagrees with the move list parity");
    p.source_id = require_string(j, "source_id");
    p.prefix.source_id = p.source_id;
    const json& cands = require(j, "candidates");
    if (!cands.is_array() || cands.empty()) schema_fail("'candidates' must be a non-empty array");
    p.candidates = CandidateList{p.to_play, {}};
    for (const auto& cj : cands) {
        Candidate c;
        try {
            c.move = parse_vertex(require_string(cj, "move"), size);
            const json& pv = require(cj, "pv");
            if (!pv.is_array()) schema_fail("'pv' must be an array");
            for (const auto& v : pv) {
                if (!v.is_string()) schema_fail("'pv' entries must be strings");
                c.pv.push_back(parse_vertex(v.get<std::string>(), size));
            }
        } catch (const Error& e) {
            if (e.code() == Errc::SchemaError) throw;
            schema_fail(e.what());
        }
        const json& w = require(cj, "winrate");
        if (!w.is_number()) schema_fail("'winrate' must be a number");
        c.winrate = w.get<double>();
        if (!(c.winrate >= 0.0 && c.winrate <= 1.0)) schema_fail("'winrate' outside [0,1]");
        c.rank = static_cast<int>(require_int(cj, "rank"));
        if (c.rank < 1) schema_fail("'rank' must be >= 1");
        p.candidates.candidates.push_back(std::move(c));
    }
    p.extra = extras_of(j, {"moves", "candidates", "to_play", "source_id", "komi", "board_size"});
}

void to_json(json& j, const BenchSample& s) {
    j = json{{"moves", format_move_list(s.prefix)}, {"candidates", s.candidate_moves}, {"bucket", s.bucket}};
    if (!s.id.empty()) j["id"] = s.id;
    if (s.prefix.size != kDefaultBoardSize) j["board_size"] = s.prefix.size;
    merge_extra(j, s.extra);
}

void from_json(const json& j, BenchSample& s) {
    const int size = board_size_of(j);
    s.prefix = parse_move_list(require_string(j, "moves"), size, true);
    const json& cands = require(j, "candidates");
    if (!cands.is_array() || cands.empty()) schema_fail("'candidates' must be a non-empty array");
    s.candidate_moves.clear();
    for (const auto& c : cands) {
        if (!c.is_string()) schema_fail("'candidates' entries must be strings");
        const std::string text = c.get<std::string>();
        try {
            s.candidate_moves.push_back(format_vertex(parse_vertex(text, size), size));
        } catch (const Error& e) {
            schema_fail(e.what());
        }
    }
    s.bucket = static_cast<int>(require_int(j, "bucket"));
    s.id = j.contains("id") ? require_string(j, "id") : std::string();
    s.extra = extras_of(j, {"moves", "candidates", "bucket", "id", "board_size"});
}

void to_json(json& j, const TrainingSample& s) {
    j = json{{"query", s.query}, {"response", s.response}, {"kind", sample_kind_name(s.kind)}};
    merge_extra(j, s.extra);
}

void from_json(const json& j, TrainingSample& s) {
    s.query = require_string(j, "query");
    s.response = require_string(j, "response");
    const std::string kind = require_string(j, "kind");
    if (kind == "prediction") s.kind = SampleKind::Prediction;
    else if (kind == "commentary") s.kind = SampleKind::Commentary;
    else schema_fail("unknown kind '" + kind + "'");
    s.extra = extras_of(j, {"query", "response", "kind"});
}

void to_json(json& j, const CommentaryPair& c) {
    j = json{{"moves", format_move_list(c.record)}, {"move_index", c.move_index}, {"comment", c.comment}};
    if (c.record.size != kDefaultBoardSize) j["board_size"] = c.record.size;
    merge_extra(j, c.extra);
}

void from_json(const json& j, CommentaryPair& c) {
    c.record = parse_move_list(require_string(j, "moves"), board_size_of(j), true);
    const long long idx = require_int(j, "move_index");
    if (idx < 0) schema_fail("'move_index' must be >= 0");
    c.move_index = static_cast<std::size_t>(idx);
    c.comment = require_string(j, "comment");
    c.extra = extras_of(j, {"moves", "move_index", "comment", "board_size"});
}

// ---------------------------------------------------------------------------

bool operator==(const AnnotatedPosition& a, const AnnotatedPosition& b) {
    return a.prefix.moves == b.prefix.moves && a.prefix.size == b.prefix.size && a.prefix.komi == b.prefix.komi &&
           a.to_play == b.to_play && a.candidates == b.candidates && a.source_id == b.source_id &&
           a.extra == b.extra;
}

bool operator==(const BenchSample& a, const BenchSample& b) {
    return a.id == b.id && a.prefix.moves == b.prefix.moves && a.prefix.size == b.prefix.size &&
           a.candidate_moves == b.candidate_moves && a.bucket == b.bucket && a.extra == b.extra;
}

bool operator==(const TrainingSample& a, const TrainingSample& b) {
    return a.query == b.query && a.response == b.response && a.kind == b.kind && a.extra == b.extra;
}

bool operator==(const CommentaryPair& a, const CommentaryPair& b) {
    return a.record.moves == b.record.moves && a.record.size == b.record.size && a.move_index == b.move_index &&
           a.comment == b.comment && a.extra == b.extra;
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    return read_jsonl<json>(in);
}

}  // namespace golm
