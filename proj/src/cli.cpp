#include "golm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "golm/arena.hpp"
#include "golm/bench.hpp"
#include "golm/dataset.hpp"
#include "golm/engine.hpp"
#include "golm/forge.hpp"
#include "golm/grpo.hpp"
#include "golm/reward.hpp"

namespace fs = std::filesystem;

namespace golm {

namespace {

struct Globals {
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

// Writes JSONL to the path, or to `out` when the path is empty.
template <typename T>
void emit_jsonl(const std::string& path, const std::vector<T>& rows, std::ostream& out) {
    if (path.empty()) {
        write_jsonl(out, rows);
    } else {
        write_jsonl(fs::path(path), rows);
    }
}

void emit_json(const std::string& path, const json& j, std::ostream& out) {
    if (path.empty()) {
        out << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::IoError, "cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
}

std::vector<fs::path> sgf_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::recursive_directory_iterator(p)) {
                if (e.is_regular_file() && e.path().extension() == ".sgf") found.push_back(e.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw Error(Errc::IoError, "no such file or directory: " + in);
        }
    }
    return files;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::IoError, "cannot open " + p.string());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

// ---- ingest

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string out;
    bool allow_setup = false;
    bool skip_invalid = false;
};

void run_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<GameRecord> records;
    std::size_t skipped = 0;
    for (const auto& file : sgf_inputs(a.inputs)) {
        SgfOptions opts;
        opts.allow_setup_stones = a.allow_setup;
        try {
            GameRecord r = parse_sgf(slurp(file), opts);
            r.source_id = file.stem().string();
            records.push_back(std::move(r));
        } catch (const Error& e) {
            if (!a.skip_invalid) throw Error(e.code(), file.string() + ": " + e.what(), e.index(), e.detail());
            err << "skipped " << file.string() << ": " << e.what() << '\n';
            ++skipped;
        }
    }
    emit_jsonl(a.out, records, out);
    err << "ingested " << records.size() << " records, skipped " << skipped << '\n';
}

// ---- annotate

struct AnnotateArgs {
    std::string in;
    std::string out;
    std::string engine;
    bool mock = false;
    std::size_t per_game = 1;
    bool all_positions = false;
    int top_k = kDefaultTopK;
    int max_in_flight = 1;
    long timeout_ms = 60'000;
    bool black_perspective = false;
};

void run_annotate(const AnnotateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.mock == !a.engine.empty()) throw Error(Errc::InvalidArgument, "give exactly one of --engine or --mock");
    const auto records = read_jsonl<GameRecord>(fs::path(a.in));

    std::vector<GameRecord> prefixes;
    std::size_t empty = 0;
    if (a.all_positions) {
        for (std::size_t r = 0; r < records.size(); ++r) {
            if (records[r].moves.empty()) {
                ++empty;
                continue;
            }
            for (std::size_t k = 0; k < records[r].moves.size(); ++k) {
                GameRecord p = records[r].prefix(k);
                const std::string base = records[r].source_id.empty() ? "game" + std::to_string(r) : records[r].source_id;
                p.source_id = base + "@" + std::to_string(k);
                prefixes.push_back(std::move(p));
            }
        }
    } else {
        auto sampled = sample_positions(records, a.per_game, g.seed);
        prefixes = std::move(sampled.prefixes);
        empty = sampled.skipped_empty;
    }

    std::unique_ptr<LineChannel> channel;
    if (a.mock) {
        MockAnalysisSpec spec;
        spec.seed = g.seed;
        spec.black_perspective = a.black_perspective;
        channel = std::make_unique<MockAnalysisChannel>(spec);
    } else {
        channel = std::make_unique<SubprocessChannel>(split_command(a.engine));
    }
    AnalysisOptions opts;
    opts.timeout = Millis(a.timeout_ms);
    opts.max_in_flight = a.max_in_flight;
    opts.perspective = a.black_perspective ? WinratePerspective::Black : WinratePerspective::SideToMove;
    AnalysisSession session(std::move(channel), opts);

    const auto outcomes = session.analyze_many(prefixes, a.top_k);
    std::vector<AnnotatedPosition> rows;
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (o.error) {
            if (o.error->code() == Errc::IllegalPositionRejected) {
                err << "rejected " << prefixes[i].source_id << ": " << o.error->what() << '\n';
                ++rejected;
                continue;
            }
            throw *o.error;
        }
        AnnotatedPosition p;
        p.prefix = prefixes[i];
        p.to_play = p.prefix.to_play();
        p.candidates = *o.result;
        p.source_id = prefixes[i].source_id;
        rows.push_back(std::move(p));
    }
    emit_jsonl(a.out, rows, out);
    err << "annotated " << rows.size() << " positions (" << empty << " empty records, " << rejected
        << " rejected)\n";
}

// ---- synth

struct SynthArgs {
    std::string in;
    std::string commentary;
    std::string out;
    bool render = false;
    TemplateConfig tmpl;
};

void run_synth(const SynthArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    if (a.in.empty() && a.commentary.empty()) {
        throw Error(Errc::InvalidArgument, "nothing to do: give --in and/or --commentary");
    }
    a.tmpl.validate();
    const QueryMode mode = a.render ? QueryMode::WithRender : QueryMode::MoveListOnly;
    std::vector<TrainingSample> rows;
    if (!a.in.empty()) {
        const auto positions = read_jsonl<AnnotatedPosition>(fs::path(a.in));
        std::function<TrainingSample(std::size_t)> fn = [&](std::size_t i) {
            try {
                return synth_prediction_sample(positions[i], a.tmpl, mode);
            } catch (const Error& e) {
                throw Error(e.code(), "position on line " + std::to_string(i + 1) + ": " + e.what(), i + 1);
            }
        };
        rows = parallel_map(positions.size(), g.jobs, fn);
    }
    std::size_t rejected = 0;
    if (!a.commentary.empty()) {
        const auto pairs = read_jsonl<CommentaryPair>(fs::path(a.commentary));
        std::function<std::optional<TrainingSample>(std::size_t)> fn =
            [&](std::size_t i) -> std::optional<TrainingSample> {
            try {
                return synth_commentary_sample(pairs[i], mode);
            } catch (const Error& e) {
                if (e.code() == Errc::RejectedEmptyComment) return std::nullopt;
                throw Error(e.code(), "commentary on line " + std::to_string(i + 1) + ": " + e.what(), i + 1);
            }
        };
        for (auto& s : parallel_map(pairs.size(), g.jobs, fn)) {
            if (s) rows.push_back(std::move(*s));
            else ++rejected;
        }
    }
    emit_jsonl(a.out, rows, out);
    err << "synthesized " << rows.size() << " samples (" << rejected << " empty comments rejected)\n";
}

// ---- reward

struct RewardArgs {
    std::string in;
    std::string annotations;
    std::string out;
    std::string mode = "full";
    double alpha1 = 0.1, alpha2 = 0.2, beta1 = 10, beta2 = 10, c1 = 0.8, c2 = 0.6, c3 = 0.4;
};

void run_reward(const RewardArgs& a, std::ostream& out, std::ostream& err) {
    const RewardParams params(a.alpha1, a.alpha2, a.beta1, a.beta2, a.c1, a.c2, a.c3, parse_reward_mode(a.mode));
    const auto responses = read_json_lines(fs::path(a.in));
    const auto positions = read_jsonl<AnnotatedPosition>(fs::path(a.annotations));
    // A "ref" field (annotation line index from 0, or a source_id) picks the
    // annotation; without refs the two files are aligned line by line.
    std::map<std::string, std::size_t> by_source;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!positions[i].source_id.empty()) by_source.emplace(positions[i].source_id, i);
    }
    const bool any_ref = std::any_of(responses.begin(), responses.end(),
                                     [](const json& r) { return r.is_object() && r.contains("ref"); });
    if (!any_ref && responses.size() != positions.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(responses.size()) + " responses for " +
                                              std::to_string(positions.size()) + " annotations");
    }
    std::vector<json> rows;
    double total = 0.0;
    for (std::size_t i = 0; i < responses.size(); ++i) {
        const json& r = responses[i];
        const std::size_t line = i + 1;
        if (!r.is_object() || !r.contains("response") || !r["response"].is_string()) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": missing string field 'response'", line);
        }
        std::size_t target = i;
        if (r.contains("ref")) {
            const json& ref = r["ref"];
            if (ref.is_number_unsigned() && ref.get<std::size_t>() < positions.size()) {
                target = ref.get<std::size_t>();
            } else if (ref.is_string() && by_source.count(ref.get<std::string>())) {
                target = by_source.at(ref.get<std::string>());
            } else {
                throw Error(Errc::UnknownSampleId, "line " + std::to_string(line) + ": unresolvable ref " + ref.dump(),
                            line);
            }
        } else if (any_ref) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": missing 'ref'", line);
        }
        const auto& p = positions[target];
        const auto outcome =
            compute_reward(parse_response(r["response"].get<std::string>(), p.prefix.size), p.candidates, params);
        json row{{"line", i + 1},
                 {"reward", outcome.reward},
                 {"format_ok", outcome.format_ok},
                 {"winrate_penalty", outcome.winrate_penalty},
                 {"gap_penalty", outcome.gap_penalty}};
        row["rank"] = outcome.rank ? json(*outcome.rank) : json(nullptr);
        row["format_error"] = outcome.format_error ? json(outcome.format_error->describe()) : json(nullptr);
        if (!p.source_id.empty()) row["source_id"] = p.source_id;
        rows.push_back(std::move(row));
        total += outcome.reward;
    }
    emit_jsonl(a.out, rows, out);
    err << "scored " << rows.size() << " responses, mean reward "
        << (rows.empty() ? 0.0 : total / static_cast<double>(rows.size())) << '\n';
}

// ---- grpo

struct GrpoArgs {
    std::string in;
    std::string out;
    GrpoParams params;
};

double number_at(const json& j, const char* key, std::size_t line) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
        throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": missing number '" + key + "'", line);
    }
    return j[key].get<double>();
}

// {"rewards": [r_1..r_G], "tokens": [[{"new", "old", "ref"}, ...] per response]}
GroupRollout parse_group(const json& gj, std::size_t line) {
    auto fail = [&](const std::string& why) {
        throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": " + why, line);
    };
    if (!gj.is_object() || !gj.contains("rewards") || !gj["rewards"].is_array()) fail("missing array 'rewards'");
    if (!gj.contains("tokens") || !gj["tokens"].is_array()) fail("missing array 'tokens'");
    const json& rewards = gj["rewards"];
    const json& tokens = gj["tokens"];
    if (rewards.size() != tokens.size()) {
        throw Error(Errc::LengthMismatch,
                    "line " + std::to_string(line) + ": " + std::to_string(rewards.size()) + " rewards for " +
                        std::to_string(tokens.size()) + " token lists",
                    line);
    }
    GroupRollout group;
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        if (!rewards[i].is_number()) fail("non-numeric reward");
        if (!tokens[i].is_array()) fail("token list must be an array");
        ResponseRollout r;
        r.reward = rewards[i].get<double>();
        for (const auto& t : tokens[i]) {
            r.tokens.push_back({number_at(t, "new", line), number_at(t, "old", line), number_at(t, "ref", line)});
        }
        group.push_back(std::move(r));
    }
    return group;
}

void run_grpo(const GrpoArgs& a, std::ostream& out) {
    a.params.validate();
    const auto groups = read_json_lines(fs::path(a.in));
    json reports = json::array();
    double sum = 0.0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const std::size_t line = gi + 1;
        const GroupRollout group = parse_group(groups[gi], line);
        GrpoReport rep;
        try {
            rep = grpo_objective(group, a.params);
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what(), line);
        }
        sum += rep.objective;
        reports.push_back({{"objective", rep.objective},
                           {"mean_kl", rep.mean_kl},
                           {"clip_fraction", rep.clip_fraction},
                           {"advantages", rep.advantages}});
    }
    const json summary{{"groups", reports},
                       {"mean_objective", groups.empty() ? 0.0 : sum / static_cast<double>(groups.size())},
                       {"clip_epsilon", a.params.clip_epsilon},
                       {"kl_coef", a.params.kl_coef}};
    emit_json(a.out, summary, out);
}

// ---- bench

struct BenchBuildArgs {
    std::string in;
    std::string out;
    std::size_t n = 1000;
    std::optional<double> winrate_floor;
    std::vector<int> buckets = default_bucket_boundaries();
};

void run_bench_build(const BenchBuildArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    const auto positions = read_jsonl<AnnotatedPosition>(fs::path(a.in));
    std::vector<std::string> tags;
    for (const auto& p : positions) tags.push_back(level_tag_of(p));
    BenchBuildOptions opts;
    opts.n = a.n;
    opts.seed = g.seed;
    opts.winrate_floor = a.winrate_floor;
    opts.boundaries = a.buckets;
    const auto samples = build_bench(positions, tags, opts);
    emit_jsonl(a.out, samples, out);
    err << "built " << samples.size() << " bench samples\n";
}

struct BenchEvalArgs {
    std::string predictions;
    std::string samples;
    std::string out;
    std::vector<int> buckets = default_bucket_boundaries();
};

void run_bench_eval(const BenchEvalArgs& a, std::ostream& out) {
    auto samples = read_jsonl<BenchSample>(fs::path(a.samples));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].id.empty()) samples[i].id = std::to_string(i);
    }
    const auto lines = read_json_lines(fs::path(a.predictions));
    std::vector<Prediction> preds;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const json& j = lines[i];
        const std::size_t line = i + 1;
        if (!j.is_object()) throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": not an object", line);
        Prediction p;
        p.sample_id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : std::to_string(i);
        if (j.contains("response") && j["response"].is_string()) {
            p = prediction_from_response(p.sample_id, j["response"].get<std::string>());
        } else if (j.contains("move") && j["move"].is_string()) {
            try {
                p.move = format_vertex(parse_vertex(j["move"].get<std::string>()));
            } catch (const Error&) {
                p.move.reset();  // unparseable coordinate counts as a format failure
            }
        } else if (!(j.contains("move") && j["move"].is_null())) {
            throw Error(Errc::SchemaError, "line " + std::to_string(line) + ": needs 'move' or 'response'", line);
        }
        preds.push_back(std::move(p));
    }
    const EvalReport rep = evaluate_run(preds, samples, a.buckets);
    out << report_table(rep);
    if (!a.out.empty()) emit_json(a.out, report_to_json(rep), out);
}

// ---- arena

struct ArenaArgs {
    std::vector<std::string> engines;  // id=command
    bool mock_family = false;
    int games_per_pair = 40;
    int size = 9;
    double komi = kDefaultKomi;
    std::optional<std::size_t> move_cap;
    long gtp_timeout_ms = 60'000;
    std::string out_dir;
};

void run_arena(const ArenaArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
    std::vector<EngineEntry> engines;
    for (const auto& spec : a.engines) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw Error(Errc::InvalidArgument, "engine must be given as id=command: " + spec);
        }
        const auto argv = split_command(spec.substr(eq + 1));
        engines.push_back({spec.substr(0, eq), [argv](std::uint64_t) -> std::unique_ptr<LineChannel> {
                               return std::make_unique<SubprocessChannel>(argv);
                           }});
    }
    if (a.mock_family) {
        for (int i = 0; i < static_cast<int>(std::size(kEpsilonFamily)); ++i) {
            engines.push_back({"eps-" + std::to_string(i), [i](std::uint64_t seed) -> std::unique_ptr<LineChannel> {
                                   return std::make_unique<MockGtpChannel>(epsilon_family_member(i, seed));
                               }});
        }
    }
    TournamentConfig cfg;
    cfg.game.size = a.size;
    cfg.game.komi = a.komi;
    cfg.game.move_cap = a.move_cap;
    cfg.games_per_pair = a.games_per_pair;
    cfg.seed = g.seed;
    cfg.gtp.command_timeout = Millis(a.gtp_timeout_ms);
    cfg.gtp.genmove_timeout = Millis(a.gtp_timeout_ms);
    const auto res = run_tournament(engines, cfg);
    for (const auto& s : res.skipped) err << "skipped pair " << s << '\n';

    if (a.out_dir.empty()) {
        out << json{{"elo", elo_to_json(res.elo)}, {"matrix", matrix_to_json(res.matrix)}}.dump(2) << '\n';
        return;
    }
    fs::create_directories(a.out_dir);
    emit_json((fs::path(a.out_dir) / "elo.json").string(), elo_to_json(res.elo), out);
    emit_json((fs::path(a.out_dir) / "matrix.json").string(), matrix_to_json(res.matrix), out);
    std::vector<json> games;
    for (const auto& m : res.games) games.push_back(match_to_json(m));
    write_jsonl(fs::path(a.out_dir) / "games.jsonl", games);
    err << "played " << res.games.size() << " games\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Go language-model data and evaluation toolkit", "golm"};
    app.set_config("--config", "", "TOML/INI config file; [subcommand] sections hold per-stage keys");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for parallel stages")->check(CLI::PositiveNumber);

    std::function<void()> action;

    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "SGF files or directories to game-record JSONL");
    ingest->add_option("--in", ia.inputs, "SGF file or directory (repeatable)")->required();
    ingest->add_option("--out", ia.out, "Output JSONL (default stdout)");
    ingest->add_flag("--allow-setup", ia.allow_setup, "Turn AB/AW setup stones into pseudo-moves");
    ingest->add_flag("--skip-invalid", ia.skip_invalid, "Skip unreadable games instead of failing");
    ingest->callback([&] { action = [&] { run_ingest(ia, out, err); }; });

    AnnotateArgs aa;
    auto* annotate = app.add_subcommand("annotate", "Sample positions and annotate them with an analysis engine");
    annotate->add_option("--in", aa.in, "Game-record JSONL")->required();
    annotate->add_option("--out", aa.out, "Output annotated-position JSONL (default stdout)");
    annotate->add_option("--engine", aa.engine, "Analysis engine command line");
    annotate->add_flag("--mock", aa.mock, "Use the built-in deterministic mock engine");
    annotate->add_option("--per-game", aa.per_game, "Positions sampled per game")->check(CLI::PositiveNumber);
    annotate->add_flag("--all-positions", aa.all_positions, "Annotate every prefix instead of sampling");
    annotate->add_option("--top-k", aa.top_k, "Candidates kept per position")->check(CLI::Range(1, 361));
    annotate->add_option("--max-in-flight", aa.max_in_flight, "Pipelined requests")->check(CLI::Range(1, 1024));
    annotate->add_option("--timeout-ms", aa.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
    annotate->add_flag("--black-perspective", aa.black_perspective, "Engine reports winrates for Black");
    annotate->callback([&] { action = [&] { run_annotate(aa, g, out, err); }; });

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Annotated positions and commentary to training samples");
    synth->add_option("--in", sa.in, "Annotated-position JSONL");
    synth->add_option("--commentary", sa.commentary, "Commentary-pair JSONL");
    synth->add_option("--out", sa.out, "Output training-sample JSONL (default stdout)");
    synth->add_flag("--render", sa.render, "Append the rendered board to each query");
    synth->add_option("--variations", sa.tmpl.variations_shown, "Variations shown per response");
    synth->add_option("--pv-depth", sa.tmpl.pv_depth, "Plies shown after each candidate");
    synth->add_option("--decimals", sa.tmpl.winrate_decimals, "Winrate decimals");
    synth->add_option("--language", sa.tmpl.language, "Template language tag");
    synth->callback([&] { action = [&] { run_synth(sa, g, out, err); }; });

    std::string render_moves;
    int render_size = kDefaultBoardSize;
    auto* render = app.add_subcommand("render", "Print the board after a move list as a nested integer array");
    render->add_option("moves", render_moves, "Move list such as \"1.X-D16 2.O-D4\"")->required();
    render->add_option("--size", render_size, "Board size")->check(CLI::Range(2, kMaxBoardSize));
    render->callback([&] {
        action = [&] {
            const GameRecord r = parse_move_list(render_moves, render_size);
            out << format_grid(render_2d(replay(r.moves, {}, r.size).board)) << '\n';
        };
    });

    RewardArgs ra;
    auto* reward = app.add_subcommand("reward", "Score model responses against annotations");
    reward->add_option("--in", ra.in, "Response JSONL (objects with a 'response' string)")->required();
    reward->add_option("--annotations", ra.annotations, "Annotated-position JSONL, line-aligned")->required();
    reward->add_option("--out", ra.out, "Output reward JSONL (default stdout)");
    reward->add_option("--mode", ra.mode, "full, top1, top3 or tier");
    reward->add_option("--alpha1", ra.alpha1);
    reward->add_option("--alpha2", ra.alpha2);
    reward->add_option("--beta1", ra.beta1);
    reward->add_option("--beta2", ra.beta2);
    reward->add_option("--c1", ra.c1);
    reward->add_option("--c2", ra.c2);
    reward->add_option("--c3", ra.c3);
    reward->callback([&] { action = [&] { run_reward(ra, out, err); }; });

    GrpoArgs ga;
    auto* grpo = app.add_subcommand("grpo", "Group objective report for rollout JSONL");
    grpo->add_option("--in", ga.in, "One group per line: {\"rewards\": [...], \"tokens\": [[{new, old, ref}]]}")
        ->required();
    grpo->add_option("--out", ga.out, "Output JSON (default stdout)");
    grpo->add_option("--clip-epsilon", ga.params.clip_epsilon);
    grpo->add_option("--kl-coef", ga.params.kl_coef);
    grpo->add_option("--std-floor", ga.params.std_floor);
    grpo->callback([&] { action = [&] { run_grpo(ga, out); }; });

    auto* bench = app.add_subcommand("bench", "Build or evaluate a next-move benchmark");
    bench->require_subcommand(1);
    BenchBuildArgs bb;
    auto* bbuild = bench->add_subcommand("build", "Stratified benchmark from annotated positions");
    bbuild->add_option("--in", bb.in, "Annotated-position JSONL")->required();
    bbuild->add_option("--out", bb.out, "Output bench-sample JSONL (default stdout)");
    bbuild->add_option("--n", bb.n, "Number of samples")->check(CLI::PositiveNumber);
    bbuild->add_option("--winrate-floor", bb.winrate_floor, "Drop non-best candidates below this winrate")
        ->check(CLI::Range(0.0, 1.0));
    bbuild->add_option("--buckets", bb.buckets, "Move-count bucket lower edges")->delimiter(',');
    bbuild->callback([&] { action = [&] { run_bench_build(bb, g, out, err); }; });
    BenchEvalArgs be;
    auto* beval = bench->add_subcommand("eval", "Accuracy report for predictions against bench samples");
    beval->add_option("--predictions", be.predictions, "Prediction JSONL ({id, move} or {id, response})")
        ->required();
    beval->add_option("--samples", be.samples, "Bench-sample JSONL")->required();
    beval->add_option("--out", be.out, "Write the JSON report here");
    beval->add_option("--buckets", be.buckets, "Move-count bucket lower edges")->delimiter(',');
    beval->callback([&] { action = [&] { run_bench_eval(be, out); }; });

    ArenaArgs ar;
    auto* arena = app.add_subcommand("arena", "Round-robin GTP tournament with ELO ratings");
    arena->add_option("--engine", ar.engines, "id=command (repeatable)");
    arena->add_flag("--mock-family", ar.mock_family, "Add the three built-in strength-ordered mocks");
    arena->add_option("--games-per-pair", ar.games_per_pair, "Even number of games per pair");
    arena->add_option("--size", ar.size, "Board size")->check(CLI::Range(2, kMaxBoardSize));
    arena->add_option("--komi", ar.komi, "Komi");
    arena->add_option("--move-cap", ar.move_cap, "Move cap (default 2*size^2)");
    arena->add_option("--gtp-timeout-ms", ar.gtp_timeout_ms, "Per-command timeout")->check(CLI::PositiveNumber);
    arena->add_option("--out-dir", ar.out_dir, "Directory for elo.json, matrix.json and games.jsonl");
    arena->callback([&] { action = [&] { run_arena(ar, g, out, err); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (action) action();
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_engine_error(e.code()) ? kExitEngine : kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace golm
