#include "golm/forge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "golm/rng.hpp"

namespace golm {

SampledPositions sample_positions(const std::vector<GameRecord>& records, std::size_t per_game,
                                  std::uint64_t seed) {
    if (per_game == 0) throw Error(Errc::InvalidArgument, "per_game must be at least 1");
    SampledPositions out;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const GameRecord& rec = records[r];
        const std::size_t len = rec.moves.size();
        if (len == 0) {
            ++out.skipped_empty;
            continue;
        }
        std::vector<std::size_t> idx(len);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const std::size_t take = std::min(per_game, len);
        // partial Fisher-Yates: the first `take` slots are a uniform draw
        Rng rng(mix_seed(seed, r));
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(len - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(take);
        std::sort(idx.begin(), idx.end());
        for (std::size_t cut : idx) {
            GameRecord p = rec.prefix(cut);
            const std::string base = rec.source_id.empty() ? "game" + std::to_string(r) : rec.source_id;
            p.source_id = base + "@" + std::to_string(cut);
            out.prefixes.push_back(std::move(p));
        }
    }
    return out;
}

void TemplateConfig::validate() const {
    if (variations_shown < 1) throw Error(Errc::InvalidArgument, "variations_shown must be at least 1");
    if (pv_depth < 0) throw Error(Errc::InvalidArgument, "pv_depth must be non-negative");
    if (winrate_decimals < 0 || winrate_decimals > 6) {
        throw Error(Errc::InvalidArgument, "winrate_decimals must be in 0..6");
    }
    if (language != "en") throw Error(Errc::InvalidArgument, "only the 'en' template is available");
}

std::string build_query(const GameRecord& prefix, QueryMode mode, const std::string& instruction) {
    std::string q = "Given the Go game move list below: \n";
    if (prefix.moves.empty()) {
        q += "(empty)\nBlack opens the game.\n";
    } else {
        q += format_move_list(prefix) + "\n";
    }
    if (mode == QueryMode::WithRender) {
        const Board b = replay(prefix.moves, {}, prefix.size).board;
        q += "Current board state:\n" + format_grid(render_2d(b)) + "\n";
    }
    q += instruction;
    return q;
}

std::string format_winrate_percent(double w, int decimals) {
    double scale = 100.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    // The tiny bias keeps values such as 0.5245 (stored just below the
    // written decimal) rounding up, as written.
    const long long units = static_cast<long long>(std::floor(w * scale + 0.5 + 1e-9));
    std::string digits = std::to_string(units);
    if (decimals > 0) {
        while (digits.size() <= static_cast<std::size_t>(decimals)) digits.insert(digits.begin(), '0');
        digits.insert(digits.end() - decimals, '.');
    }
    return digits + "%";
}

namespace {

std::string lower_name(Color c) {
    std::string s = color_name(c);
    s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

}  // namespace

TrainingSample synth_prediction_sample(const AnnotatedPosition& p, const TemplateConfig& cfg, QueryMode mode) {
    cfg.validate();
    const auto& cands = p.candidates.candidates;
    if (cands.size() < static_cast<std::size_t>(cfg.variations_shown)) {
        throw Error(Errc::InsufficientCandidates, std::to_string(cands.size()) + " candidates, " +
                                                      std::to_string(cfg.variations_shown) + " variations requested");
    }
    const int size = p.prefix.size;
    const std::size_t k = p.move_number();
    const Color me = p.to_play;
    const std::string who = lower_name(me);

    std::string r;
    if (k == 0) {
        r += "The board is empty, so this is the first move of the game. The next player is " + who + ".\n";
    } else {
        r += "The last move is " + format_move_token(k, p.prefix.moves.back(), size) + ". The next player is " +
             who + ".\n";
    }

    for (int v = 0; v < cfg.variations_shown; ++v) {
        const Candidate& c = cands[static_cast<std::size_t>(v)];
        if (v > 0) r += "\n";
        r += "Try " + format_move_token(k + 1, Move{me, c.move}, size) +
             ", the subsequent possible variation would be:\n";
        std::vector<std::optional<Point>> line = c.pv;
        if (line.empty() || line.front() != c.move) line.insert(line.begin(), c.move);
        const std::size_t shown = std::min(line.size(), static_cast<std::size_t>(cfg.pv_depth) + 1);
        Color turn = me;
        for (std::size_t i = 0; i < shown; ++i) {
            r += format_move_token(k + 1 + i, Move{turn, line[i]}, size) + "\n";
            turn = opponent(turn);
        }
        r += "In this variation, " + who + "'s win rate is " + format_winrate_percent(c.winrate, cfg.winrate_decimals) +
             ".\n";
    }

    const Candidate& best = cands.front();
    const std::string best_pct = format_winrate_percent(best.winrate, cfg.winrate_decimals);
    r += "\nConsidering all the above analysis, the best move is " +
         format_move_token(k + 1, Move{me, best.move}, size) + ". This move leads to a win rate of " + best_pct;
    r += cfg.variations_shown > 1 ? ", which is higher than the alternatives.\n" : ".\n";

    r += "\nNext player: " + std::string(color_name(me)) + "\n";
    r += "Next position: " + format_vertex(best.move, size) + "\n";
    r += "Win rate: " + best_pct;

    TrainingSample s;
    s.query = build_query(p.prefix, mode);
    s.response = std::move(r);
    s.kind = SampleKind::Prediction;
    if (!p.source_id.empty()) s.extra["source_id"] = p.source_id;
    return s;
}

TrainingSample synth_commentary_sample(const CommentaryPair& pair, QueryMode mode) {
    if (pair.move_index > pair.record.moves.size()) {
        throw Error(Errc::IndexOutOfRange,
                    "move index " + std::to_string(pair.move_index) + " beyond a record of " +
                        std::to_string(pair.record.moves.size()) + " moves",
                    pair.move_index);
    }
    std::size_t b = 0;
    std::size_t e = pair.comment.size();
    while (b < e && std::isspace(static_cast<unsigned char>(pair.comment[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(pair.comment[e - 1]))) --e;
    if (b == e) throw Error(Errc::RejectedEmptyComment, "empty comment", pair.move_index);

    TrainingSample s;
    s.query = build_query(pair.record.prefix(pair.move_index), mode, kCommentaryInstruction);
    s.response = pair.comment.substr(b, e - b);
    s.kind = SampleKind::Commentary;
    return s;
}

}  // namespace golm
