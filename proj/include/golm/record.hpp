#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "golm/board.hpp"

namespace golm {

struct GameResult {
    std::optional<Color> winner;  // empty for draws and unknown results
    std::optional<double> margin;
    bool resignation = false;
    std::string raw;  // the RE value as written

    friend bool operator==(const GameResult&, const GameResult&) = default;
};

struct GameRecord {
    std::vector<Move> moves;
    int size = kDefaultBoardSize;
    double komi = kDefaultKomi;
    std::optional<GameResult> result;
    std::optional<std::string> black_player;
    std::optional<std::string> white_player;
    std::string source_id;
    // False for records built from setup stones or free placement.
    bool alternation_checked = true;
    // SGF branches dropped while following the main line.
    int dropped_variations = 0;

    // The first k moves with all metadata kept.
    GameRecord prefix(std::size_t k) const;
    Color to_play() const;

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// Parses whitespace-separated `<n>.<X|O>-<coord>` tokens. Indices must run
/// 1, 2, 3, ...; with enforce_alternation, colors alternate starting with X.
/// The token `<n>.<C>-pass` is accepted for passes.
GameRecord parse_move_list(std::string_view text, int size = kDefaultBoardSize,
                           bool enforce_alternation = true);

// Single-space separated; "" for an empty record.
std::string format_move_list(const GameRecord& r);
std::string format_move_token(std::size_t number, const Move& m, int size = kDefaultBoardSize);

struct SgfOptions {
    bool enforce_alternation = true;
    // Converts AB/AW setup stones into pseudo-moves and disables alternation.
    bool allow_setup_stones = false;
};

/// Main line of an SGF game tree. Supports B, W, SZ, KM, RE, PB, PW;
/// everything else is skipped. The replay check runs with superko off.
GameRecord parse_sgf(std::string_view text, const SgfOptions& opts = {});

GameResult parse_sgf_result(std::string_view re);

}  // namespace golm
