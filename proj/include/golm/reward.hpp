#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "golm/candidates.hpp"

namespace golm {

enum class RewardMode { Full, Top1Only, Top3Flat, TierOnly };

const char* reward_mode_name(RewardMode m);
RewardMode parse_reward_mode(std::string_view name);

/// Constants of the tiered reward. Construction enforces
/// c1 > c2 > c3 > alpha1 + alpha2 and non-negative alpha/beta.
class RewardParams {
public:
    RewardParams() = default;
    RewardParams(double alpha1, double alpha2, double beta1, double beta2, double c1, double c2, double c3,
                 RewardMode mode = RewardMode::Full);

    double alpha1() const { return alpha1_; }
    double alpha2() const { return alpha2_; }
    double beta1() const { return beta1_; }
    double beta2() const { return beta2_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double c3() const { return c3_; }
    RewardMode mode() const { return mode_; }

    RewardParams with_mode(RewardMode m) const;

private:
    double alpha1_ = 0.1;
    double alpha2_ = 0.2;
    double beta1_ = 10.0;
    double beta2_ = 10.0;
    double c1_ = 0.8;
    double c2_ = 0.6;
    double c3_ = 0.4;
    RewardMode mode_ = RewardMode::Full;
};

struct FormatError {
    enum class Kind { MissingField, BadCoordinate, BadWinrate, BadPlayer, WrongPlayer };
    Kind kind;
    std::string field;  // which labeled field failed

    std::string describe() const;
};

struct ParsedResponse {
    Color player = Color::Black;
    std::optional<Point> move;  // empty = pass
    double predicted_winrate = 0.0;
    // Raw text of the three fields as found.
    std::string player_text;
    std::string move_text;
    std::string winrate_text;
};

using ParseResult = std::variant<ParsedResponse, FormatError>;

/// Reads "Next player:", "Next position:" and "Win rate:" from either the
/// boxed answer block or plain labeled lines. The last occurrence of each
/// label wins; when an <answer> section exists only the last one is read.
ParseResult parse_response(std::string_view text, int size = kDefaultBoardSize);

// "52.4%" -> 0.524 via decimal shifting, so the result is the double nearest
// to the written decimal. Bare numbers must already be fractions in [0,1].
std::optional<double> parse_winrate_text(std::string_view text);

std::optional<int> rank_of(const std::optional<Point>& move, const CandidateList& cl);

struct RewardOutcome {
    double reward = 0.0;
    std::optional<int> rank;
    bool format_ok = false;
    double winrate_penalty = 0.0;
    double gap_penalty = 0.0;
    std::optional<FormatError> format_error;
};

// alpha * beta*x / (1 + beta*x) for x >= 0.
double saturating_penalty(double alpha, double beta, double x);

RewardOutcome compute_reward(const ParseResult& pr, const CandidateList& cl, const RewardParams& params = {});

}  // namespace golm
