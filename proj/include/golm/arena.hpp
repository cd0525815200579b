#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "golm/engine.hpp"

namespace golm {

enum class Outcome { Black, White, Draw };
enum class Termination { TwoPasses, Resign, MoveCap, Crash };

const char* outcome_name(Outcome o);
const char* termination_name(Termination t);

struct MatchResult {
    std::string black;
    std::string white;
    Outcome winner = Outcome::Draw;
    Termination termination = Termination::TwoPasses;
    std::optional<double> score_margin;  // Black minus White including komi, when scored
    GameRecord record;
    std::string note;  // crash or rejection detail
};

struct ArenaConfig {
    int size = 9;
    double komi = kDefaultKomi;
    std::optional<std::size_t> move_cap;  // default 2 * size^2
    LegalityConfig rules{true};

    std::size_t effective_move_cap() const {
        return move_cap.value_or(static_cast<std::size_t>(2 * size * size));
    }
};

/// Plays one game between two live sessions. Engine failures, illegal
/// moves and rejected moves end the game as a Crash lost by that side.
MatchResult play_game(GtpSession& black, GtpSession& white, const ArenaConfig& cfg,
                      const std::string& black_id = "black", const std::string& white_id = "white");

double elo_expected(double ra, double rb);
// s_a is 1, 0.5 or 0 from A's side.
std::pair<double, double> elo_update(double ra, double rb, double s_a, double k = 32.0);

class EloTable {
public:
    explicit EloTable(double k = 32.0, double initial = 1500.0) : k_(k), initial_(initial) {}

    void add(const std::string& id);
    double rating(const std::string& id) const;
    void record(const MatchResult& m);
    void record(const std::string& a, const std::string& b, double s_a);

    const std::map<std::string, double>& ratings() const { return ratings_; }
    const std::vector<MatchResult>& history() const { return history_; }
    double k() const { return k_; }
    double total() const;
    // Ids sorted by rating, highest first (ties by id).
    std::vector<std::string> ranking() const;

private:
    double k_;
    double initial_;
    std::map<std::string, double> ratings_;
    std::vector<MatchResult> history_;
};

struct PairStats {
    int games = 0;
    int wins = 0;
    int draws = 0;
    double winrate() const { return games ? (wins + 0.5 * draws) / games : 0.0; }
};

class WinMatrix {
public:
    void record(const MatchResult& m);
    // A's record against B over both colors.
    PairStats at(const std::string& a, const std::string& b) const;
    int total_games() const;
    const std::map<std::pair<std::string, std::string>, PairStats>& cells() const { return cells_; }

private:
    std::map<std::pair<std::string, std::string>, PairStats> cells_;
};

// Launches a fresh channel for one game; the seed lets mocks vary per game.
using EngineLauncher = std::function<std::unique_ptr<LineChannel>(std::uint64_t game_seed)>;

struct EngineEntry {
    std::string id;
    EngineLauncher launch;
};

struct TournamentConfig {
    ArenaConfig game;
    int games_per_pair = 2;
    std::uint64_t seed = 0;
    double k = 32.0;
    double initial_rating = 1500.0;
    GtpOptions gtp;
};

struct TournamentResult {
    EloTable elo;
    WinMatrix matrix;
    std::vector<MatchResult> games;  // schedule order
    // Pairs whose engines could not start: (a, b, reason).
    std::vector<std::string> skipped;
};

/// Round robin; every pair plays games_per_pair games with colors split
/// evenly. The schedule is a seeded shuffle and ratings update in that order.
TournamentResult run_tournament(const std::vector<EngineEntry>& engines, const TournamentConfig& cfg);

// Throws LengthMismatch, InvalidArgument (fewer than 2), DegenerateVariance.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

nlohmann::json elo_to_json(const EloTable& t);
nlohmann::json matrix_to_json(const WinMatrix& m);
nlohmann::json match_to_json(const MatchResult& m);

// Strength-ordered mock family: epsilon-greedy players whose randomness
// grows with the index (0 strongest).
MockGtpSpec epsilon_family_member(int index, std::uint64_t seed);
inline constexpr double kEpsilonFamily[] = {0.05, 0.5, 1.0};

}  // namespace golm
