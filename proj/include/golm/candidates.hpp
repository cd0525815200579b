#pragma once

#include <optional>
#include <vector>

#include "golm/board.hpp"

namespace golm {

inline constexpr int kDefaultTopK = 10;

struct Candidate {
    std::optional<Point> move;  // empty = pass
    double winrate = 0.0;       // side to move, in [0,1]
    // Principal variation starting with the candidate move itself.
    std::vector<std::optional<Point>> pv;
    int rank = 0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateList {
    Color to_play = Color::Black;
    std::vector<Candidate> candidates;  // rank 1 first

    double best_winrate() const { return candidates.empty() ? 0.0 : candidates.front().winrate; }

    friend bool operator==(const CandidateList&, const CandidateList&) = default;
};

// Clamps winrates into [0,1], stable-sorts by winrate descending (ties keep
// their incoming order), truncates to top_k and assigns ranks 1..K.
CandidateList normalize_candidates(Color to_play, std::vector<Candidate> raw, int top_k = kDefaultTopK);

// Ranks are 1..K, winrates non-increasing in rank, all in [0,1], K >= 1.
bool is_well_formed(const CandidateList& cl);

}  // namespace golm
