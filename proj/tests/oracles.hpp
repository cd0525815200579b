#pragma once

// Deliberately naive reference implementations used to check the real code.
// Nothing here shares logic with the library beyond the public types.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "golm/board.hpp"
#include "golm/grpo.hpp"
#include "golm/rng.hpp"

namespace oracle {

using golm::Board;
using golm::Color;
using golm::Point;
using golm::Stone;

inline std::vector<Point> neighbors(int size, Point p) {
    std::vector<Point> out;
    const int dc[] = {1, -1, 0, 0};
    const int dr[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
        const Point q{p.col + dc[k], p.row + dr[k]};
        if (q.col >= 0 && q.row >= 0 && q.col < size && q.row < size) out.push_back(q);
    }
    return out;
}

// Plain grid board: grid[row * size + col], 1 black, -1 white.
struct NaiveBoard {
    int size;
    std::vector<int> grid;

    explicit NaiveBoard(int n) : size(n), grid(static_cast<std::size_t>(n * n), 0) {}

    int at(Point p) const { return grid[static_cast<std::size_t>(p.row * size + p.col)]; }
    void set(Point p, int v) { grid[static_cast<std::size_t>(p.row * size + p.col)] = v; }

    // Flood fill of the chain through p, and its distinct liberties.
    void chain(Point p, std::vector<Point>& stones, std::vector<Point>& libs) const {
        const int color = at(p);
        std::vector<char> seen(grid.size(), 0);
        std::vector<char> lib_seen(grid.size(), 0);
        std::vector<Point> stack{p};
        seen[static_cast<std::size_t>(p.row * size + p.col)] = 1;
        while (!stack.empty()) {
            const Point q = stack.back();
            stack.pop_back();
            stones.push_back(q);
            for (const Point n : neighbors(size, q)) {
                const auto idx = static_cast<std::size_t>(n.row * size + n.col);
                if (at(n) == 0 && !lib_seen[idx]) {
                    lib_seen[idx] = 1;
                    libs.push_back(n);
                } else if (at(n) == color && !seen[idx]) {
                    seen[idx] = 1;
                    stack.push_back(n);
                }
            }
        }
    }

    int liberties(Point p) const {
        std::vector<Point> s, l;
        chain(p, s, l);
        return static_cast<int>(l.size());
    }

    // Returns the number of captured stones, or nullopt when the move is
    // occupied or suicide (the board is then unchanged). Ko is not modeled.
    std::optional<int> play(Point p, int color) {
        if (at(p) != 0) return std::nullopt;
        set(p, color);
        int captured = 0;
        for (const Point n : neighbors(size, p)) {
            if (at(n) != -color) continue;
            std::vector<Point> s, l;
            chain(n, s, l);
            if (l.empty()) {
                for (const Point q : s) set(q, 0);
                captured += static_cast<int>(s.size());
            }
        }
        if (liberties(p) == 0) {
            set(p, 0);
            return std::nullopt;
        }
        return captured;
    }
};

inline int stone_value(Stone s) { return static_cast<int>(s); }

// Random legal game (simple ko, no superko unless asked) with occasional
// passes; stops on two passes or after max_moves.
inline std::vector<golm::Move> random_game(golm::Rng& rng, int size, std::size_t max_moves,
                                           golm::LegalityConfig cfg = {}) {
    Board b(size);
    std::vector<golm::Move> moves;
    Color turn = Color::Black;
    int passes = 0;
    while (moves.size() < max_moves && passes < 2) {
        const auto legal = golm::legal_moves(b, turn, cfg);
        golm::Move m = golm::Move::pass(turn);
        if (!legal.empty() && rng.below(50) != 0) m = golm::Move::place(turn, legal[rng.below(legal.size())]);
        b.play(m, cfg);
        moves.push_back(m);
        passes = m.is_pass() ? passes + 1 : 0;
        turn = golm::opponent(turn);
    }
    return moves;
}

// Term-by-term evaluation of the group objective, written from the formula:
// (1/G) sum_i (1/|o_i|) sum_t [min(rho A, clip(rho) A) - beta k].
inline double grpo_objective(const golm::GroupRollout& group, double eps, double beta, double floor = 1e-8) {
    const double g = static_cast<double>(group.size());
    double mean = 0.0;
    for (const auto& r : group) mean += r.reward;
    mean /= g;
    double var = 0.0;
    for (const auto& r : group) var += (r.reward - mean) * (r.reward - mean);
    const double sd = std::sqrt(var / g);
    double total = 0.0;
    for (const auto& r : group) {
        const double adv = sd < floor || sd == 0.0 ? 0.0 : (r.reward - mean) / sd;
        double acc = 0.0;
        for (const auto& t : r.tokens) {
            const double rho = std::exp(t.logp_new - t.logp_old);
            const double clipped = std::min(std::max(rho, 1.0 - eps), 1.0 + eps);
            const double d = t.logp_ref - t.logp_new;
            const double kl = std::exp(d) - d - 1.0;
            acc += std::min(rho * adv, clipped * adv) - beta * kl;
        }
        total += acc / static_cast<double>(r.tokens.size());
    }
    return total / g;
}

}  // namespace oracle
