#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "golm/error.hpp"

namespace golm {

inline constexpr int kDefaultBoardSize = 19;
inline constexpr int kMaxBoardSize = 25;
inline constexpr double kDefaultKomi = 7.5;

enum class Color : std::uint8_t { Black, White };

inline Color opponent(Color c) { return c == Color::Black ? Color::White : Color::Black; }

// "X" for Black, "O" for White.
char color_symbol(Color c);
// "Black" / "White".
const char* color_name(Color c);
std::optional<Color> color_from_symbol(char symbol);

enum class Stone : std::int8_t { Empty = 0, Black = 1, White = -1 };

inline Stone stone_of(Color c) { return c == Color::Black ? Stone::Black : Stone::White; }

// col 0 is column A, row 0 is board row 1 (the bottom edge).
struct Point {
    int col = 0;
    int row = 0;

    friend auto operator<=>(const Point&, const Point&) = default;
};

struct Move {
    Color color = Color::Black;
    std::optional<Point> point;  // empty = pass

    static Move pass(Color c) { return Move{c, std::nullopt}; }
    static Move place(Color c, Point p) { return Move{c, p}; }
    bool is_pass() const { return !point.has_value(); }

    friend bool operator==(const Move&, const Move&) = default;
};

struct LegalityConfig {
    // Simple ko is always enforced; positional superko only when set.
    bool superko = false;
};

struct CaptureReport {
    std::vector<Point> removed;
    bool self_capture_rejected = false;

    friend bool operator==(const CaptureReport&, const CaptureReport&) = default;
};

/// Letters A..Z skipping I for columns, 1-based numbers counted from the bottom.
/// Throws Errc::InvalidCoordinate.
Point parse_coord(std::string_view text, int size = kDefaultBoardSize);
std::string format_coord(Point p, int size = kDefaultBoardSize);

// "pass" (any case) maps to nullopt; anything else goes through parse_coord.
std::optional<Point> parse_vertex(std::string_view text, int size = kDefaultBoardSize);
std::string format_vertex(const std::optional<Point>& p, int size = kDefaultBoardSize);

/// Go position with incrementally maintained chains and liberty sets.
///
/// Every chain keeps a circular stone list and a liberty bitset indexed by
/// its root point, so liberty queries never flood-fill. Copies are cheap
/// enough to treat boards as values.
class Board {
public:
    explicit Board(int size = kDefaultBoardSize);

    int size() const noexcept { return size_; }
    bool on_board(Point p) const noexcept {
        return p.col >= 0 && p.row >= 0 && p.col < size_ && p.row < size_;
    }

    Stone at(Point p) const { return grid_[index(p)]; }
    // Liberty count of the chain containing p, 0 for an empty point.
    int liberties(Point p) const;
    // Number of stones in the chain containing p, 0 for an empty point.
    int chain_size(Point p) const;

    // Point the given color may not play on this turn (simple ko).
    std::optional<Point> simple_ko() const noexcept { return ko_point_; }
    std::optional<Color> ko_restricted_color() const noexcept {
        return ko_point_ ? std::optional<Color>(ko_color_) : std::nullopt;
    }
    // Stones captured by the given color so far.
    int captures(Color by) const noexcept { return captures_[static_cast<int>(by)]; }
    int stone_count() const noexcept { return stones_; }

    std::uint64_t fingerprint() const noexcept { return hash_; }
    bool seen_position(std::uint64_t fp) const;

    // Returns the error a placement would raise, without mutating.
    std::optional<Errc> check(const Move& m, const LegalityConfig& cfg) const;
    // What a placement would capture; self_capture_rejected flags suicide.
    CaptureReport probe(const Move& m) const;

    // Applies m in place. Throws golm::Error and leaves the board untouched
    // when the move is illegal.
    CaptureReport play(const Move& m, const LegalityConfig& cfg);

    bool same_position(const Board& other) const { return size_ == other.size_ && grid_ == other.grid_; }

private:
    int index(Point p) const noexcept { return p.row * size_ + p.col; }
    Point point_of(int idx) const noexcept { return Point{idx % size_, idx / size_}; }
    template <typename F>
    void for_each_neighbor(int idx, F&& f) const;

    int lib_count(int root) const;
    void set_lib(int root, int idx);
    void clear_lib(int root, int idx);
    void merge_chains(int a, int b);
    void remove_chain(int root, std::vector<Point>& removed);
    std::vector<int> captured_roots(int idx, Color c) const;

    int size_ = kDefaultBoardSize;
    int words_ = 0;
    std::vector<Stone> grid_;
    std::vector<std::int16_t> root_;
    std::vector<std::int16_t> next_;
    std::vector<std::int16_t> csize_;
    std::vector<std::uint64_t> libs_;

    std::optional<Point> ko_point_;
    Color ko_color_ = Color::Black;
    std::array<int, 2> captures_{0, 0};
    int stones_ = 0;
    std::uint64_t hash_ = 0;
    std::vector<std::uint64_t> history_;
};

struct MoveResult {
    Board board;
    CaptureReport report;
};

MoveResult apply_move(const Board& b, const Move& m, const LegalityConfig& cfg = {});

struct ReplayResult {
    Board board;
    std::vector<CaptureReport> reports;
};

// Errors carry the 1-based index of the first offending move.
ReplayResult replay(const std::vector<Move>& moves, const LegalityConfig& cfg = {},
                    int size = kDefaultBoardSize);

using Grid = std::vector<std::vector<int>>;

// Row 0 is the top edge (board row `size`), 1 = black, -1 = white, 0 = empty.
Grid render_2d(const Board& b);
// Nested bracketed array text, e.g. "[[0, 1], [-1, 0]]".
std::string format_grid(const Grid& g);

// Legal placements for c, ordered top-left (A19 on 19x19) first, row by row.
std::vector<Point> legal_moves(const Board& b, Color c, const LegalityConfig& cfg = {});

// Tromp-Taylor area score, positive = Black ahead.
double score_area(const Board& b, double komi = kDefaultKomi);

// True when p is empty and every neighbor is a stone of c.
bool is_simple_eye(const Board& b, Point p, Color c);

}  // namespace golm
