#include "golm/board.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <queue>

namespace golm {

namespace {

constexpr std::string_view kColumnLetters = "ABCDEFGHJKLMNOPQRSTUVWXYZ";

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct ZobristTable {
    std::array<std::array<std::uint64_t, 2>, kMaxBoardSize * kMaxBoardSize> keys{};
    ZobristTable() {
        std::uint64_t state = 0x5eedf00dULL;
        for (auto& k : keys) {
            k[0] = splitmix64(state);
            k[1] = splitmix64(state);
        }
    }
};

const ZobristTable& zobrist() {
    static const ZobristTable table;
    return table;
}

std::uint64_t zkey(int idx, Color c) { return zobrist().keys[idx][static_cast<int>(c)]; }

Color color_of(Stone s) { return s == Stone::Black ? Color::Black : Color::White; }

}  // namespace

char color_symbol(Color c) { return c == Color::Black ? 'X' : 'O'; }

const char* color_name(Color c) { return c == Color::Black ? "Black" : "White"; }

std::optional<Color> color_from_symbol(char symbol) {
    if (symbol == 'X') return Color::Black;
    if (symbol == 'O') return Color::White;
    return std::nullopt;
}

Point parse_coord(std::string_view text, int size) {
    auto fail = [&](const std::string& why) {
        return Error(Errc::InvalidCoordinate, "'" + std::string(text) + "': " + why, std::nullopt,
                     std::string(text));
    };
    if (text.size() < 2 || text.size() > 3) throw fail("expected a letter followed by a number");
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (letter == 'I') throw fail("column letter I is not used");
    const auto col_pos = kColumnLetters.find(letter);
    if (col_pos == std::string_view::npos) throw fail("bad column letter");
    int number = 0;
    for (char ch : text.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw fail("bad row number");
        number = number * 10 + (ch - '0');
    }
    if (text[1] == '0') throw fail("bad row number");
    const int col = static_cast<int>(col_pos);
    if (col >= size || number < 1 || number > size) throw fail("outside the board");
    return Point{col, number - 1};
}

std::string format_coord(Point p, int size) {
    (void)size;
    return std::string(1, kColumnLetters[p.col]) + std::to_string(p.row + 1);
}

std::optional<Point> parse_vertex(std::string_view text, int size) {
    if (text.size() == 4) {
        std::string lower;
        for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        if (lower == "pass") return std::nullopt;
    }
    return parse_coord(text, size);
}

std::string format_vertex(const std::optional<Point>& p, int size) {
    return p ? format_coord(*p, size) : std::string("pass");
}

// ---------------------------------------------------------------------------

Board::Board(int size) : size_(size) {
    if (size < 2 || size > kMaxBoardSize) {
        throw Error(Errc::UnsupportedBoardSize, "board size " + std::to_string(size));
    }
    const int area = size * size;
    words_ = (area + 63) / 64;
    grid_.assign(area, Stone::Empty);
    root_.assign(area, -1);
    next_.assign(area, -1);
    csize_.assign(area, 0);
    libs_.assign(static_cast<std::size_t>(area) * words_, 0);
    history_.push_back(hash_);
}

template <typename F>
void Board::for_each_neighbor(int idx, F&& f) const {
    const int col = idx % size_;
    const int row = idx / size_;
    if (row + 1 < size_) f(idx + size_);
    if (col > 0) f(idx - 1);
    if (col + 1 < size_) f(idx + 1);
    if (row > 0) f(idx - size_);
}

int Board::lib_count(int root) const {
    int n = 0;
    const auto* w = &libs_[static_cast<std::size_t>(root) * words_];
    for (int i = 0; i < words_; ++i) n += std::popcount(w[i]);
    return n;
}

void Board::set_lib(int root, int idx) {
    libs_[static_cast<std::size_t>(root) * words_ + idx / 64] |= (std::uint64_t{1} << (idx % 64));
}

void Board::clear_lib(int root, int idx) {
    libs_[static_cast<std::size_t>(root) * words_ + idx / 64] &= ~(std::uint64_t{1} << (idx % 64));
}

int Board::liberties(Point p) const {
    const int r = root_[index(p)];
    return r < 0 ? 0 : lib_count(r);
}

int Board::chain_size(Point p) const {
    const int r = root_[index(p)];
    return r < 0 ? 0 : csize_[r];
}

bool Board::seen_position(std::uint64_t fp) const {
    return std::find(history_.begin(), history_.end(), fp) != history_.end();
}

void Board::merge_chains(int a, int b) {
    if (a == b) return;
    if (csize_[a] < csize_[b]) std::swap(a, b);
    // relabel b's stones under root a
    int s = b;
    do {
        root_[s] = static_cast<std::int16_t>(a);
        s = next_[s];
    } while (s != b);
    std::swap(next_[a], next_[b]);
    csize_[a] = static_cast<std::int16_t>(csize_[a] + csize_[b]);
    csize_[b] = 0;
    auto* wa = &libs_[static_cast<std::size_t>(a) * words_];
    auto* wb = &libs_[static_cast<std::size_t>(b) * words_];
    for (int i = 0; i < words_; ++i) {
        wa[i] |= wb[i];
        wb[i] = 0;
    }
}

void Board::remove_chain(int root, std::vector<Point>& removed) {
    const Color c = color_of(grid_[root]);
    std::vector<int> stones;
    int s = root;
    do {
        stones.push_back(s);
        s = next_[s];
    } while (s != root);
    for (int idx : stones) {
        grid_[idx] = Stone::Empty;
        root_[idx] = -1;
        next_[idx] = -1;
        hash_ ^= zkey(idx, c);
        removed.push_back(point_of(idx));
    }
    csize_[root] = 0;
    std::fill_n(&libs_[static_cast<std::size_t>(root) * words_], words_, 0);
    stones_ -= static_cast<int>(stones.size());
    for (int idx : stones) {
        for_each_neighbor(idx, [&](int nb) {
            if (root_[nb] >= 0) set_lib(root_[nb], idx);
        });
    }
}

std::vector<int> Board::captured_roots(int idx, Color c) const {
    const Stone opp = stone_of(opponent(c));
    std::vector<int> roots;
    for_each_neighbor(idx, [&](int nb) {
        if (grid_[nb] != opp) return;
        const int r = root_[nb];
        if (lib_count(r) == 1 && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    });
    return roots;
}

CaptureReport Board::probe(const Move& m) const {
    CaptureReport report;
    if (m.is_pass() || !on_board(*m.point) || at(*m.point) != Stone::Empty) return report;
    const int idx = index(*m.point);
    bool breathes = false;
    const Stone own = stone_of(m.color);
    for_each_neighbor(idx, [&](int nb) {
        if (grid_[nb] == Stone::Empty) breathes = true;
        else if (grid_[nb] == own && lib_count(root_[nb]) > 1) breathes = true;
    });
    for (int r : captured_roots(idx, m.color)) {
        int s = r;
        do {
            report.removed.push_back(point_of(s));
            s = next_[s];
        } while (s != r);
    }
    std::sort(report.removed.begin(), report.removed.end());
    report.self_capture_rejected = !breathes && report.removed.empty();
    return report;
}

std::optional<Errc> Board::check(const Move& m, const LegalityConfig& cfg) const {
    if (m.is_pass()) return std::nullopt;
    const Point p = *m.point;
    if (!on_board(p)) return Errc::InvalidCoordinate;
    if (at(p) != Stone::Empty) return Errc::OccupiedPoint;
    if (ko_point_ && *ko_point_ == p && ko_color_ == m.color) return Errc::KoViolation;
    const CaptureReport report = probe(m);
    if (report.self_capture_rejected) return Errc::SuicideMove;
    if (cfg.superko) {
        std::uint64_t next_hash = hash_ ^ zkey(index(p), m.color);
        for (const Point& q : report.removed) next_hash ^= zkey(index(q), opponent(m.color));
        if (seen_position(next_hash)) return Errc::SuperkoViolation;
    }
    return std::nullopt;
}

CaptureReport Board::play(const Move& m, const LegalityConfig& cfg) {
    if (auto err = check(m, cfg)) {
        const std::string where = m.is_pass() ? "pass" : "(" + std::to_string(m.point->col) + "," +
                                                            std::to_string(m.point->row) + ")";
        throw Error(*err, std::string(color_name(m.color)) + " at " + where);
    }
    CaptureReport report;
    if (m.is_pass()) {
        ko_point_.reset();
        return report;
    }
    const int idx = index(*m.point);
    const Color c = m.color;
    const Stone own = stone_of(c);

    grid_[idx] = own;
    root_[idx] = static_cast<std::int16_t>(idx);
    next_[idx] = static_cast<std::int16_t>(idx);
    csize_[idx] = 1;
    std::fill_n(&libs_[static_cast<std::size_t>(idx) * words_], words_, 0);
    hash_ ^= zkey(idx, c);
    ++stones_;

    for_each_neighbor(idx, [&](int nb) {
        if (grid_[nb] == Stone::Empty) set_lib(idx, nb);
        else clear_lib(root_[nb], idx);
    });
    for_each_neighbor(idx, [&](int nb) {
        if (grid_[nb] == own) merge_chains(root_[idx], root_[nb]);
    });

    const Stone opp = stone_of(opponent(c));
    std::vector<int> dead;
    for_each_neighbor(idx, [&](int nb) {
        if (grid_[nb] != opp) return;
        const int r = root_[nb];
        if (lib_count(r) == 0 && std::find(dead.begin(), dead.end(), r) == dead.end()) dead.push_back(r);
    });
    for (int r : dead) remove_chain(r, report.removed);
    std::sort(report.removed.begin(), report.removed.end());
    captures_[static_cast<int>(c)] += static_cast<int>(report.removed.size());

    const int my_root = root_[idx];
    if (report.removed.size() == 1 && csize_[my_root] == 1 && lib_count(my_root) == 1) {
        ko_point_ = report.removed.front();
        ko_color_ = opponent(c);
    } else {
        ko_point_.reset();
    }
    history_.push_back(hash_);
    return report;
}

// ---------------------------------------------------------------------------

MoveResult apply_move(const Board& b, const Move& m, const LegalityConfig& cfg) {
    MoveResult result{b, {}};
    result.report = result.board.play(m, cfg);
    return result;
}

ReplayResult replay(const std::vector<Move>& moves, const LegalityConfig& cfg, int size) {
    ReplayResult out{Board(size), {}};
    out.reports.reserve(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
        try {
            out.reports.push_back(out.board.play(moves[i], cfg));
        } catch (const Error& e) {
            throw Error(e.code(), "move " + std::to_string(i + 1) + ": " + e.what(), i + 1);
        }
    }
    return out;
}

Grid render_2d(const Board& b) {
    const int n = b.size();
    Grid g(n, std::vector<int>(n, 0));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            g[n - 1 - r][c] = static_cast<int>(b.at(Point{c, r}));
        }
    }
    return g;
}

std::string format_grid(const Grid& g) {
    std::string out = "[";
    for (std::size_t r = 0; r < g.size(); ++r) {
        if (r) out += ", ";
        out += '[';
        for (std::size_t c = 0; c < g[r].size(); ++c) {
            if (c) out += ", ";
            out += std::to_string(g[r][c]);
        }
        out += ']';
    }
    out += ']';
    return out;
}

std::vector<Point> legal_moves(const Board& b, Color c, const LegalityConfig& cfg) {
    std::vector<Point> out;
    for (int r = b.size() - 1; r >= 0; --r) {
        for (int col = 0; col < b.size(); ++col) {
            const Point p{col, r};
            if (!b.check(Move::place(c, p), cfg)) out.push_back(p);
        }
    }
    return out;
}

double score_area(const Board& b, double komi) {
    const int n = b.size();
    std::vector<bool> visited(static_cast<std::size_t>(n) * n, false);
    int black = 0;
    int white = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Stone s = b.at(Point{c, r});
            if (s == Stone::Black) ++black;
            if (s == Stone::White) ++white;
        }
    }
    for (int start = 0; start < n * n; ++start) {
        const Point sp{start % n, start / n};
        if (visited[start] || b.at(sp) != Stone::Empty) continue;
        int region = 0;
        bool touches_black = false;
        bool touches_white = false;
        std::queue<int> frontier;
        frontier.push(start);
        visited[start] = true;
        while (!frontier.empty()) {
            const int cur = frontier.front();
            frontier.pop();
            ++region;
            const int col = cur % n;
            const int row = cur / n;
            const int nbs[4][2] = {{col + 1, row}, {col - 1, row}, {col, row + 1}, {col, row - 1}};
            for (const auto& nb : nbs) {
                if (nb[0] < 0 || nb[1] < 0 || nb[0] >= n || nb[1] >= n) continue;
                const int ni = nb[1] * n + nb[0];
                const Stone s = b.at(Point{nb[0], nb[1]});
                if (s == Stone::Black) touches_black = true;
                else if (s == Stone::White) touches_white = true;
                else if (!visited[ni]) {
                    visited[ni] = true;
                    frontier.push(ni);
                }
            }
        }
        if (touches_black && !touches_white) black += region;
        if (touches_white && !touches_black) white += region;
    }
    return static_cast<double>(black - white) - komi;
}

bool is_simple_eye(const Board& b, Point p, Color c) {
    if (b.at(p) != Stone::Empty) return false;
    const Stone own = stone_of(c);
    const Point nbs[4] = {{p.col + 1, p.row}, {p.col - 1, p.row}, {p.col, p.row + 1}, {p.col, p.row - 1}};
    for (const Point& q : nbs) {
        if (b.on_board(q) && b.at(q) != own) return false;
    }
    return true;
}

}  // namespace golm
