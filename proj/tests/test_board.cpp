#include <doctest.h>

#include <set>

#include "golden.hpp"
#include "golm/board.hpp"
#include "golm/record.hpp"
#include "oracles.hpp"

using namespace golm;

namespace {

Point pt(const char* s, int size = 19) { return parse_coord(s, size); }

Errc error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
}

Board swap_colors(const Board& b) {
    Board out(b.size());
    for (int r = 0; r < b.size(); ++r) {
        for (int c = 0; c < b.size(); ++c) {
            const Stone s = b.at({c, r});
            if (s == Stone::Black) out.play(Move::place(Color::White, {c, r}), {});
            if (s == Stone::White) out.play(Move::place(Color::Black, {c, r}), {});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("coordinates follow the letter-skipping convention") {
    CHECK(parse_coord("A1") == Point{0, 0});
    CHECK(parse_coord("T19") == Point{18, 18});
    CHECK(parse_coord("J10") == Point{8, 9});
    CHECK(format_coord({0, 0}) == "A1");
    CHECK(format_coord({15, 15}) == "Q16");
    CHECK(format_coord({3, 15}) == "D16");
    CHECK(parse_coord("q16") == Point{15, 15});
    for (const char* bad : {"I5", "U1", "A0", "A20", "A01", "", "5A", "AA1", "A1x"}) {
        CAPTURE(bad);
        CHECK(error_of([&] { parse_coord(bad); }) == Errc::InvalidCoordinate);
    }
    CHECK(error_of([&] { parse_coord("K10", 9); }) == Errc::InvalidCoordinate);
}

TEST_CASE("coordinate round trip over every point of several sizes") {
    for (int size : {5, 9, 13, 19, 25}) {
        std::set<std::string> seen;
        for (int c = 0; c < size; ++c) {
            for (int r = 0; r < size; ++r) {
                const std::string s = format_coord({c, r}, size);
                CHECK(parse_coord(s, size) == Point{c, r});
                CHECK(format_coord(parse_coord(s, size), size) == s);
                seen.insert(s);
            }
        }
        CHECK(seen.size() == static_cast<std::size_t>(size * size));
    }
}

TEST_CASE("corner capture reports the removed stone") {
    Board b(19);
    b.play(Move::place(Color::Black, pt("A1")), {});
    b.play(Move::place(Color::White, pt("B1")), {});
    const auto r = apply_move(b, Move::place(Color::White, pt("A2")));
    CHECK(r.report.removed == std::vector<Point>{pt("A1")});
    CHECK(r.board.at(pt("A1")) == Stone::Empty);
    CHECK(r.board.captures(Color::White) == 1);
}

TEST_CASE("pass leaves the board unchanged") {
    const auto base = replay(parse_move_list("1.X-D4 2.O-Q16").moves).board;
    const auto r = apply_move(base, Move::pass(Color::Black));
    CHECK(r.report.removed.empty());
    CHECK(r.board.same_position(base));
}

TEST_CASE("a single white stone on a fresh board") {
    const auto r = apply_move(Board(19), Move::place(Color::White, pt("K10")));
    CHECK(r.board.stone_count() == 1);
    CHECK(r.board.at(pt("K10")) == Stone::White);
    CHECK(r.report.removed.empty());
}

TEST_CASE("replay edge cases") {
    CHECK(replay({}).board.stone_count() == 0);

    const auto demo = replay(parse_move_list(golden::kDemoMoves).moves);
    CHECK(demo.board.stone_count() == 12);
    for (const auto& rep : demo.reports) CHECK(rep.removed.empty());

    try {
        replay({Move::place(Color::Black, pt("A1")), Move::place(Color::White, pt("A1"))});
        FAIL("occupied point accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OccupiedPoint);
        CHECK(e.index() == std::optional<std::size_t>(2));
    }
}

TEST_CASE("render of the demo opening is byte exact") {
    const auto b = replay(parse_move_list(golden::kDemoMoves).moves).board;
    const Grid g = render_2d(b);
    CHECK(g[3][3] == 1);
    CHECK(g[3][15] == -1);
    CHECK(format_grid(g) == golden::kDemoGrid);
}

TEST_CASE("render basics") {
    const Grid empty = render_2d(Board(9));
    for (const auto& row : empty)
        for (int v : row) CHECK(v == 0);
    Board b(9);
    b.play(Move::place(Color::Black, {0, 0}), {});
    const Grid g = render_2d(b);
    int nonzero = 0;
    for (const auto& row : g)
        for (int v : row) nonzero += v != 0;
    CHECK(g[8][0] == 1);
    CHECK(nonzero == 1);
    CHECK(format_grid({{0, 1}, {-1, 0}}) == "[[0, 1], [-1, 0]]");
}

TEST_CASE("legal moves") {
    CHECK(legal_moves(Board(19), Color::Black).size() == 361);
    CHECK(legal_moves(Board(19), Color::Black).front() == pt("A19"));

    // White stones on A2, B2 and B1 leave A1 a suicide point for Black.
    Board b(19);
    b.play(Move::place(Color::White, pt("A2")), {});
    b.play(Move::place(Color::White, pt("B2")), {});
    b.play(Move::place(Color::White, pt("B1")), {});
    const auto lm = legal_moves(b, Color::Black);
    CHECK(std::find(lm.begin(), lm.end(), pt("A1")) == lm.end());
    CHECK(lm.size() == 361 - 4);
    CHECK(b.check(Move::place(Color::Black, pt("A1")), {}) == Errc::SuicideMove);
}

TEST_CASE("full board minus one capturing point") {
    // 5x5 filled with white except A1 and E5.
    const int n = 5;
    Board b(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Point p{c, r};
            if (p == Point{4, 4}) continue;
            if (p == Point{0, 0}) continue;
            b.play(Move::place(Color::White, p), {});
        }
    }
    // While white keeps two liberties both black placements are suicide.
    CHECK(b.check(Move::place(Color::Black, {0, 0}), {}) == Errc::SuicideMove);
    CHECK(b.check(Move::place(Color::Black, {4, 4}), {}) == Errc::SuicideMove);
    // Fill A1 with white: now the only empty point is E5, whose black
    // placement removes the last liberty of the 24-stone white chain.
    b.play(Move::place(Color::White, {0, 0}), {});
    const auto lm = legal_moves(b, Color::Black);
    // brute force: every empty point checked with the naive board
    std::vector<Point> brute;
    for (int r = n - 1; r >= 0; --r) {
        for (int c = 0; c < n; ++c) {
            if (b.at({c, r}) != Stone::Empty) continue;
            oracle::NaiveBoard copy(n);
            for (int rr = 0; rr < n; ++rr)
                for (int cc = 0; cc < n; ++cc) copy.set({cc, rr}, oracle::stone_value(b.at({cc, rr})));
            if (copy.play({c, r}, 1)) brute.push_back({c, r});
        }
    }
    CHECK(lm == brute);
    CHECK(lm == std::vector<Point>{{4, 4}});
    const auto r = apply_move(b, Move::place(Color::Black, {4, 4}));
    CHECK(r.report.removed.size() == 24);
}

TEST_CASE("simple ko is enforced for one turn") {
    // Classic ko shape around D4/E4 on 9x9.
    Board b(9);
    auto play = [&](Color c, const char* s) { b.play(Move::place(c, parse_coord(s, 9)), {}); };
    play(Color::Black, "C4");
    play(Color::White, "F4");
    play(Color::Black, "D5");
    play(Color::White, "E5");
    play(Color::Black, "D3");
    play(Color::White, "E3");
    play(Color::Black, "E4");
    play(Color::White, "D4");  // captures E4
    CHECK(b.at(parse_coord("E4", 9)) == Stone::Empty);
    CHECK(b.simple_ko() == parse_coord("E4", 9));
    CHECK(b.check(Move::place(Color::Black, parse_coord("E4", 9)), {}) == Errc::KoViolation);
    play(Color::Black, "A9");
    play(Color::White, "A1");
    CHECK_FALSE(b.check(Move::place(Color::Black, parse_coord("E4", 9)), {}).has_value());

}

namespace {

// Ko shape on 9x9: after these moves White has just captured at E4.
Board ko_position() {
    Board b(9);
    const char* seq[] = {"C4", "F4", "D5", "E5", "D3", "E3", "E4", "D4"};
    Color turn = Color::Black;
    for (const char* s : seq) {
        b.play(Move::place(turn, parse_coord(s, 9)), {});
        turn = opponent(turn);
    }
    return b;
}

}  // namespace

TEST_CASE("positional superko catches a repeat that simple ko allows") {
    // Both sides pass, which lifts the simple-ko restriction, then Black
    // retakes: the board returns to the position after Black's E4.
    for (bool superko : {false, true}) {
        Board b = ko_position();
        const LegalityConfig cfg{superko};
        b.play(Move::pass(Color::Black), cfg);
        b.play(Move::pass(Color::White), cfg);
        const auto err = b.check(Move::place(Color::Black, parse_coord("E4", 9)), cfg);
        if (superko) {
            CHECK(err == Errc::SuperkoViolation);
        } else {
            CHECK_FALSE(err.has_value());
        }
    }
}

TEST_CASE("area scoring") {
    CHECK(score_area(Board(19), 7.5) == doctest::Approx(-7.5));
    Board one(19);
    one.play(Move::place(Color::Black, pt("K10")), {});
    CHECK(score_area(one, 0) == 361);
    Board two(19);
    two.play(Move::place(Color::Black, pt("D4")), {});
    two.play(Move::place(Color::White, pt("Q16")), {});
    CHECK(score_area(two, 7.5) == -7.5);
}

TEST_CASE("random games agree with the naive board and the liberty oracle") {
    Rng rng(7);
    for (int game = 0; game < 60; ++game) {
        const int size = 5 + static_cast<int>(rng.below(5));
        const auto moves = oracle::random_game(rng, size, 200);
        Board b(size);
        oracle::NaiveBoard naive(size);
        int placed = 0;
        int captured = 0;
        for (const auto& m : moves) {
            const auto rep = b.play(m, {});
            if (m.point) {
                ++placed;
                const auto n = naive.play(*m.point, m.color == Color::Black ? 1 : -1);
                REQUIRE(n.has_value());
                CHECK(*n == static_cast<int>(rep.removed.size()));
                captured += *n;
            }
            int cells = 0;
            for (int r = 0; r < size; ++r) {
                for (int c = 0; c < size; ++c) {
                    const Point p{c, r};
                    REQUIRE(oracle::stone_value(b.at(p)) == naive.at(p));
                    if (naive.at(p) != 0) {
                        ++cells;
                        CHECK(b.liberties(p) == naive.liberties(p));
                        CHECK(b.liberties(p) >= 1);
                    }
                }
            }
            CHECK(cells == placed - captured);
        }
        // antisymmetry under color swap with komi 0
        CHECK(score_area(swap_colors(b), 0) == -score_area(b, 0));
        // determinism
        const auto again = replay(moves, {}, size);
        CHECK(again.board.fingerprint() == b.fingerprint());
        CHECK(render_2d(again.board) == render_2d(b));
    }
}

TEST_CASE("illegal plays leave the board untouched") {
    Board b(9);
    b.play(Move::place(Color::Black, {4, 4}), {});
    const auto fp = b.fingerprint();
    CHECK_THROWS_AS(b.play(Move::place(Color::White, {4, 4}), {}), Error);
    CHECK(b.fingerprint() == fp);
    CHECK(b.stone_count() == 1);
}
