#include <doctest.h>

#include <cmath>

#include "golm/arena.hpp"
#include "oracles.hpp"

using namespace golm;

namespace {

GtpSession mock_session(MockGtpSpec spec) { return GtpSession(std::make_unique<MockGtpChannel>(std::move(spec))); }

EngineEntry mock_entry(const std::string& id, std::function<MockGtpSpec(std::uint64_t)> make) {
    return {id, [make](std::uint64_t seed) -> std::unique_ptr<LineChannel> {
                return std::make_unique<MockGtpChannel>(make(seed));
            }};
}

EngineEntry family_entry(int index) {
    return mock_entry("eps-" + std::to_string(index), [index](std::uint64_t s) { return epsilon_family_member(index, s); });
}

// Area score by flood fill over the naive grid: stones plus empty regions
// that touch only one color. Positive favours Black.
double oracle_area(const oracle::NaiveBoard& b, double komi) {
    double score = -komi;
    std::vector<char> seen(b.grid.size(), 0);
    for (int r = 0; r < b.size; ++r) {
        for (int c = 0; c < b.size; ++c) {
            const Point p{c, r};
            const int v = b.at(p);
            if (v != 0) {
                score += v;
                continue;
            }
            if (seen[static_cast<std::size_t>(r * b.size + c)]) continue;
            std::vector<Point> stack{p};
            seen[static_cast<std::size_t>(r * b.size + c)] = 1;
            int region = 0;
            bool black = false;
            bool white = false;
            while (!stack.empty()) {
                const Point q = stack.back();
                stack.pop_back();
                ++region;
                for (const Point n : oracle::neighbors(b.size, q)) {
                    const int nv = b.at(n);
                    if (nv == 1) black = true;
                    if (nv == -1) white = true;
                    const auto idx = static_cast<std::size_t>(n.row * b.size + n.col);
                    if (nv == 0 && !seen[idx]) {
                        seen[idx] = 1;
                        stack.push_back(n);
                    }
                }
            }
            if (black && !white) score += region;
            if (white && !black) score -= region;
        }
    }
    return score;
}

}  // namespace

TEST_CASE("two immediate passes hand the game to White by komi") {
    MockGtpSpec pass;
    pass.policy = MockPolicy::AlwaysPass;
    auto b = mock_session(pass);
    auto w = mock_session(pass);
    const auto m = play_game(b, w, ArenaConfig{});
    CHECK(m.termination == Termination::TwoPasses);
    CHECK(m.winner == Outcome::White);
    CHECK(m.score_margin == std::optional<double>(-7.5));
    CHECK(m.record.moves.size() == 2);
}

TEST_CASE("resignation") {
    MockGtpSpec black;
    black.policy = MockPolicy::FirstLegal;
    black.resign_after = 10;
    MockGtpSpec white;
    white.policy = MockPolicy::FirstLegal;
    auto b = mock_session(black);
    auto w = mock_session(white);
    const auto m = play_game(b, w, ArenaConfig{});
    CHECK(m.termination == Termination::Resign);
    CHECK(m.winner == Outcome::White);
    CHECK(m.record.moves.size() == 10);
    CHECK_FALSE(m.score_margin.has_value());
}

TEST_CASE("move cap ends the game with an area count") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ArenaConfig cfg;
        cfg.move_cap = 20;
        auto b = mock_session(epsilon_family_member(1, seed));
        auto w = mock_session(epsilon_family_member(2, seed + 100));
        const auto m = play_game(b, w, cfg);
        REQUIRE(m.termination == Termination::MoveCap);
        REQUIRE(m.record.moves.size() == 20);
        oracle::NaiveBoard naive(9);
        for (const auto& mv : m.record.moves) {
            if (mv.point) REQUIRE(naive.play(*mv.point, mv.color == Color::Black ? 1 : -1).has_value());
        }
        const double expected = oracle_area(naive, cfg.komi);
        REQUIRE(m.score_margin.has_value());
        CHECK(*m.score_margin == expected);
        CHECK(m.winner == (expected > 0 ? Outcome::Black : Outcome::White));
    }
    CHECK(ArenaConfig{}.effective_move_cap() == 162);
}

TEST_CASE("a crashing engine loses") {
    MockGtpSpec bad;
    bad.crash_at_command = 6;
    GtpOptions fast;
    fast.command_timeout = Millis{200};
    GtpSession b(std::make_unique<MockGtpChannel>(bad), fast);
    auto w = mock_session(MockGtpSpec{});
    const auto m = play_game(b, w, ArenaConfig{});
    CHECK(m.termination == Termination::Crash);
    CHECK(m.winner == Outcome::White);
    CHECK_FALSE(m.note.empty());
}

TEST_CASE("elo by hand") {
    const auto [a, b] = elo_update(1500, 1500, 1.0);
    CHECK(std::fabs(a - 1516) < 1e-9);
    CHECK(std::fabs(b - 1484) < 1e-9);
    const auto draw = elo_update(1700, 1700, 0.5);
    CHECK(draw.first == 1700);
    CHECK(draw.second == 1700);
    const auto fav = elo_update(1900, 1500, 1.0);
    CHECK(std::fabs(fav.first - 1900 - 32.0 / 11.0) < 1e-9);
    CHECK(fav.first - 1900 == doctest::Approx(2.909).epsilon(1e-3));
    CHECK_THROWS_AS(elo_update(1500, 1500, 0.3), Error);
}

TEST_CASE("elo properties") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double ra = 1000 + 1000 * rng.unit();
        const double rb = 1000 + 1000 * rng.unit();
        CHECK(std::fabs(elo_expected(ra, rb) + elo_expected(rb, ra) - 1.0) < 1e-12);
        const double s = static_cast<double>(rng.below(3)) / 2.0;
        const auto base = elo_update(ra, rb, s);
        const auto moved = elo_update(ra + 250, rb + 250, s);
        CHECK(std::fabs(moved.first - base.first - 250) < 1e-9);
        CHECK(std::fabs(moved.second - base.second - 250) < 1e-9);
    }

    EloTable t;
    const char* ids[] = {"a", "b", "c", "d", "e"};
    for (const char* id : ids) t.add(id);
    const double start = t.total();
    for (int i = 0; i < 10000; ++i) {
        const auto x = rng.below(5);
        auto y = rng.below(4);
        if (y >= x) ++y;
        t.record(ids[x], ids[y], static_cast<double>(rng.below(3)) / 2.0);
    }
    CHECK(std::fabs(t.total() - start) < 1e-9);
}

TEST_CASE("win matrix bookkeeping") {
    WinMatrix m;
    MatchResult r;
    r.black = "a";
    r.white = "b";
    r.winner = Outcome::Black;
    m.record(r);
    r.black = "b";
    r.white = "a";
    r.winner = Outcome::Draw;
    m.record(r);
    CHECK(m.at("a", "b").games == 2);
    CHECK(m.at("a", "b").wins == 1);
    CHECK(m.at("a", "b").draws == 1);
    CHECK(m.at("b", "a").wins == 0);
    CHECK(m.at("a", "b").winrate() == 0.75);
    CHECK(m.at("b", "a").winrate() == 0.25);
    CHECK(m.total_games() == 2);
}

TEST_CASE("symmetric pair") {
    TournamentConfig cfg;
    cfg.games_per_pair = 2;
    cfg.seed = 5;
    std::vector<EngineEntry> engines{family_entry(1), mock_entry("twin", [](std::uint64_t s) {
                                         auto spec = epsilon_family_member(1, s);
                                         spec.name = "twin";
                                         return spec;
                                     })};
    const auto res = run_tournament(engines, cfg);
    CHECK(res.games.size() == 2);
    CHECK(res.matrix.total_games() == 2);
    CHECK(std::fabs(res.elo.total() - 3000) < 1e-9);
    // Sequential updates: replay the schedule with the formula written out.
    double ra = 1500;
    double rb = 1500;
    for (const auto& g : res.games) {
        const bool a_black = g.black == "eps-1";
        double s = 0.5;
        if (g.winner == Outcome::Black) s = a_black ? 1.0 : 0.0;
        if (g.winner == Outcome::White) s = a_black ? 0.0 : 1.0;
        const double ea = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0));
        const double d = 32.0 * (s - ea);
        ra += d;
        rb -= d;
    }
    CHECK(std::fabs(res.elo.rating("eps-1") - ra) < 1e-9);
    CHECK(std::fabs(res.elo.rating("twin") - rb) < 1e-9);
    // A 1-1 split does not restore equality: the second winner gains more
    // than the first since it beat a higher-rated opponent.
    EloTable t;
    t.record("x", "y", 1.0);
    t.record("x", "y", 0.0);
    CHECK(t.rating("y") > t.rating("x"));
    CHECK(std::fabs(t.rating("y") - t.rating("x") - (2 * 32.0 / (1 + std::pow(10.0, -32.0 / 400)) - 32.0)) < 1e-9);
}

TEST_CASE("tournament validation and unavailable engines") {
    TournamentConfig cfg;
    CHECK_THROWS_AS(run_tournament({family_entry(0)}, cfg), Error);
    cfg.games_per_pair = 3;
    CHECK_THROWS_AS(run_tournament({family_entry(0), family_entry(1)}, cfg), Error);

    cfg.games_per_pair = 2;
    EngineEntry broken{"broken", [](std::uint64_t) -> std::unique_ptr<LineChannel> {
                           throw Error(Errc::EngineUnavailable, "cannot start");
                       }};
    const auto res = run_tournament({family_entry(0), family_entry(1), broken}, cfg);
    CHECK(res.games.size() == 2);
    CHECK(res.skipped.size() == 2);
    CHECK(res.skipped[0].find("EngineUnavailable") != std::string::npos);
}

TEST_CASE("epsilon family ranks in strength order and reruns identically") {
    TournamentConfig cfg;
    cfg.games_per_pair = 40;
    cfg.seed = 2024;
    const std::vector<EngineEntry> engines{family_entry(2), family_entry(0), family_entry(1)};
    const auto a = run_tournament(engines, cfg);
    CHECK(a.elo.ranking() == std::vector<std::string>{"eps-0", "eps-1", "eps-2"});
    CHECK(a.matrix.total_games() == 120);
    CHECK(std::fabs(a.elo.total() - 4500) < 1e-9);
    MESSAGE(elo_to_json(a.elo).dump());

    const auto b = run_tournament(engines, cfg);
    CHECK(elo_to_json(a.elo) == elo_to_json(b.elo));
    CHECK(matrix_to_json(a.matrix) == matrix_to_json(b.matrix));
    REQUIRE(a.games.size() == b.games.size());
    for (std::size_t i = 0; i < a.games.size(); ++i) CHECK(match_to_json(a.games[i]) == match_to_json(b.games[i]));
}

TEST_CASE("lower epsilon wins head to head") {
    TournamentConfig cfg;
    cfg.games_per_pair = 200;
    cfg.seed = 9;
    for (int weak : {1, 2}) {
        const auto res = run_tournament({family_entry(weak - 1), family_entry(weak)}, cfg);
        const auto s = res.matrix.at("eps-" + std::to_string(weak - 1), "eps-" + std::to_string(weak));
        CAPTURE(weak);
        CHECK(s.games == 200);
        CHECK(s.winrate() > 0.5);
    }
}

TEST_CASE("pearson") {
    const std::vector<double> x{1, 2, 3, 4, 5.5};
    std::vector<double> lin, neg;
    for (double v : x) {
        lin.push_back(2 * v + 3);
        neg.push_back(-v);
    }
    CHECK(std::fabs(pearson_r(x, lin) - 1.0) < 1e-12);
    CHECK(std::fabs(pearson_r(x, neg) + 1.0) < 1e-12);
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{1, 3, 2, 4};
    CHECK(std::fabs(pearson_r(a, b) - 0.8) < 1e-12);

    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> xs(3 + rng.below(20)), ys(xs.size()), ts(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            xs[k] = rng.unit();
            ys[k] = rng.unit();
        }
        const double scale = 0.1 + 10 * rng.unit();
        const double shift = 100 * rng.unit() - 50;
        for (std::size_t k = 0; k < xs.size(); ++k) ts[k] = scale * xs[k] + shift;
        CHECK(std::fabs(pearson_r(ts, ys) - pearson_r(xs, ys)) < 1e-12);
        const double r = pearson_r(xs, ys);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
    }

    const std::vector<double> flat{2, 2, 2, 2};
    CHECK_THROWS_WITH_AS(pearson_r(a, flat), doctest::Contains("DegenerateVariance"), Error);
    CHECK_THROWS_WITH_AS(pearson_r(a, std::vector<double>{1, 2}), doctest::Contains("LengthMismatch"), Error);
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1}, std::vector<double>{1}), Error);
}
