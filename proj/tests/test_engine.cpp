#include <doctest.h>

#include "golm/engine.hpp"

using namespace golm;

namespace {

MockAnalysisSpec table_spec() {
    MockAnalysisSpec spec;
    spec.seed = 1;
    spec.table[""] = {{"D4", 0.47, {"D4", "Q16"}}, {"Q16", 0.52, {}}, {"C3", 0.30, {}}, {"K10", 0.52, {}}};
    return spec;
}

AnalysisSession session_for(MockAnalysisSpec spec, AnalysisOptions opts = {}) {
    return AnalysisSession(std::make_unique<MockAnalysisChannel>(std::move(spec)), opts);
}

GameRecord position(const std::string& moves, int size = 19) { return parse_move_list(moves, size); }

Errc code_of(const std::optional<Error>& e) { return e ? e->code() : Errc::InvalidArgument; }

}  // namespace

TEST_CASE("table lookup comes back sorted with stable ties") {
    auto s = session_for(table_spec());
    const auto cl = s.analyze(GameRecord{});
    REQUIRE(cl.candidates.size() == 4);
    CHECK(format_vertex(cl.candidates[0].move) == "Q16");
    CHECK(format_vertex(cl.candidates[1].move) == "K10");
    CHECK(format_vertex(cl.candidates[2].move) == "D4");
    CHECK(format_vertex(cl.candidates[3].move) == "C3");
    for (int i = 0; i < 4; ++i) CHECK(cl.candidates[static_cast<std::size_t>(i)].rank == i + 1);
    CHECK(cl.candidates[2].pv.size() == 2);
    CHECK(cl.candidates[1].pv.front() == cl.candidates[1].move);
    CHECK(is_well_formed(cl));
}

TEST_CASE("shuffled engine output is re-sorted") {
    MockAnalysisSpec spec;
    spec.seed = 4;
    spec.shuffle_output = true;
    auto s = session_for(spec);
    for (int i = 0; i < 20; ++i) {
        const auto cl = s.analyze(position("1.X-Q16 2.O-D4"));
        CHECK(is_well_formed(cl));
        CHECK(cl.candidates.size() == 10);
        CHECK(cl.to_play == Color::Black);
    }
}

TEST_CASE("black-perspective winrates are flipped for white") {
    MockAnalysisSpec a;
    a.seed = 9;
    MockAnalysisSpec b = a;
    b.black_perspective = true;
    AnalysisOptions flip;
    flip.perspective = WinratePerspective::Black;
    auto sa = session_for(a);
    auto sb = session_for(b, flip);
    const auto pos = position("1.X-Q16");
    const auto ca = sa.analyze(pos);
    const auto cb = sb.analyze(pos);
    REQUIRE(ca.candidates.size() == cb.candidates.size());
    for (std::size_t i = 0; i < ca.candidates.size(); ++i) {
        CHECK(ca.candidates[i].move == cb.candidates[i].move);
        CHECK(ca.candidates[i].winrate == doctest::Approx(cb.candidates[i].winrate).epsilon(1e-12));
    }
}

TEST_CASE("same seed, same answers") {
    auto s1 = session_for(MockAnalysisSpec{});
    auto s2 = session_for(MockAnalysisSpec{});
    const auto pos = position("1.X-Q16 2.O-D4 3.X-C3");
    CHECK(s1.analyze(pos) == s2.analyze(pos));
    CHECK(s1.analyze(pos) == s1.analyze(pos));
}

TEST_CASE("faults surface at the injected call") {
    for (FaultKind kind : {FaultKind::Garble, FaultKind::Drop, FaultKind::UnknownId, FaultKind::DuplicateId,
                           FaultKind::Delay}) {
        MockAnalysisSpec spec;
        spec.faults.push_back({3, kind, Millis{120'000}});
        AnalysisOptions opts;
        opts.timeout = Millis{1000};
        auto s = session_for(spec, opts);
        for (int call = 1; call <= 6; ++call) {
            CAPTURE(call);
            CAPTURE(static_cast<int>(kind));
            const auto out = s.analyze_many({position("1.X-Q16")});
            if (call != 3) {
                CHECK(out[0].result.has_value());
                continue;
            }
            REQUIRE(out[0].error.has_value());
            const Errc expected = kind == FaultKind::Drop || kind == FaultKind::Delay ? Errc::Timeout : Errc::ProtocolError;
            CHECK(out[0].error->code() == expected);
            if (kind == FaultKind::Garble) CHECK(out[0].error->detail().find("#garbled") != std::string::npos);
        }
    }
}

TEST_CASE("analyze throws the error for single requests") {
    MockAnalysisSpec spec;
    spec.faults.push_back({1, FaultKind::Garble, {}});
    auto s = session_for(spec);
    CHECK_THROWS_WITH_AS(s.analyze(GameRecord{}), doctest::Contains("ProtocolError"), Error);
}

TEST_CASE("a crash fails the call and everything after it") {
    MockAnalysisSpec spec;
    spec.faults.push_back({2, FaultKind::Crash, {}});
    auto s = session_for(spec);
    CHECK_NOTHROW(s.analyze(GameRecord{}));
    CHECK_THROWS_WITH_AS(s.analyze(GameRecord{}), doctest::Contains("EngineCrashed"), Error);
    CHECK_THROWS_WITH_AS(s.analyze(GameRecord{}), doctest::Contains("EngineCrashed"), Error);
}

TEST_CASE("illegal positions are rejected") {
    auto s = session_for(MockAnalysisSpec{});
    GameRecord bad;
    bad.moves = {Move::place(Color::Black, {3, 3}), Move::place(Color::White, {3, 3})};
    CHECK_THROWS_WITH_AS(s.analyze(bad), doctest::Contains("IllegalPositionRejected"), Error);
}

TEST_CASE("pipelining respects the in-flight bound and keeps input order") {
    std::vector<GameRecord> batch;
    const std::string moves[] = {"", "1.X-Q16", "1.X-Q16 2.O-D4", "1.X-C3", "1.X-D4 2.O-Q4", "1.X-K10"};
    for (int rep = 0; rep < 5; ++rep)
        for (const auto& m : moves) batch.push_back(m.empty() ? GameRecord{} : position(m));

    MockAnalysisSpec serial_spec;
    auto serial = session_for(serial_spec);
    const auto expected = serial.analyze_many(batch);

    for (int n : {1, 2, 4, 7}) {
        MockAnalysisSpec spec;
        spec.jitter = Millis{40};
        auto channel = std::make_unique<MockAnalysisChannel>(spec);
        auto* probe = channel.get();
        AnalysisOptions opts;
        opts.max_in_flight = n;
        AnalysisSession s(std::move(channel), opts);
        const auto got = s.analyze_many(batch);
        CHECK(probe->peak_outstanding() <= n);
        if (n > 1) CHECK(probe->peak_outstanding() > 1);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i].result.has_value());
            CHECK(*got[i].result == *expected[i].result);
        }
    }
}

TEST_CASE("pipelined faults never misattribute answers") {
    std::vector<GameRecord> batch;
    for (int i = 0; i < 12; ++i) batch.push_back(position("1.X-" + format_coord({i, i})));
    MockAnalysisSpec clean;
    const auto truth = session_for(clean).analyze_many(batch);

    MockAnalysisSpec spec;
    spec.jitter = Millis{30};
    spec.faults = {{4, FaultKind::UnknownId, {}}, {9, FaultKind::Drop, {}}};
    AnalysisOptions opts;
    opts.max_in_flight = 3;
    opts.timeout = Millis{500};
    auto s = session_for(spec, opts);
    const auto got = s.analyze_many(batch);
    CHECK(code_of(got[3].error) == Errc::ProtocolError);
    CHECK(code_of(got[8].error) == Errc::Timeout);
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].result) CHECK(*got[i].result == *truth[i].result);
    }
}

TEST_CASE("gtp mock: first legal move is A19") {
    MockGtpSpec spec;
    spec.policy = MockPolicy::FirstLegal;
    GtpSession s(std::make_unique<MockGtpChannel>(spec));
    CHECK(s.protocol_version() == "2");
    s.boardsize(19);
    s.clear_board();
    const auto g = s.genmove(Color::Black, 19);
    CHECK_FALSE(g.resign);
    CHECK(g.move == Move::place(Color::Black, parse_coord("A19")));
}

TEST_CASE("gtp mock: pass reply and resignation") {
    MockGtpSpec spec;
    spec.policy = MockPolicy::AlwaysPass;
    GtpSession s(std::make_unique<MockGtpChannel>(spec));
    CHECK(s.genmove(Color::White, 19).move.is_pass());

    MockGtpSpec r;
    r.resign_after = 2;
    GtpSession t(std::make_unique<MockGtpChannel>(r));
    t.boardsize(9);
    CHECK_FALSE(t.genmove(Color::Black, 9).resign);
    CHECK_FALSE(t.genmove(Color::White, 9).resign);
    CHECK(t.genmove(Color::Black, 9).resign);
}

TEST_CASE("gtp mock: illegal play is a GtpFailure with the engine's text") {
    GtpSession s(std::make_unique<MockGtpChannel>(MockGtpSpec{}));
    s.boardsize(9);
    s.play(Move::place(Color::Black, {4, 4}), 9);
    try {
        s.play(Move::place(Color::White, {4, 4}), 9);
        FAIL("illegal play accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::GtpFailure);
        CHECK(e.detail() == "illegal move");
    }
}

TEST_CASE("gtp mock: a crash fails the command and every later one") {
    MockGtpSpec spec;
    spec.crash_at_command = 2;
    GtpSession s(std::make_unique<MockGtpChannel>(spec));
    CHECK(s.name() == "golm-mock");
    CHECK_THROWS_WITH_AS(s.boardsize(9), doctest::Contains("EngineCrashed"), Error);
    CHECK_THROWS_WITH_AS(s.name(), doctest::Contains("EngineCrashed"), Error);
}

namespace {

// Answers the first command, then goes silent.
class SilentAfterOne : public VirtualChannel {
protected:
    void on_request(std::string_view, std::size_t n) override {
        if (n == 1) {
            emit("= silent", Millis{1}, false);
            emit("", Millis{1});
            return;
        }
        forget_request();
    }
};

}  // namespace

TEST_CASE("gtp: a hung engine times out and the session is then unusable") {
    GtpOptions opts;
    opts.command_timeout = Millis{100};
    GtpSession s(std::make_unique<SilentAfterOne>(), opts);
    CHECK(s.name() == "silent");
    CHECK_THROWS_WITH_AS(s.boardsize(9), doctest::Contains("Timeout"), Error);
    CHECK_THROWS_AS(s.name(), Error);
}

TEST_CASE("split_command honors quotes") {
    CHECK(split_command("a b  'c d' \"e f\"") == std::vector<std::string>{"a", "b", "c d", "e f"});
    CHECK(split_command("  ").empty());
}

TEST_CASE("subprocess analysis engine") {
    AnalysisSession s(std::make_unique<SubprocessChannel>(
        std::vector<std::string>{GOLM_MOCK_ENGINE, "analysis", "--seed", "1"}));
    const auto pos = position("1.X-Q16 2.O-D4");
    const auto cl = s.analyze(pos);
    // same answer as the in-process mock with the same seed
    auto local = session_for(MockAnalysisSpec{});
    CHECK(cl == local.analyze(pos));

    const auto many = s.analyze_many({GameRecord{}, pos, position("1.X-C3")});
    for (const auto& o : many) CHECK(o.result.has_value());
}

TEST_CASE("subprocess gtp engine") {
    GtpSession s(std::make_unique<SubprocessChannel>(std::vector<std::string>{GOLM_MOCK_ENGINE, "gtp"}));
    CHECK(s.protocol_version() == "2");
    s.boardsize(9);
    s.komi(6.5);
    s.clear_board();
    s.play(Move::place(Color::Black, {4, 4}), 9);
    CHECK_THROWS_AS(s.play(Move::place(Color::White, {4, 4}), 9), Error);
    const auto g = s.genmove(Color::White, 9);
    CHECK_FALSE(g.resign);
    s.quit();
}

TEST_CASE("a subprocess that exits is reported as a crash") {
    AnalysisSession s(std::make_unique<SubprocessChannel>(
        std::vector<std::string>{GOLM_MOCK_ENGINE, "analysis", "--exit-after", "1"}));
    CHECK_NOTHROW(s.analyze(GameRecord{}));
    CHECK_THROWS_WITH_AS(s.analyze(GameRecord{}), doctest::Contains("EngineCrashed"), Error);

    AnalysisSession missing(std::make_unique<SubprocessChannel>(std::vector<std::string>{"/nonexistent/engine"}));
    CHECK_THROWS_AS(missing.analyze(GameRecord{}), Error);
}
