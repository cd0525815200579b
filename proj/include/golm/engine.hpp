#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "golm/candidates.hpp"
#include "golm/record.hpp"
#include "golm/rng.hpp"

namespace golm {

using Millis = std::chrono::milliseconds;

// Line-oriented transport to an engine.
class LineChannel {
public:
    virtual ~LineChannel() = default;
    // Throws EngineCrashed when the engine is gone.
    virtual void write_line(std::string_view line) = 0;
    // nullopt when nothing arrives within timeout; throws EngineCrashed on EOF.
    virtual std::optional<std::string> read_line(Millis timeout) = 0;
    // Monotonic clock of this channel (virtual for in-process mocks).
    virtual Millis now() const = 0;
};

// Engine child process speaking over its stdin/stdout.
class SubprocessChannel : public LineChannel {
public:
    explicit SubprocessChannel(const std::vector<std::string>& argv);
    ~SubprocessChannel() override;
    SubprocessChannel(const SubprocessChannel&) = delete;
    SubprocessChannel& operator=(const SubprocessChannel&) = delete;

    void write_line(std::string_view line) override;
    std::optional<std::string> read_line(Millis timeout) override;
    Millis now() const override;

private:
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    bool eof_ = false;
};

// Whitespace split honoring single and double quotes.
std::vector<std::string> split_command(std::string_view command);

// ---------------------------------------------------------------------------
// JSON analysis protocol

enum class WinratePerspective { SideToMove, Black };

struct AnalysisOptions {
    Millis timeout{60'000};
    int max_in_flight = 1;
    // Perspective the engine reports in; results are always side-to-move.
    WinratePerspective perspective = WinratePerspective::SideToMove;
};

struct AnalysisOutcome {
    std::optional<CandidateList> result;
    std::optional<Error> error;
};

class AnalysisSession {
public:
    explicit AnalysisSession(std::unique_ptr<LineChannel> channel, AnalysisOptions opts = {});

    // Throws EngineCrashed, Timeout, ProtocolError, IllegalPositionRejected.
    CandidateList analyze(const GameRecord& position, int top_k = kDefaultTopK);

    // Pipelined: at most max_in_flight requests are unanswered at once.
    // Results come back in input order. Responses are matched by id; a
    // response with an unknown or already answered id fails every request
    // still in flight rather than being attributed to one of them; a repeated
    // id also fails the request that was answered twice.
    std::vector<AnalysisOutcome> analyze_many(const std::vector<GameRecord>& positions,
                                              int top_k = kDefaultTopK);

    static nlohmann::json make_request(const std::string& id, const GameRecord& position, int top_k);

    LineChannel& channel() { return *channel_; }
    const AnalysisOptions& options() const { return opts_; }

private:
    struct Pending {
        std::size_t slot;
        Color to_play;
        int size;
        int top_k;
        Millis deadline;
    };

    CandidateList decode(const nlohmann::json& response, const Pending& p, const std::string& raw) const;

    std::unique_ptr<LineChannel> channel_;
    AnalysisOptions opts_;
    std::uint64_t next_id_ = 1;
    std::set<std::string> abandoned_;
    std::set<std::string> answered_;
};

// ---------------------------------------------------------------------------
// GTP subset

struct GtpOptions {
    Millis command_timeout{60'000};
    Millis genmove_timeout{300'000};
};

struct GenmoveResult {
    bool resign = false;
    Move move;  // meaningful unless resign
};

class GtpSession {
public:
    explicit GtpSession(std::unique_ptr<LineChannel> channel, GtpOptions opts = {});

    // Sends one command and returns the success payload. Throws GtpFailure
    // with the engine's "?" text, Timeout, or EngineCrashed.
    std::string command(std::string_view cmd, std::optional<Millis> timeout = std::nullopt);

    std::string protocol_version() { return command("protocol_version"); }
    std::string name() { return command("name"); }
    void boardsize(int size);
    void komi(double komi);
    void clear_board() { command("clear_board"); }
    void play(const Move& m, int size);
    GenmoveResult genmove(Color c, int size);
    void quit();

    LineChannel& channel() { return *channel_; }

private:
    std::unique_ptr<LineChannel> channel_;
    GtpOptions opts_;
    bool desynced_ = false;
};

// ---------------------------------------------------------------------------
// Deterministic mock engines

// In-process channel with a virtual clock. Subclasses turn each written line
// into zero or more output lines scheduled at now + delay.
class VirtualChannel : public LineChannel {
public:
    void write_line(std::string_view line) override;
    std::optional<std::string> read_line(Millis timeout) override;
    Millis now() const override { return now_; }

    // Highest number of requests received but not yet answered at any instant.
    int peak_outstanding() const { return peak_outstanding_; }
    std::size_t requests_received() const { return requests_; }

protected:
    // Handles the n-th (1-based) request line.
    virtual void on_request(std::string_view line, std::size_t n) = 0;
    // completes: delivering this line answers one outstanding request.
    void emit(std::string line, Millis delay, bool completes = true);
    void crash() { crashed_ = true; }
    void forget_request() { --outstanding_; }

private:
    struct Scheduled {
        Millis ready;
        std::uint64_t seq;
        std::string line;
        bool completes;
    };
    std::vector<Scheduled> queue_;
    Millis now_{0};
    std::uint64_t seq_ = 0;
    std::size_t requests_ = 0;
    int outstanding_ = 0;
    int peak_outstanding_ = 0;
    bool crashed_ = false;
};

struct MockCandidateSpec {
    std::string move;
    double winrate = 0.5;
    std::vector<std::string> pv;
};

enum class FaultKind { Drop, Garble, Delay, DuplicateId, UnknownId, Crash };

struct Fault {
    std::size_t call = 0;  // 1-based request number
    FaultKind kind = FaultKind::Drop;
    Millis delay{0};       // Delay only
};

struct MockAnalysisSpec {
    std::uint64_t seed = 1;
    // Fixed answers keyed by move-list text ("" = empty board).
    std::map<std::string, std::vector<MockCandidateSpec>> table;
    int candidates = 10;  // generated entries for positions missing from the table
    int pv_length = 9;    // including the candidate move
    bool shuffle_output = false;
    bool black_perspective = false;
    Millis latency{1};
    Millis jitter{0};  // extra seeded latency per response; reorders pipelined answers
    std::vector<Fault> faults;
};

class MockAnalysisEngine {
public:
    explicit MockAnalysisEngine(MockAnalysisSpec spec) : spec_(std::move(spec)) {}

    // Deterministic response object for a well-formed request; an "error"
    // response for illegal positions.
    nlohmann::json answer(const nlohmann::json& request) const;
    const MockAnalysisSpec& spec() const { return spec_; }

private:
    MockAnalysisSpec spec_;
};

class MockAnalysisChannel : public VirtualChannel {
public:
    explicit MockAnalysisChannel(MockAnalysisSpec spec);
    const MockAnalysisEngine& engine() const { return engine_; }

protected:
    void on_request(std::string_view line, std::size_t n) override;

private:
    MockAnalysisEngine engine_;
    Rng jitter_rng_;
};

enum class MockPolicy { FirstLegal, EpsilonGreedy, AlwaysPass };

struct MockGtpSpec {
    std::string name = "golm-mock";
    std::uint64_t seed = 1;
    MockPolicy policy = MockPolicy::EpsilonGreedy;
    double epsilon = 0.0;
    // Resign when asked for a move with at least this many moves played.
    std::optional<std::size_t> resign_after;
    // Crash on this (1-based) command.
    std::optional<std::size_t> crash_at_command;
    LegalityConfig rules{true};
};

// GTP engine state machine: one command line in, one response block out.
class MockGtpEngine {
public:
    explicit MockGtpEngine(MockGtpSpec spec);

    std::string handle(std::string_view command_line);
    bool quit_requested() const { return quit_; }
    const Board& board() const { return board_; }

    // Policy move for c on the current board (does not play it).
    std::optional<Point> choose(Color c);

private:
    MockGtpSpec spec_;
    Board board_;
    double komi_ = kDefaultKomi;
    std::size_t moves_played_ = 0;
    std::uint64_t clears_ = 0;
    Rng rng_;
    bool quit_ = false;
};

class MockGtpChannel : public VirtualChannel {
public:
    explicit MockGtpChannel(MockGtpSpec spec);
    const MockGtpEngine& engine() const { return engine_; }

protected:
    void on_request(std::string_view line, std::size_t n) override;

private:
    std::optional<std::size_t> crash_at_;
    MockGtpEngine engine_;
};

// Per-point preference table shared by every mock, in [0,1).
double mock_point_prior(int size, Point p);

}  // namespace golm
