#include "golm/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace golm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Subprocess transport

std::vector<std::string> split_command(std::string_view command) {
    std::vector<std::string> out;
    std::string cur;
    bool in_token = false;
    char quote = '\0';
    for (char ch : command) {
        if (quote) {
            if (ch == quote) quote = '\0';
            else cur.push_back(ch);
            continue;
        }
        if (ch == '\'' || ch == '"') {
            quote = ch;
            in_token = true;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            if (in_token) out.push_back(std::move(cur));
            cur.clear();
            in_token = false;
        } else {
            cur.push_back(ch);
            in_token = true;
        }
    }
    if (quote) throw Error(Errc::InvalidArgument, "unbalanced quote in command: " + std::string(command));
    if (in_token) out.push_back(std::move(cur));
    return out;
}

SubprocessChannel::SubprocessChannel(const std::vector<std::string>& argv) {
    if (argv.empty()) throw Error(Errc::EngineUnavailable, "empty engine command");
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) throw Error(Errc::EngineUnavailable, "pipe failed");
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw Error(Errc::EngineUnavailable, "pipe failed");
    }
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_ = fork();
    if (pid_ < 0) {
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
        throw Error(Errc::EngineUnavailable, "fork failed");
    }
    if (pid_ == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        execvp(args[0], args.data());
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    to_child_ = to_child[1];
    from_child_ = from_child[0];
}

SubprocessChannel::~SubprocessChannel() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            if (waitpid(pid_, &status, WNOHANG) == pid_) return;
            usleep(10'000);
        }
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
    }
}

void SubprocessChannel::write_line(std::string_view line) {
    std::string data(line);
    data.push_back('\n');
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::EngineCrashed, std::string("write to engine failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> SubprocessChannel::read_line(Millis timeout) {
    const Millis deadline = now() + timeout;
    while (true) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (eof_) {
            if (!buffer_.empty()) {
                std::string line = std::move(buffer_);
                buffer_.clear();
                return line;
            }
            throw Error(Errc::EngineCrashed, "engine closed its output");
        }
        const Millis remaining = deadline - now();
        if (remaining.count() <= 0) return std::nullopt;
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (ready < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::EngineCrashed, "poll failed");
        }
        if (ready == 0) return std::nullopt;
        char chunk[4096];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(Errc::EngineCrashed, "read from engine failed");
        }
        if (n == 0) eof_ = true;
        else buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

Millis SubprocessChannel::now() const {
    return std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now().time_since_epoch());
}

// ---------------------------------------------------------------------------
// Analysis session

AnalysisSession::AnalysisSession(std::unique_ptr<LineChannel> channel, AnalysisOptions opts)
    : channel_(std::move(channel)), opts_(opts) {
    if (opts_.max_in_flight < 1) throw Error(Errc::InvalidArgument, "max_in_flight must be >= 1");
}

json AnalysisSession::make_request(const std::string& id, const GameRecord& position, int top_k) {
    json moves = json::array();
    for (const auto& m : position.moves) {
        moves.push_back(json::array({std::string(1, color_symbol(m.color)), format_vertex(m.point, position.size)}));
    }
    return json{{"id", id},
                {"moves", moves},
                {"boardSize", position.size},
                {"komi", position.komi},
                {"maxCandidates", top_k}};
}

CandidateList AnalysisSession::decode(const json& response, const Pending& p, const std::string& raw) const {
    auto protocol = [&](const std::string& why) { return Error(Errc::ProtocolError, why, std::nullopt, raw); };
    if (auto err = response.find("error"); err != response.end()) {
        throw Error(Errc::IllegalPositionRejected, err->is_string() ? err->get<std::string>() : err->dump(),
                    std::nullopt, raw);
    }
    const auto tp = response.find("toPlay");
    if (tp == response.end() || !tp->is_string()) throw protocol("missing toPlay");
    const std::string tp_text = tp->get<std::string>();
    if (tp_text.size() != 1 || color_from_symbol(tp_text[0]) != p.to_play) throw protocol("unexpected toPlay");
    const auto infos = response.find("moveInfos");
    if (infos == response.end() || !infos->is_array() || infos->empty()) throw protocol("missing moveInfos");

    std::vector<Candidate> raw_cands;
    for (const auto& info : *infos) {
        if (!info.is_object()) throw protocol("moveInfos entry is not an object");
        Candidate c;
        const auto mv = info.find("move");
        const auto wr = info.find("winrate");
        if (mv == info.end() || !mv->is_string()) throw protocol("moveInfo without move");
        if (wr == info.end() || !wr->is_number()) throw protocol("moveInfo without winrate");
        try {
            c.move = parse_vertex(mv->get<std::string>(), p.size);
            if (auto pv = info.find("pv"); pv != info.end()) {
                if (!pv->is_array()) throw protocol("pv is not an array");
                for (const auto& v : *pv) {
                    if (!v.is_string()) throw protocol("pv entry is not a string");
                    c.pv.push_back(parse_vertex(v.get<std::string>(), p.size));
                }
            }
        } catch (const Error& e) {
            if (e.code() == Errc::ProtocolError) throw;
            throw protocol(e.what());
        }
        c.winrate = wr->get<double>();
        if (!std::isfinite(c.winrate)) throw protocol("non-finite winrate");
        if (opts_.perspective == WinratePerspective::Black && p.to_play == Color::White) c.winrate = 1.0 - c.winrate;
        if (c.pv.empty() || c.pv.front() != c.move) c.pv.insert(c.pv.begin(), c.move);
        raw_cands.push_back(std::move(c));
    }
    return normalize_candidates(p.to_play, std::move(raw_cands), p.top_k);
}

CandidateList AnalysisSession::analyze(const GameRecord& position, int top_k) {
    auto out = analyze_many({position}, top_k);
    if (out.front().error) throw *out.front().error;
    return std::move(*out.front().result);
}

std::vector<AnalysisOutcome> AnalysisSession::analyze_many(const std::vector<GameRecord>& positions, int top_k) {
    if (top_k < 1 || top_k > kDefaultTopK) throw Error(Errc::InvalidArgument, "top_k must be in 1..10");
    std::vector<AnalysisOutcome> out(positions.size());
    std::map<std::string, Pending> inflight;
    std::map<std::string, std::size_t> done_here;  // answered in this batch
    std::size_t next = 0;

    auto fail_inflight = [&](const Error& e) {
        for (const auto& [id, p] : inflight) {
            out[p.slot].error = e;
            abandoned_.insert(id);
        }
        inflight.clear();
    };
    auto fail_rest = [&](const Error& e) {
        fail_inflight(e);
        for (; next < positions.size(); ++next) out[next].error = e;
    };
    auto earliest = [&] {
        return std::min_element(inflight.begin(), inflight.end(), [](const auto& a, const auto& b) {
            return a.second.deadline < b.second.deadline ||
                   (a.second.deadline == b.second.deadline && a.second.slot < b.second.slot);
        });
    };

    while (next < positions.size() || !inflight.empty()) {
        while (next < positions.size() && inflight.size() < static_cast<std::size_t>(opts_.max_in_flight)) {
            const GameRecord& pos = positions[next];
            const std::string id = "req-" + std::to_string(next_id_++);
            try {
                channel_->write_line(make_request(id, pos, top_k).dump());
            } catch (const Error& e) {
                fail_rest(e);
                return out;
            }
            inflight.emplace(id, Pending{next, pos.to_play(), pos.size, top_k, channel_->now() + opts_.timeout});
            ++next;
        }

        const auto first = earliest();
        const Millis wait = std::max(Millis{0}, first->second.deadline - channel_->now());
        std::optional<std::string> line;
        try {
            line = channel_->read_line(wait);
        } catch (const Error& e) {
            fail_rest(e);
            return out;
        }
        if (!line) {
            const Millis now = channel_->now();
            for (auto it = inflight.begin(); it != inflight.end();) {
                if (it->second.deadline <= now) {
                    out[it->second.slot].error =
                        Error(Errc::Timeout, "no analysis response for " + it->first + " within " +
                                                 std::to_string(opts_.timeout.count()) + " ms");
                    abandoned_.insert(it->first);
                    it = inflight.erase(it);
                } else {
                    ++it;
                }
            }
            continue;
        }

        json resp;
        std::string id;
        bool parsed = true;
        try {
            resp = json::parse(*line);
            if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_string()) parsed = false;
            else id = resp["id"].get<std::string>();
        } catch (const json::exception&) {
            parsed = false;
        }
        if (!parsed) {
            // Unattributable line: charge it to the request that has waited longest.
            auto victim = earliest();
            out[victim->second.slot].error = Error(Errc::ProtocolError, "malformed response line", std::nullopt, *line);
            abandoned_.insert(victim->first);
            inflight.erase(victim);
            continue;
        }
        if (abandoned_.count(id)) continue;
        auto it = inflight.find(id);
        if (it == inflight.end()) {
            const bool duplicate = answered_.count(id) > 0;
            if (auto hit = done_here.find(id); hit != done_here.end()) {
                out[hit->second].result.reset();
                out[hit->second].error =
                    Error(Errc::ProtocolError, "duplicate response id '" + id + "'", std::nullopt, *line);
            }
            fail_inflight(Error(Errc::ProtocolError,
                                std::string(duplicate ? "duplicate" : "unknown") + " response id '" + id + "'",
                                std::nullopt, *line));
            continue;
        }
        try {
            out[it->second.slot].result = decode(resp, it->second, *line);
        } catch (const Error& e) {
            out[it->second.slot].error = e;
        }
        answered_.insert(id);
        done_here[id] = it->second.slot;
        inflight.erase(it);
    }

    // A repeated answer usually sits right behind the first copy. Charge it
    // to the request it names instead of letting it poison the next call.
    while (true) {
        std::optional<std::string> extra;
        try {
            extra = channel_->read_line(Millis{0});
        } catch (const Error&) {
            break;
        }
        if (!extra) break;
        try {
            const json resp = json::parse(*extra);
            if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_string()) continue;
            auto hit = done_here.find(resp["id"].get<std::string>());
            if (hit == done_here.end()) continue;
            out[hit->second].result.reset();
            out[hit->second].error =
                Error(Errc::ProtocolError, "duplicate response id '" + hit->first + "'", std::nullopt, *extra);
        } catch (const json::exception&) {
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// GTP session

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::string gtp_color(Color c) { return c == Color::Black ? "B" : "W"; }

std::string format_komi(double komi) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", komi);
    return buf;
}

}  // namespace

GtpSession::GtpSession(std::unique_ptr<LineChannel> channel, GtpOptions opts)
    : channel_(std::move(channel)), opts_(opts) {}

std::string GtpSession::command(std::string_view cmd, std::optional<Millis> timeout) {
    if (desynced_) throw Error(Errc::EngineCrashed, "GTP session lost sync after an earlier timeout");
    channel_->write_line(cmd);
    const Millis deadline = channel_->now() + timeout.value_or(opts_.command_timeout);
    auto next_line = [&]() -> std::string {
        const Millis remaining = std::max(Millis{0}, deadline - channel_->now());
        auto line = channel_->read_line(remaining);
        if (!line) {
            desynced_ = true;
            throw Error(Errc::Timeout, "no GTP response to '" + std::string(cmd) + "'");
        }
        return *line;
    };
    std::string first;
    do {
        first = trim(next_line());
    } while (first.empty());
    std::string payload;
    std::string more;
    while (!(more = next_line()).empty()) payload += "\n" + more;
    if (first[0] != '=' && first[0] != '?') {
        throw Error(Errc::ProtocolError, "unexpected GTP response", std::nullopt, first);
    }
    std::size_t i = 1;
    while (i < first.size() && std::isdigit(static_cast<unsigned char>(first[i]))) ++i;
    std::string body = trim(std::string_view(first).substr(i)) + payload;
    if (first[0] == '?') throw Error(Errc::GtpFailure, body, std::nullopt, body);
    return body;
}

void GtpSession::boardsize(int size) { command("boardsize " + std::to_string(size)); }

void GtpSession::komi(double komi) { command("komi " + format_komi(komi)); }

void GtpSession::play(const Move& m, int size) {
    command("play " + gtp_color(m.color) + " " + format_vertex(m.point, size));
}

GenmoveResult GtpSession::genmove(Color c, int size) {
    const std::string reply = lower(trim(command("genmove " + gtp_color(c), opts_.genmove_timeout)));
    GenmoveResult r;
    r.move = Move::pass(c);
    if (reply == "resign") {
        r.resign = true;
        return r;
    }
    try {
        r.move.point = parse_vertex(reply, size);
    } catch (const Error&) {
        throw Error(Errc::ProtocolError, "bad genmove reply", std::nullopt, reply);
    }
    return r;
}

void GtpSession::quit() {
    try {
        command("quit", Millis{1000});
    } catch (const Error&) {
    }
}

// ---------------------------------------------------------------------------
// Virtual channel

void VirtualChannel::write_line(std::string_view line) {
    if (crashed_) throw Error(Errc::EngineCrashed, "mock engine has crashed");
    ++requests_;
    ++outstanding_;
    peak_outstanding_ = std::max(peak_outstanding_, outstanding_);
    on_request(line, requests_);
}

void VirtualChannel::emit(std::string line, Millis delay, bool completes) {
    queue_.push_back(Scheduled{now_ + delay, seq_++, std::move(line), completes});
}

std::optional<std::string> VirtualChannel::read_line(Millis timeout) {
    if (crashed_) throw Error(Errc::EngineCrashed, "mock engine has crashed");
    auto best = std::min_element(queue_.begin(), queue_.end(), [](const Scheduled& a, const Scheduled& b) {
        return a.ready < b.ready || (a.ready == b.ready && a.seq < b.seq);
    });
    if (best == queue_.end() || best->ready > now_ + timeout) {
        now_ += timeout;
        return std::nullopt;
    }
    now_ = std::max(now_, best->ready);
    std::string line = std::move(best->line);
    if (best->completes) --outstanding_;
    queue_.erase(best);
    return line;
}

// ---------------------------------------------------------------------------
// Mock analysis engine

namespace {

// Uniform over legal points: rejection sampling first, the full list when
// the board is crowded.
std::optional<Point> random_reply(const Board& b, Color c, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(b.size());
    for (int tries = 0; tries < 16; ++tries) {
        const Point p{static_cast<int>(rng.below(n)), static_cast<int>(rng.below(n))};
        if (!b.check(Move::place(c, p), LegalityConfig{false})) return p;
    }
    const auto all = legal_moves(b, c, LegalityConfig{false});
    return all.empty() ? std::nullopt : std::optional<Point>(all[rng.below(all.size())]);
}

}  // namespace

json MockAnalysisEngine::answer(const json& request) const {
    const std::string id = request.value("id", std::string());
    auto error = [&](const std::string& why) { return json{{"id", id}, {"error", why}}; };
    GameRecord rec;
    int max_candidates = kDefaultTopK;
    try {
        rec.size = request.at("boardSize").get<int>();
        rec.komi = request.at("komi").get<double>();
        max_candidates = request.at("maxCandidates").get<int>();
        for (const auto& m : request.at("moves")) {
            const std::string sym = m.at(0).get<std::string>();
            if (sym.size() != 1 || !color_from_symbol(sym[0])) return error("bad color");
            rec.moves.push_back(Move{*color_from_symbol(sym[0]), parse_vertex(m.at(1).get<std::string>(), rec.size)});
        }
    } catch (const std::exception& e) {
        return error(std::string("malformed request: ") + e.what());
    }
    Board board(rec.size);
    try {
        board = replay(rec.moves, LegalityConfig{false}, rec.size).board;
    } catch (const Error& e) {
        return error(std::string("illegal position: ") + e.what());
    }
    const Color to_play = rec.to_play();
    const std::string key = format_move_list(rec);
    Rng rng(mix_seed(spec_.seed, fnv1a64(key)));

    struct Info {
        std::string move;
        double winrate;
        std::vector<std::string> pv;
    };
    std::vector<Info> infos;
    if (auto it = spec_.table.find(key); it != spec_.table.end()) {
        for (const auto& c : it->second) {
            std::vector<std::string> pv = c.pv;
            if (pv.empty()) pv.push_back(c.move);
            infos.push_back(Info{c.move, c.winrate, pv});
        }
    } else {
        std::vector<Point> legal = legal_moves(board, to_play, LegalityConfig{false});
        rng.shuffle(legal);
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(spec_.candidates, 1)), legal.size());
        for (std::size_t i = 0; i < k; ++i) {
            Info info;
            info.move = format_coord(legal[i], rec.size);
            // whole permille values, so one-decimal percents print exactly
            info.winrate = static_cast<double>(200 + rng.below(601)) / 1000.0;
            Board line = board;
            Color mover = to_play;
            std::optional<Point> next = legal[i];
            for (int ply = 0; ply < spec_.pv_length; ++ply) {
                info.pv.push_back(format_vertex(next, rec.size));
                line.play(Move{mover, next}, LegalityConfig{false});
                mover = opponent(mover);
                next = random_reply(line, mover, rng);
            }
            infos.push_back(std::move(info));
        }
        if (infos.empty()) infos.push_back(Info{"pass", 0.5, {"pass"}});
    }
    std::stable_sort(infos.begin(), infos.end(), [](const Info& a, const Info& b) { return a.winrate > b.winrate; });
    if (max_candidates >= 1 && infos.size() > static_cast<std::size_t>(max_candidates)) infos.resize(max_candidates);
    if (spec_.shuffle_output) rng.shuffle(infos);

    json move_infos = json::array();
    for (const auto& info : infos) {
        double w = info.winrate;
        if (spec_.black_perspective && to_play == Color::White) w = 1.0 - w;
        move_infos.push_back(json{{"move", info.move}, {"winrate", w}, {"pv", info.pv}});
    }
    return json{{"id", id}, {"toPlay", std::string(1, color_symbol(to_play))}, {"moveInfos", move_infos}};
}

MockAnalysisChannel::MockAnalysisChannel(MockAnalysisSpec spec)
    : engine_(std::move(spec)), jitter_rng_(mix_seed(engine_.spec().seed, 0x6a1773)) {}

void MockAnalysisChannel::on_request(std::string_view line, std::size_t n) {
    const auto& spec = engine_.spec();
    Millis delay = spec.latency;
    if (spec.jitter.count() > 0) delay += Millis{static_cast<long long>(jitter_rng_.below(spec.jitter.count() + 1))};

    const Fault* fault = nullptr;
    for (const auto& f : spec.faults) {
        if (f.call == n) fault = &f;
    }
    json request;
    try {
        request = json::parse(line);
    } catch (const json::exception&) {
        emit(R"({"id":"","error":"unparseable request"})", delay);
        return;
    }
    if (fault && fault->kind == FaultKind::Crash) {
        crash();
        return;
    }
    if (fault && fault->kind == FaultKind::Drop) {
        forget_request();
        return;
    }
    json response = engine_.answer(request);
    if (fault && fault->kind == FaultKind::Garble) {
        const std::string text = response.dump();
        emit(text.substr(0, text.size() / 2) + "#garbled", delay);
        return;
    }
    if (fault && fault->kind == FaultKind::Delay) delay += fault->delay;
    if (fault && fault->kind == FaultKind::UnknownId) response["id"] = "ghost-" + std::to_string(n);
    emit(response.dump(), delay);
    if (fault && fault->kind == FaultKind::DuplicateId) emit(response.dump(), delay, false);
}

// ---------------------------------------------------------------------------
// Mock GTP engine

double mock_point_prior(int size, Point p) {
    const std::uint64_t h = mix_seed(0x9a7e5eedULL + static_cast<std::uint64_t>(size),
                                     static_cast<std::uint64_t>(p.row * size + p.col));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

MockGtpEngine::MockGtpEngine(MockGtpSpec spec)
    : spec_(std::move(spec)), board_(kDefaultBoardSize), rng_(mix_seed(spec_.seed, 0)) {}

std::optional<Point> MockGtpEngine::choose(Color c) {
    if (spec_.policy == MockPolicy::AlwaysPass) return std::nullopt;
    const auto legal = legal_moves(board_, c, spec_.rules);
    if (spec_.policy == MockPolicy::FirstLegal) {
        return legal.empty() ? std::nullopt : std::optional<Point>(legal.front());
    }
    std::vector<Point> options;
    for (const auto& p : legal) {
        if (!is_simple_eye(board_, p, c)) options.push_back(p);
    }
    if (options.empty()) return std::nullopt;
    if (rng_.unit() < spec_.epsilon) return options[rng_.below(options.size())];

    const double sign = c == Color::Black ? 1.0 : -1.0;
    const double baseline = sign * score_area(board_, 0.0);
    std::optional<Point> best;
    double best_value = -1e18;
    double best_gain = 0.0;
    for (const auto& p : options) {
        Board after = board_;
        after.play(Move::place(c, p), spec_.rules);
        const double gain = sign * score_area(after, 0.0) - baseline;
        const double value = gain + 1e-3 * mock_point_prior(board_.size(), p);
        if (value > best_value) {
            best_value = value;
            best_gain = gain;
            best = p;
        }
    }
    if (best_gain <= 0.0) return std::nullopt;
    return best;
}

std::string MockGtpEngine::handle(std::string_view command_line) {
    std::string line = trim(command_line);
    if (line.empty()) return {};
    std::string id;
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) id.push_back(line[i++]);
    line = trim(std::string_view(line).substr(i));

    std::vector<std::string> args = split_command(line);
    auto ok = [&](const std::string& payload) { return "=" + id + (payload.empty() ? "" : " " + payload) + "\n\n"; };
    auto fail = [&](const std::string& why) { return "?" + id + " " + why + "\n\n"; };
    if (args.empty()) return fail("empty command");
    const std::string cmd = lower(args[0]);

    auto parse_color = [](const std::string& s) -> std::optional<Color> {
        const std::string l = lower(s);
        if (l == "b" || l == "black") return Color::Black;
        if (l == "w" || l == "white") return Color::White;
        return std::nullopt;
    };

    if (cmd == "protocol_version") return ok("2");
    if (cmd == "name") return ok(spec_.name);
    if (cmd == "quit") {
        quit_ = true;
        return ok("");
    }
    if (cmd == "boardsize") {
        if (args.size() != 2) return fail("syntax error");
        try {
            const int size = std::stoi(args[1]);
            board_ = Board(size);
        } catch (const std::exception&) {
            return fail("unacceptable size");
        }
        moves_played_ = 0;
        return ok("");
    }
    if (cmd == "komi") {
        if (args.size() != 2) return fail("syntax error");
        try {
            komi_ = std::stod(args[1]);
        } catch (const std::exception&) {
            return fail("syntax error");
        }
        return ok("");
    }
    if (cmd == "clear_board") {
        board_ = Board(board_.size());
        moves_played_ = 0;
        rng_ = Rng(mix_seed(spec_.seed, ++clears_));
        return ok("");
    }
    if (cmd == "play") {
        if (args.size() != 3) return fail("syntax error");
        const auto color = parse_color(args[1]);
        if (!color) return fail("syntax error");
        try {
            board_.play(Move{*color, parse_vertex(args[2], board_.size())}, spec_.rules);
        } catch (const Error&) {
            return fail("illegal move");
        }
        ++moves_played_;
        return ok("");
    }
    if (cmd == "genmove") {
        if (args.size() != 2) return fail("syntax error");
        const auto color = parse_color(args[1]);
        if (!color) return fail("syntax error");
        if (spec_.resign_after && moves_played_ >= *spec_.resign_after) return ok("resign");
        const auto p = choose(*color);
        board_.play(Move{*color, p}, spec_.rules);
        ++moves_played_;
        return ok(format_vertex(p, board_.size()));
    }
    return fail("unknown command");
}

MockGtpChannel::MockGtpChannel(MockGtpSpec spec) : crash_at_(spec.crash_at_command), engine_(std::move(spec)) {}

void MockGtpChannel::on_request(std::string_view line, std::size_t n) {
    if (crash_at_ && n >= *crash_at_) {
        crash();
        return;
    }
    const std::string reply = engine_.handle(line);
    if (reply.empty()) {
        forget_request();
        return;
    }
    // "= x\n\n" -> "= x", ""
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < reply.size()) {
        const auto nl = reply.find('\n', start);
        lines.push_back(reply.substr(start, nl - start));
        start = nl + 1;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) emit(lines[i], Millis{1}, i + 1 == lines.size());
}

}  // namespace golm
