#include "golm/arena.hpp"

#include <algorithm>
#include <cmath>

#include "golm/dataset.hpp"
#include "golm/rng.hpp"

namespace golm {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Black: return "Black";
        case Outcome::White: return "White";
        case Outcome::Draw: return "Draw";
    }
    return "Draw";
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::TwoPasses: return "TwoPasses";
        case Termination::Resign: return "Resign";
        case Termination::MoveCap: return "MoveCap";
        case Termination::Crash: return "Crash";
    }
    return "Crash";
}

namespace {

Outcome loss_for(Color c) { return c == Color::Black ? Outcome::White : Outcome::Black; }

Outcome by_score(double margin) {
    if (margin > 0) return Outcome::Black;
    if (margin < 0) return Outcome::White;
    return Outcome::Draw;
}

}  // namespace

MatchResult play_game(GtpSession& black, GtpSession& white, const ArenaConfig& cfg, const std::string& black_id,
                      const std::string& white_id) {
    MatchResult m;
    m.black = black_id;
    m.white = white_id;
    m.record.size = cfg.size;
    m.record.komi = cfg.komi;
    m.record.black_player = black_id;
    m.record.white_player = white_id;

    auto session = [&](Color c) -> GtpSession& { return c == Color::Black ? black : white; };
    auto crash = [&](Color c, const std::string& why) {
        m.winner = loss_for(c);
        m.termination = Termination::Crash;
        m.note = std::string(color_name(c)) + ": " + why;
        return m;
    };

    for (Color c : {Color::Black, Color::White}) {
        try {
            session(c).boardsize(cfg.size);
            session(c).komi(cfg.komi);
            session(c).clear_board();
        } catch (const Error& e) {
            return crash(c, e.what());
        }
    }

    Board board(cfg.size);
    Color turn = Color::Black;
    int consecutive_passes = 0;
    const std::size_t cap = cfg.effective_move_cap();
    auto finish_scored = [&](Termination t) {
        const double margin = score_area(board, cfg.komi);
        m.score_margin = margin;
        m.winner = by_score(margin);
        m.termination = t;
        return m;
    };

    while (true) {
        if (m.record.moves.size() >= cap) return finish_scored(Termination::MoveCap);
        GenmoveResult g;
        try {
            g = session(turn).genmove(turn, cfg.size);
        } catch (const Error& e) {
            return crash(turn, e.what());
        }
        if (g.resign) {
            m.winner = loss_for(turn);
            m.termination = Termination::Resign;
            return m;
        }
        const Move mv{turn, g.move.point};
        if (const auto bad = board.check(mv, cfg.rules)) {
            return crash(turn, std::string("illegal move ") + format_vertex(mv.point, cfg.size) + " (" +
                                   errc_name(*bad) + ")");
        }
        board.play(mv, cfg.rules);
        m.record.moves.push_back(mv);
        try {
            session(opponent(turn)).play(mv, cfg.size);
        } catch (const Error& e) {
            return crash(opponent(turn), e.what());
        }
        consecutive_passes = mv.is_pass() ? consecutive_passes + 1 : 0;
        if (consecutive_passes >= 2) return finish_scored(Termination::TwoPasses);
        turn = opponent(turn);
    }
}

double elo_expected(double ra, double rb) { return 1.0 / (1.0 + std::pow(10.0, (rb - ra) / 400.0)); }

std::pair<double, double> elo_update(double ra, double rb, double s_a, double k) {
    if (!(s_a == 0.0 || s_a == 0.5 || s_a == 1.0)) {
        throw Error(Errc::InvalidArgument, "score must be 0, 0.5 or 1");
    }
    // B's change is the exact negation of A's so the pair sum is preserved
    // up to the rounding of the two additions.
    const double delta = k * (s_a - elo_expected(ra, rb));
    return {ra + delta, rb - delta};
}

void EloTable::add(const std::string& id) { ratings_.emplace(id, initial_); }

double EloTable::rating(const std::string& id) const {
    auto it = ratings_.find(id);
    return it == ratings_.end() ? initial_ : it->second;
}

void EloTable::record(const std::string& a, const std::string& b, double s_a) {
    add(a);
    add(b);
    auto [ra, rb] = elo_update(ratings_[a], ratings_[b], s_a, k_);
    ratings_[a] = ra;
    ratings_[b] = rb;
}

void EloTable::record(const MatchResult& m) {
    const double s = m.winner == Outcome::Black ? 1.0 : m.winner == Outcome::White ? 0.0 : 0.5;
    record(m.black, m.white, s);
    history_.push_back(m);
}

double EloTable::total() const {
    double t = 0.0;
    for (const auto& [id, r] : ratings_) t += r;
    return t;
}

std::vector<std::string> EloTable::ranking() const {
    std::vector<std::string> ids;
    for (const auto& [id, r] : ratings_) ids.push_back(id);
    std::stable_sort(ids.begin(), ids.end(),
                     [&](const std::string& a, const std::string& b) { return ratings_.at(a) > ratings_.at(b); });
    return ids;
}

void WinMatrix::record(const MatchResult& m) {
    auto& fb = cells_[{m.black, m.white}];
    auto& fw = cells_[{m.white, m.black}];
    ++fb.games;
    ++fw.games;
    if (m.winner == Outcome::Black) ++fb.wins;
    else if (m.winner == Outcome::White) ++fw.wins;
    else {
        ++fb.draws;
        ++fw.draws;
    }
}

PairStats WinMatrix::at(const std::string& a, const std::string& b) const {
    auto it = cells_.find({a, b});
    return it == cells_.end() ? PairStats{} : it->second;
}

int WinMatrix::total_games() const {
    int t = 0;
    for (const auto& [k, v] : cells_) t += v.games;
    return t / 2;
}

TournamentResult run_tournament(const std::vector<EngineEntry>& engines, const TournamentConfig& cfg) {
    if (engines.size() < 2) throw Error(Errc::InvalidArgument, "a tournament needs at least two engines");
    if (cfg.games_per_pair < 2 || cfg.games_per_pair % 2 != 0) {
        throw Error(Errc::InvalidArgument, "games_per_pair must be a positive even number");
    }
    TournamentResult out{EloTable(cfg.k, cfg.initial_rating), {}, {}, {}};
    for (const auto& e : engines) out.elo.add(e.id);

    struct Slot {
        std::size_t a, b;
        int game;
        std::uint64_t seed;
    };
    std::vector<Slot> schedule;
    std::uint64_t ordinal = 0;
    for (std::size_t a = 0; a < engines.size(); ++a) {
        for (std::size_t b = a + 1; b < engines.size(); ++b) {
            for (int g = 0; g < cfg.games_per_pair; ++g) {
                schedule.push_back({a, b, g, mix_seed(cfg.seed, ++ordinal)});
            }
        }
    }
    Rng rng(cfg.seed);
    rng.shuffle(schedule);

    auto launch = [&](std::size_t i, std::uint64_t seed) {
        return std::make_unique<GtpSession>(engines[i].launch(seed), cfg.gtp);
    };

    // Availability probe per pair; an engine that cannot start drops the pair.
    std::map<std::pair<std::size_t, std::size_t>, bool> usable;
    for (const auto& s : schedule) {
        const auto key = std::make_pair(s.a, s.b);
        if (usable.count(key)) continue;
        bool ok = true;
        for (std::size_t i : {s.a, s.b}) {
            try {
                launch(i, 0)->name();
            } catch (const std::exception& e) {
                ok = false;
                out.skipped.push_back(engines[s.a].id + " vs " + engines[s.b].id + ": " + errc_name(Errc::EngineUnavailable) +
                                      " (" + engines[i].id + ": " + e.what() + ")");
                break;
            }
        }
        usable[key] = ok;
    }

    for (const auto& s : schedule) {
        if (!usable[{s.a, s.b}]) continue;
        const std::size_t bi = s.game % 2 == 0 ? s.a : s.b;
        const std::size_t wi = s.game % 2 == 0 ? s.b : s.a;
        MatchResult m;
        std::unique_ptr<GtpSession> black;
        std::unique_ptr<GtpSession> white;
        try {
            black = launch(bi, mix_seed(s.seed, 1));
        } catch (const std::exception& e) {
            m = MatchResult{engines[bi].id, engines[wi].id, Outcome::White, Termination::Crash, {}, {}, e.what()};
        }
        if (black) {
            try {
                white = launch(wi, mix_seed(s.seed, 2));
            } catch (const std::exception& e) {
                m = MatchResult{engines[bi].id, engines[wi].id, Outcome::Black, Termination::Crash, {}, {}, e.what()};
            }
        }
        if (black && white) {
            m = play_game(*black, *white, cfg.game, engines[bi].id, engines[wi].id);
            for (auto* sess : {black.get(), white.get()}) {
                try {
                    sess->quit();
                } catch (const Error&) {
                }
            }
        }
        out.elo.record(m);
        out.matrix.record(m);
        out.games.push_back(std::move(m));
    }
    return out;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error(Errc::LengthMismatch, "pearson_r needs equal-length inputs");
    if (xs.size() < 2) throw Error(Errc::InvalidArgument, "pearson_r needs at least two points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw Error(Errc::NonFiniteInput, "non-finite input");
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(Errc::DegenerateVariance, "zero variance input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

nlohmann::json elo_to_json(const EloTable& t) {
    nlohmann::json ratings = nlohmann::json::object();
    for (const auto& [id, r] : t.ratings()) ratings[id] = r;
    return {{"k", t.k()}, {"ratings", ratings}, {"ranking", t.ranking()}, {"games", t.history().size()}};
}

nlohmann::json matrix_to_json(const WinMatrix& m) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [key, v] : m.cells()) {
        cells.push_back({{"a", key.first},
                         {"b", key.second},
                         {"games", v.games},
                         {"wins", v.wins},
                         {"draws", v.draws},
                         {"winrate", v.winrate()}});
    }
    return {{"total_games", m.total_games()}, {"cells", cells}};
}

nlohmann::json match_to_json(const MatchResult& m) {
    nlohmann::json j{{"black", m.black},
                     {"white", m.white},
                     {"winner", outcome_name(m.winner)},
                     {"termination", termination_name(m.termination)},
                     {"record", m.record}};
    j["score_margin"] = m.score_margin ? nlohmann::json(*m.score_margin) : nlohmann::json(nullptr);
    if (!m.note.empty()) j["note"] = m.note;
    return j;
}

MockGtpSpec epsilon_family_member(int index, std::uint64_t seed) {
    constexpr int n = static_cast<int>(std::size(kEpsilonFamily));
    if (index < 0 || index >= n) throw Error(Errc::InvalidArgument, "no such family member");
    MockGtpSpec spec;
    spec.name = "eps-" + std::to_string(index);
    spec.seed = seed;
    spec.policy = MockPolicy::EpsilonGreedy;
    spec.epsilon = kEpsilonFamily[index];
    return spec;
}

}  // namespace golm
