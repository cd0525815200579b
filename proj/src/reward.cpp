#include "golm/reward.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace golm {

const char* reward_mode_name(RewardMode m) {
    switch (m) {
        case RewardMode::Full: return "full";
        case RewardMode::Top1Only: return "top1";
        case RewardMode::Top3Flat: return "top3";
        case RewardMode::TierOnly: return "tier";
    }
    return "full";
}

RewardMode parse_reward_mode(std::string_view name) {
    if (name == "full") return RewardMode::Full;
    if (name == "top1") return RewardMode::Top1Only;
    if (name == "top3") return RewardMode::Top3Flat;
    if (name == "tier") return RewardMode::TierOnly;
    throw Error(Errc::InvalidArgument, "unknown reward mode '" + std::string(name) + "'");
}

RewardParams::RewardParams(double alpha1, double alpha2, double beta1, double beta2, double c1, double c2, double c3,
                           RewardMode mode)
    : alpha1_(alpha1), alpha2_(alpha2), beta1_(beta1), beta2_(beta2), c1_(c1), c2_(c2), c3_(c3), mode_(mode) {
    if (!(alpha1 >= 0 && alpha2 >= 0 && beta1 >= 0 && beta2 >= 0)) {
        throw Error(Errc::InvalidArgument, "alpha and beta must be non-negative");
    }
    if (!(c1 > c2 && c2 > c3 && c3 > alpha1 + alpha2)) {
        throw Error(Errc::InvalidArgument, "reward constants must satisfy c1 > c2 > c3 > alpha1 + alpha2");
    }
    if (!(c1 <= 1.0)) throw Error(Errc::InvalidArgument, "c1 must not exceed the rank-1 reward of 1");
}

RewardParams RewardParams::with_mode(RewardMode m) const {
    RewardParams p = *this;
    p.mode_ = m;
    return p;
}

std::string FormatError::describe() const {
    switch (kind) {
        case Kind::MissingField: return "MissingField(" + field + ")";
        case Kind::BadCoordinate: return "BadCoordinate";
        case Kind::BadWinrate: return "BadWinrate";
        case Kind::BadPlayer: return "BadPlayer";
        case Kind::WrongPlayer: return "WrongPlayer";
    }
    return "FormatError";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

// Value after the last "label" in text, ending at '}' or a line break.
std::optional<std::string_view> last_field(std::string_view text, std::string_view label) {
    const auto pos = text.rfind(label);
    if (pos == std::string_view::npos) return std::nullopt;
    std::string_view rest = text.substr(pos + label.size());
    const auto end = rest.find_first_of("}\n\r");
    if (end != std::string_view::npos) rest = rest.substr(0, end);
    return trim(rest);
}

// Strips an optional LaTeX-ish "\%" and surrounding "\text{...}" debris.
std::string clean_value(std::string_view v) {
    std::string out;
    for (char ch : v) {
        if (ch == '\\') continue;
        out.push_back(ch);
    }
    return std::string(trim(out));
}

}  // namespace

std::optional<double> parse_winrate_text(std::string_view text) {
    std::string s = clean_value(text);
    bool percent = false;
    if (!s.empty() && s.back() == '%') {
        percent = true;
        s.pop_back();
        s = std::string(trim(s));
    }
    if (s.empty()) return std::nullopt;
    std::string int_part;
    std::string frac_part;
    bool seen_dot = false;
    for (char ch : s) {
        if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            (seen_dot ? frac_part : int_part).push_back(ch);
        } else {
            return std::nullopt;
        }
    }
    if (int_part.empty() && frac_part.empty()) return std::nullopt;
    if (int_part.empty()) int_part = "0";
    if (percent) {
        // move the decimal point two places left in the text itself
        while (int_part.size() < 3) int_part.insert(int_part.begin(), '0');
        frac_part = int_part.substr(int_part.size() - 2) + frac_part;
        int_part = int_part.substr(0, int_part.size() - 2);
    }
    const std::string literal = int_part + "." + (frac_part.empty() ? "0" : frac_part);
    const double v = std::strtod(literal.c_str(), nullptr);
    if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
    return v;
}

ParseResult parse_response(std::string_view text, int size) {
    std::string_view scope = text;
    const auto open = text.rfind("<answer>");
    if (open != std::string_view::npos) {
        scope = text.substr(open + 8);
        const auto close = scope.find("</answer>");
        if (close != std::string_view::npos) scope = scope.substr(0, close);
    }
    const auto player = last_field(scope, "Next player:");
    if (!player) return FormatError{FormatError::Kind::MissingField, "Next player"};
    const auto position = last_field(scope, "Next position:");
    if (!position) return FormatError{FormatError::Kind::MissingField, "Next position"};
    const auto winrate = last_field(scope, "Win rate:");
    if (!winrate) return FormatError{FormatError::Kind::MissingField, "Win rate"};

    ParsedResponse pr;
    pr.player_text = std::string(*player);
    pr.move_text = std::string(*position);
    pr.winrate_text = std::string(*winrate);

    const std::string who = lower(clean_value(*player));
    if (who == "black" || who == "x") pr.player = Color::Black;
    else if (who == "white" || who == "o") pr.player = Color::White;
    else return FormatError{FormatError::Kind::BadPlayer, "Next player"};

    try {
        pr.move = parse_vertex(clean_value(*position), size);
    } catch (const Error&) {
        return FormatError{FormatError::Kind::BadCoordinate, "Next position"};
    }
    const auto w = parse_winrate_text(*winrate);
    if (!w) return FormatError{FormatError::Kind::BadWinrate, "Win rate"};
    pr.predicted_winrate = *w;
    return pr;
}

std::optional<int> rank_of(const std::optional<Point>& move, const CandidateList& cl) {
    for (const auto& c : cl.candidates) {
        if (c.move == move) return c.rank;
    }
    return std::nullopt;
}

double saturating_penalty(double alpha, double beta, double x) {
    const double bx = beta * x;
    return alpha * (bx / (1.0 + bx));
}

RewardOutcome compute_reward(const ParseResult& pr, const CandidateList& cl, const RewardParams& params) {
    RewardOutcome out;
    if (const auto* fe = std::get_if<FormatError>(&pr)) {
        out.format_error = *fe;
        return out;
    }
    const auto& resp = std::get<ParsedResponse>(pr);
    if (resp.player != cl.to_play) {
        out.format_error = FormatError{FormatError::Kind::WrongPlayer, "Next player"};
        return out;
    }
    out.format_ok = true;

    const bool tier_only = params.mode() == RewardMode::TierOnly;
    const double a1 = tier_only ? 0.0 : params.alpha1();
    const double a2 = tier_only ? 0.0 : params.alpha2();
    const double miss = params.c3() - a1 - a2;

    out.rank = rank_of(resp.move, cl);
    if (!out.rank || *out.rank > kDefaultTopK) {
        out.reward = miss;
        return out;
    }
    const int rank = *out.rank;
    const double w = cl.candidates[static_cast<std::size_t>(rank - 1)].winrate;
    const double gap = std::max(0.0, cl.best_winrate() - w);
    const double p1 = saturating_penalty(a1, params.beta1(), std::fabs(resp.predicted_winrate - w));
    const double p2 = saturating_penalty(a2, params.beta2(), gap);

    switch (params.mode()) {
        case RewardMode::Top1Only:
            if (rank == 1) {
                out.winrate_penalty = p1;
                out.reward = 1.0 - p1;
            } else {
                out.reward = miss;
            }
            return out;
        case RewardMode::Top3Flat:
            if (rank <= 3) {
                out.winrate_penalty = p1;
                out.reward = 1.0 - p1;
            } else {
                out.reward = miss;
            }
            return out;
        case RewardMode::Full:
        case RewardMode::TierOnly:
            break;
    }
    out.winrate_penalty = p1;
    if (rank == 1) {
        out.reward = 1.0 - p1;
    } else {
        out.gap_penalty = p2;
        out.reward = (rank <= 3 ? params.c1() : params.c2()) - p1 - p2;
    }
    return out;
}

}  // namespace golm
