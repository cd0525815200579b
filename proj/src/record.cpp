#include "golm/record.hpp"

#include <cctype>
#include <cstdlib>
#include <utility>

namespace golm {

GameRecord GameRecord::prefix(std::size_t k) const {
    GameRecord out = *this;
    if (k < out.moves.size()) out.moves.resize(k);
    return out;
}

Color GameRecord::to_play() const {
    return moves.empty() ? Color::Black : opponent(moves.back().color);
}

// ---------------------------------------------------------------------------
// Move lists

std::string format_move_token(std::size_t number, const Move& m, int size) {
    std::string out = std::to_string(number);
    out += '.';
    out += color_symbol(m.color);
    out += '-';
    out += format_vertex(m.point, size);
    return out;
}

std::string format_move_list(const GameRecord& r) {
    std::string out;
    for (std::size_t i = 0; i < r.moves.size(); ++i) {
        if (i) out += ' ';
        out += format_move_token(i + 1, r.moves[i], r.size);
    }
    return out;
}

GameRecord parse_move_list(std::string_view text, int size, bool enforce_alternation) {
    GameRecord rec;
    rec.size = size;
    rec.alternation_checked = enforce_alternation;
    std::size_t pos = 0;
    std::size_t expected = 1;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
        const std::string_view token = text.substr(pos, end - pos);
        pos = end;

        auto malformed = [&] {
            return Error(Errc::MalformedToken, "token '" + std::string(token) + "'", expected,
                         std::string(token));
        };
        std::size_t i = 0;
        std::size_t number = 0;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
            number = number * 10 + static_cast<std::size_t>(token[i] - '0');
            if (number > 100000000) throw malformed();
            ++i;
        }
        if (i == 0 || i + 3 > token.size() || token[i] != '.' || token[i + 2] != '-') throw malformed();
        const auto color = color_from_symbol(token[i + 1]);
        if (!color) throw malformed();
        const std::string_view coord = token.substr(i + 3);
        if (coord.empty()) throw malformed();
        if (number != expected) {
            throw Error(Errc::IndexGap,
                        "expected move " + std::to_string(expected) + ", found " + std::to_string(number),
                        expected, std::string(token));
        }
        if (enforce_alternation) {
            const Color want = rec.moves.empty() ? Color::Black : opponent(rec.moves.back().color);
            if (*color != want) {
                throw Error(Errc::ColorOrderViolation,
                            "move " + std::to_string(number) + " should be " + color_symbol(want), expected,
                            std::string(token));
            }
        }
        std::optional<Point> point;
        try {
            point = parse_vertex(coord, size);
        } catch (const Error& e) {
            throw Error(Errc::InvalidCoordinate, e.what(), expected, std::string(token));
        }
        rec.moves.push_back(Move{*color, point});
        ++expected;
    }
    return rec;
}

// ---------------------------------------------------------------------------
// SGF

namespace {

struct SgfProperty {
    std::string ident;
    std::vector<std::string> values;
};
using SgfNode = std::vector<SgfProperty>;

class SgfReader {
public:
    explicit SgfReader(std::string_view text) : text_(text) {}

    // Nodes along the main line of the first game tree.
    std::vector<SgfNode> main_line(int& dropped) {
        skip_ws();
        if (!consume('(')) fail("expected '('");
        std::vector<SgfNode> nodes;
        read_tree_body(nodes, dropped, true);
        return nodes;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw Error(Errc::SgfSyntaxError, why + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char ch) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // Called after '('. Appends the nodes of this tree (and its first
    // variation, recursively) when keep is set.
    void read_tree_body(std::vector<SgfNode>& nodes, int& dropped, bool keep) {
        bool any_node = false;
        while (peek() == ';') {
            ++pos_;
            SgfNode node = read_node();
            any_node = true;
            if (keep) nodes.push_back(std::move(node));
        }
        if (!any_node) fail("game tree without nodes");
        bool first = true;
        while (peek() == '(') {
            ++pos_;
            const bool keep_child = keep && first;
            if (keep && !first) ++dropped;
            read_tree_body(nodes, dropped, keep_child);
            first = false;
        }
        if (!consume(')')) fail("expected ')'");
    }

    SgfNode read_node() {
        SgfNode node;
        while (true) {
            skip_ws();
            if (pos_ >= text_.size()) fail("unexpected end of input");
            const char ch = text_[pos_];
            if (!std::isalpha(static_cast<unsigned char>(ch))) break;
            std::string ident;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                if (std::isupper(static_cast<unsigned char>(text_[pos_]))) ident.push_back(text_[pos_]);
                ++pos_;
            }
            SgfProperty prop{ident, {}};
            while (peek() == '[') {
                ++pos_;
                prop.values.push_back(read_value());
            }
            if (prop.values.empty()) fail("property " + ident + " without value");
            node.push_back(std::move(prop));
        }
        return node;
    }

    std::string read_value() {
        std::string out;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated property value");
            const char ch = text_[pos_++];
            if (ch == ']') return out;
            if (ch == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                const char esc = text_[pos_++];
                if (esc == '\n' || esc == '\r') continue;  // soft line break
                out.push_back(esc);
                continue;
            }
            out.push_back(ch);
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<Point> sgf_point(const std::string& value, int size) {
    if (value.empty()) return std::nullopt;
    if (value == "tt" && size <= 19) return std::nullopt;
    if (value.size() != 2 || !std::islower(static_cast<unsigned char>(value[0])) ||
        !std::islower(static_cast<unsigned char>(value[1]))) {
        throw Error(Errc::SgfSyntaxError, "bad SGF point '" + value + "'", std::nullopt, value);
    }
    const int col = value[0] - 'a';
    const int top = value[1] - 'a';
    if (col >= size || top >= size) {
        throw Error(Errc::SgfSyntaxError, "SGF point '" + value + "' outside the board", std::nullopt, value);
    }
    return Point{col, size - 1 - top};
}

int parse_size(const std::string& value) {
    const auto colon = value.find(':');
    auto to_int = [&](const std::string& s) {
        char* end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (s.empty() || *end != '\0') throw Error(Errc::SgfSyntaxError, "bad SZ value '" + value + "'");
        return static_cast<int>(v);
    };
    if (colon == std::string::npos) return to_int(value);
    const int cols = to_int(value.substr(0, colon));
    const int rows = to_int(value.substr(colon + 1));
    if (cols != rows) throw Error(Errc::UnsupportedBoardSize, "rectangular board " + value);
    return cols;
}

}  // namespace

GameResult parse_sgf_result(std::string_view re) {
    GameResult res;
    res.raw = std::string(re);
    if (re.size() >= 2 && (re[0] == 'B' || re[0] == 'W') && re[1] == '+') {
        res.winner = re[0] == 'B' ? Color::Black : Color::White;
        const std::string rest(re.substr(2));
        if (rest == "R" || rest == "Resign") {
            res.resignation = true;
        } else if (!rest.empty()) {
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (*end == '\0') res.margin = v;
        }
    }
    return res;
}

GameRecord parse_sgf(std::string_view text, const SgfOptions& opts) {
    int dropped = 0;
    SgfReader reader(text);
    const std::vector<SgfNode> nodes = reader.main_line(dropped);

    GameRecord rec;
    rec.dropped_variations = dropped;
    rec.alternation_checked = opts.enforce_alternation;

    for (const auto& prop : nodes.front()) {
        if (prop.ident == "SZ") {
            const int size = parse_size(prop.values.front());
            if (size > kMaxBoardSize || size < 2) {
                throw Error(Errc::UnsupportedBoardSize, "SZ[" + prop.values.front() + "]");
            }
            rec.size = size;
        }
    }

    bool has_setup = false;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        for (const auto& prop : nodes[n]) {
            const std::string& id = prop.ident;
            if (id == "KM" && n == 0) {
                char* end = nullptr;
                const double komi = std::strtod(prop.values.front().c_str(), &end);
                if (prop.values.front().empty() || *end != '\0') {
                    throw Error(Errc::SgfSyntaxError, "bad KM value '" + prop.values.front() + "'");
                }
                rec.komi = komi;
            } else if (id == "RE" && n == 0) {
                rec.result = parse_sgf_result(prop.values.front());
            } else if (id == "PB" && n == 0) {
                rec.black_player = prop.values.front();
            } else if (id == "PW" && n == 0) {
                rec.white_player = prop.values.front();
            } else if (id == "B" || id == "W") {
                const Color c = id == "B" ? Color::Black : Color::White;
                rec.moves.push_back(Move{c, sgf_point(prop.values.front(), rec.size)});
            } else if (id == "AB" || id == "AW") {
                if (!opts.allow_setup_stones) {
                    throw Error(Errc::UnsupportedFeature, "setup stones (" + id + ") are not supported");
                }
                has_setup = true;
                const Color c = id == "AB" ? Color::Black : Color::White;
                for (const auto& v : prop.values) {
                    const auto p = sgf_point(v, rec.size);
                    if (!p) throw Error(Errc::SgfSyntaxError, "empty setup point");
                    rec.moves.push_back(Move::place(c, *p));
                }
            } else if (id == "AE") {
                throw Error(Errc::UnsupportedFeature, "AE setup property is not supported");
            }
        }
    }
    if (has_setup) rec.alternation_checked = false;

    if (rec.alternation_checked) {
        for (std::size_t i = 0; i < rec.moves.size(); ++i) {
            const Color want = i == 0 ? Color::Black : opponent(rec.moves[i - 1].color);
            if (rec.moves[i].color != want) {
                throw Error(Errc::ColorOrderViolation, "move " + std::to_string(i + 1), i + 1);
            }
        }
    }

    try {
        replay(rec.moves, LegalityConfig{false}, rec.size);
    } catch (const Error& e) {
        throw Error(Errc::IllegalMoveInRecord, e.what(), e.index());
    }
    return rec;
}

}  // namespace golm
