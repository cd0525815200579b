// Deterministic stand-in engine on stdin/stdout, for pipeline and
// subprocess tests without a real engine binary.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "golm/arena.hpp"
#include "golm/engine.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Mock Go engine speaking the analysis JSON protocol or GTP", "golm-mock-engine"};
    app.require_subcommand(1);

    golm::MockAnalysisSpec aspec;
    std::size_t exit_after = 0;
    auto* analysis = app.add_subcommand("analysis", "JSON analysis protocol, one request per line");
    analysis->add_option("--seed", aspec.seed);
    analysis->add_flag("--black-perspective", aspec.black_perspective);
    analysis->add_option("--exit-after", exit_after, "Exit silently after this many requests");

    golm::MockGtpSpec gspec;
    int family = -1;
    auto* gtp = app.add_subcommand("gtp", "GTP subset");
    gtp->add_option("--seed", gspec.seed);
    gtp->add_option("--epsilon", gspec.epsilon);
    gtp->add_option("--family", family, "Use the strength-ordered family member with this index");
    gtp->add_option("--resign-after", gspec.resign_after);
    gtp->add_option("--name", gspec.name);

    CLI11_PARSE(app, argc, argv);

    std::string line;
    if (*analysis) {
        const golm::MockAnalysisEngine engine(aspec);
        std::size_t n = 0;
        while (std::getline(std::cin, line)) {
            if (line.empty()) continue;
            if (exit_after && n++ >= exit_after) return 0;
            nlohmann::json reply;
            try {
                reply = engine.answer(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& e) {
                reply = {{"id", ""}, {"error", std::string("unparseable request: ") + e.what()}};
            }
            std::cout << reply.dump() << std::endl;
        }
        return 0;
    }

    if (family >= 0) {
        const auto name = gspec.name;
        gspec = golm::epsilon_family_member(family, gspec.seed);
        if (name != "golm-mock") gspec.name = name;
    }
    golm::MockGtpEngine engine(gspec);
    while (std::getline(std::cin, line)) {
        const std::string reply = engine.handle(line);
        std::cout << reply << std::flush;
        if (engine.quit_requested()) break;
    }
    return 0;
}
