#include "golm/candidates.hpp"

#include <algorithm>

namespace golm {

CandidateList normalize_candidates(Color to_play, std::vector<Candidate> raw, int top_k) {
    for (auto& c : raw) c.winrate = std::clamp(c.winrate, 0.0, 1.0);
    std::stable_sort(raw.begin(), raw.end(),
                     [](const Candidate& a, const Candidate& b) { return a.winrate > b.winrate; });
    if (top_k >= 0 && raw.size() > static_cast<std::size_t>(top_k)) raw.resize(top_k);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i].rank = static_cast<int>(i + 1);
    return CandidateList{to_play, std::move(raw)};
}

bool is_well_formed(const CandidateList& cl) {
    if (cl.candidates.empty()) return false;
    for (std::size_t i = 0; i < cl.candidates.size(); ++i) {
        const auto& c = cl.candidates[i];
        if (c.rank != static_cast<int>(i + 1)) return false;
        if (!(c.winrate >= 0.0 && c.winrate <= 1.0)) return false;
        if (i > 0 && c.winrate > cl.candidates[i - 1].winrate) return false;
    }
    return true;
}

}  // namespace golm
