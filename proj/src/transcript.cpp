#include "mdist/transcript.hpp"

#include <ostream>

#include <json.hpp>

namespace mdist {

void Transcript::record_compare(int round, Candidate a, Candidate b, Candidate loser) {
    events_.push_back({TranscriptEvent::Kind::compare, round, a, b, loser, -1});
    ++compares_;
}

void Transcript::record_sample(Voter voter) {
    events_.push_back({TranscriptEvent::Kind::sample, 0, -1, -1, -1, voter});
    ++samples_;
}

void Transcript::write_jsonl(std::ostream& out) const {
    for (const auto& ev : events_) {
        nlohmann::json j;
        if (ev.kind == TranscriptEvent::Kind::compare) {
            j["event"] = "compare";
            j["round"] = ev.round;
            j["a"] = ev.a;
            j["b"] = ev.b;
            j["loser"] = ev.loser;
        } else {
            j["event"] = "sample";
            j["voter"] = ev.voter;
        }
        out << j.dump() << '\n';
    }
}

}  // namespace mdist
