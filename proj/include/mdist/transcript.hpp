#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mdist/election.hpp"

namespace mdist {

struct TranscriptEvent {
    enum class Kind { compare, sample };
    Kind kind = Kind::compare;
    int round = 0;
    // compare: the queried pair and the declared loser
    Candidate a = -1;
    Candidate b = -1;
    Candidate loser = -1;
    // sample: the drawn voter
    Voter voter = -1;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

// Ordered log of oracle calls; one event per call.
class Transcript {
public:
    void record_compare(int round, Candidate a, Candidate b, Candidate loser);
    void record_sample(Voter voter);

    const std::vector<TranscriptEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::size_t compares() const { return compares_; }
    std::size_t samples() const { return samples_; }

    // One JSON object per line.
    void write_jsonl(std::ostream& out) const;

    friend bool operator==(const Transcript&, const Transcript&) = default;

private:
    std::vector<TranscriptEvent> events_;
    std::size_t compares_ = 0;
    std::size_t samples_ = 0;
};

}  // namespace mdist
