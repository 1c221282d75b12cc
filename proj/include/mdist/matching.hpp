#pragma once

#include <cstdint>
#include <vector>

#include "mdist/election.hpp"
#include "mdist/fraction.hpp"

namespace mdist {

// Bipartite graph G(a): voters on the left, candidates on the right with
// capacities (plurality counts). Voter i may be matched to candidate k when
// a is weakly preferred to k by i, i.e. k == a or (a, k) in P_i.
struct DominationGraph {
    Candidate focus = 0;
    int voters = 0;
    int candidates = 0;
    // adjacency[i * m + k]
    std::vector<std::uint8_t> adjacency;
    std::vector<std::int64_t> capacity;

    bool edge(Voter i, Candidate k) const { return adjacency[static_cast<std::size_t>(i) * candidates + k] != 0; }
};

DominationGraph domination_graph(const Election& e, Candidate a, std::vector<std::int64_t> capacity);
// Capacities are the plurality scores of e.
DominationGraph domination_graph(const Election& e, Candidate a);

struct MatchingResult {
    std::int64_t size = 0;
    // Right-side usage per candidate.
    std::vector<std::int64_t> usage;
    // Candidate matched to each voter, -1 for the unmatched set V^0.
    std::vector<Candidate> assignment;
    Fraction phi;

    // Voters matched to candidate k; k = -1 gives the unmatched ones.
    std::vector<Voter> part(Candidate k) const;
};

// Maximum capacitated matching (Dinic max-flow over voter types, i.e. voters
// grouped by neighbourhood). phi = size / voters.
MatchingResult max_matching(const DominationGraph& g);

struct PluralityMatchingResult {
    Candidate winner = 0;
    std::vector<Fraction> phi;
};

// phi_j for every candidate; winner maximizes phi, lowest index on ties.
PluralityMatchingResult plurality_matching(const Election& e);

struct ConjectureProbe {
    Candidate best = 0;
    Fraction fraction;
    // fraction >= k/m
    bool holds = false;
};

// Best matching fraction using only edges implied by the reported k-top
// preferences.
ConjectureProbe conjecture_probe(const Election& e, int k);

}  // namespace mdist
