#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mdist/election.hpp"
#include "mdist/fraction.hpp"
#include "mdist/transcript.hpp"

namespace mdist {

// Which candidate wins a pairwise comparison with equal support.
enum class TieRule { higher_index_wins, lower_index_wins };

// Loser of the pairwise majority vote between a and b. Voters who do not
// rank the pair abstain.
Candidate majority_oracle(const Election& e, Candidate a, Candidate b, TieRule tie = TieRule::higher_index_wins);

// Returns the loser of the comparison (a, b).
using ComparisonOracle = std::function<Candidate(Candidate, Candidate)>;

struct Pairing {
    enum class Kind { input_order, shuffled, schedule };
    Kind kind = Kind::input_order;
    // shuffled: survivors are permuted every round with a seed derived from (seed, round)
    std::uint64_t seed = 0;
    // schedule: the pairs of each round; rounds past the end use input order
    std::vector<std::vector<std::pair<Candidate, Candidate>>> rounds;

    static Pairing input_order() { return {}; }
    static Pairing shuffled(std::uint64_t seed) { return {Kind::shuffled, seed, {}}; }
    static Pairing scheduled(std::vector<std::vector<std::pair<Candidate, Candidate>>> rounds) {
        return {Kind::schedule, 0, std::move(rounds)};
    }
};

struct DominationRootResult {
    Candidate winner = -1;
    Transcript transcript;
    int rounds = 0;
};

// Knockout elimination: pair up the survivors, drop every loser, repeat.
// An odd survivor sits out the round. Uses exactly |candidates| - 1 queries.
DominationRootResult domination_root(std::span<const Candidate> candidates, const ComparisonOracle& oracle,
                                     const Pairing& pairing = {});

// Directed graph on candidates as an m x m indicator.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int m) : m_(m), adj_(static_cast<std::size_t>(m) * m, 0) {}

    int size() const { return m_; }
    bool edge(Candidate a, Candidate b) const { return adj_[static_cast<std::size_t>(a) * m_ + b] != 0; }
    void set_edge(Candidate a, Candidate b, bool on = true) { adj_[static_cast<std::size_t>(a) * m_ + b] = on; }
    int out_degree(Candidate a) const;
    // Every pair of distinct vertices joined in at least one direction.
    bool contains_tournament() const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    int m_ = 0;
    std::vector<std::uint8_t> adj_;
};

// Edge (a, b) iff w(a, b) >= tau.
Digraph threshold_digraph(const ComparisonGraph& g, Fraction tau);

// Weak majority digraph: (a, b) iff at least as many voters prefer a to b as b to a.
Digraph majority_digraph(const ComparisonGraph& g);

// Shortest-path hop distances from v; -1 when unreachable.
std::vector<int> hop_distances(const Digraph& g, Candidate v);
bool is_two_hop_king(const Digraph& g, Candidate v);

// Vertex of maximum out-degree (lowest index on ties). Throws DataError when
// some pair has no edge, TheoremViolation if the chosen vertex is not a king.
Candidate king_vertex(const Digraph& g);

struct CopelandResult {
    Candidate winner = 0;
    // Doubled scores: 2 per win, 1 per drawn pair.
    std::vector<int> doubled_score;
};

// Highest Copeland score, lowest index on ties. Every pair must be compared
// by at least one voter.
CopelandResult copeland(const Election& e);
CopelandResult copeland(const ComparisonGraph& g);

// King of the digraph thresholded at alpha/2, given that every pair is
// compared by at least an alpha fraction of the voters.
Candidate balanced_rule(const Election& e, Fraction alpha);

// Threshold k/(3m); returns the first 2-hop king in order of decreasing
// top-k coverage, then index.
Candidate ktop_rule(const Election& e, int k);

}  // namespace mdist
