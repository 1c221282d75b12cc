#pragma once

#include <span>
#include <vector>

#include "mdist/election.hpp"

namespace mdist {

// Relative tolerance for metric comparisons (triangle rows, consistency).
inline constexpr double kMetricTolerance = 1e-9;

// Distances on voters and candidates. Only voter-candidate and
// candidate-candidate distances are stored: any table on those pairs that
// satisfies every triangle with at most one voter extends to a pseudometric
// on V u C by setting d(v, v') = min_c d(v, c) + d(c, v'), and no quantity
// in this library depends on voter-voter distances. Zero off-diagonal
// distances are allowed (merged points).
class MetricWitness {
public:
    MetricWitness() = default;
    MetricWitness(int n, int m);

    // Euclidean placement: one coordinate vector per voter and candidate.
    static MetricWitness from_points(const std::vector<std::vector<double>>& voters,
                                     const std::vector<std::vector<double>>& candidates);
    // Full (n+m) x (n+m) table, voters first. Voter-voter entries are ignored.
    static MetricWitness from_table(int n, int m, std::span<const double> table);

    int voters() const { return n_; }
    int candidates() const { return m_; }

    double voter_candidate(Voter i, Candidate a) const { return vc_[static_cast<std::size_t>(a) * n_ + i]; }
    double candidate_candidate(Candidate a, Candidate b) const { return cc_[static_cast<std::size_t>(a) * m_ + b]; }
    void set_voter_candidate(Voter i, Candidate a, double d) { vc_[static_cast<std::size_t>(a) * n_ + i] = d; }
    void set_candidate_candidate(Candidate a, Candidate b, double d);

    // Column d(., c_a) over all voters.
    std::span<const double> candidate_column(Candidate a) const {
        return {vc_.data() + static_cast<std::size_t>(a) * n_, static_cast<std::size_t>(n_)};
    }

    // Point index: voters are [0, n), candidates [n, n + m).
    double distance(int p, int q) const;

    // Largest distance stored; the scale for relative tolerances.
    double scale() const;
    // Worst triangle violation (<= 0 when all hold) over triples with at most one voter.
    double max_triangle_violation() const;
    bool is_pseudometric(double rel_tol = kMetricTolerance) const;

    // Witness restricted to a sub-electorate (indices may repeat).
    MetricWitness restricted(std::span<const Voter> voters) const;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<double> vc_;  // candidate-major: vc_[a * n + i]
    std::vector<double> cc_;  // m x m, symmetric, zero diagonal
};

// Shortest-path distances of a weighted undirected graph on the points
// voters [0, n) and candidates [n, n + m). Unreachable pairs are an error.
struct WeightedEdge {
    int p = 0;
    int q = 0;
    double w = 0.0;
};
MetricWitness shortest_path_metric(int n, int m, std::span<const WeightedEdge> edges);

// True iff every stated pair is respected: (a, b) in P_i implies
// d(v_i, c_a) <= d(v_i, c_b) within kMetricTolerance * scale.
bool check_consistent(const MetricWitness& metric, const Election& e);

double social_cost(const MetricWitness& metric, Candidate a);
std::vector<double> social_costs(const MetricWitness& metric);

// SC(a) / min_x SC(x); +inf when the optimum is 0 and SC(a) > 0.
double realized_distortion(const MetricWitness& metric, Candidate a);

// Sorts candidates by distance for every voter. Equal distances are broken
// by `priority` ascending (default: candidate index ascending).
Election induce_election(const MetricWitness& metric, std::span<const int> priority = {});

}  // namespace mdist
