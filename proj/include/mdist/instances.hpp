#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdist/election.hpp"
#include "mdist/mechanisms.hpp"
#include "mdist/metric.hpp"

namespace mdist {

struct GeneratedInstance {
    std::string generator;
    nlohmann::json parameters;
    Election election;
    std::optional<MetricWitness> witness;
    // Machine-checkable claims about the instance.
    nlohmann::json expected = nlohmann::json::object();
    // Pairing schedule realizing a construction, when one is needed.
    std::optional<Pairing> schedule;
    // Voters whose preferences were withheld (missing-voter instances).
    std::vector<Voter> missing;
    // Tie priority used to induce the profile (empty: index ascending).
    std::vector<int> tie_priority;
};

// Default ratio D_far / delta for constructions with far-away points.
inline constexpr double kFarRatio = 1e4;

GeneratedInstance impartial_culture(int n, int m, std::uint64_t seed);
// Uniform points in [0, 1]^dim for voters and candidates.
GeneratedInstance euclidean(int n, int m, int dim, std::uint64_t seed);
// Two voters at 0 and 1 on a line; candidate i (1-based) at 0, 2j, -2j
// alternating, so SC(i) = 2i - 1 and i beats i - 1 under higher-index ties.
GeneratedInstance chain(int ell);
// chain(log2 m + 1) plus far candidates, with a schedule that lets the last
// chain member win every round.
GeneratedInstance dr_lower_bound(int m);
// (m - 1) / k voters with pairwise disjoint k-top blocks and a left-out
// candidate x = m - 1; star metric with ratio = delta / D.
GeneratedInstance ktop_lower_bound(int m, int k, double ratio);
// Two candidates at 0 and 2; an epsilon fraction of voters withhold their
// preferences. Distortion of candidate 0 is 3 + 4 eps / (1 - eps).
GeneratedInstance missing_voters_tight(double epsilon);
// Candidate 0 is every voter's second choice except the last voter, who
// ranks it last; graph metric with SC(0) = m and SC(b) = 3m - 4.
GeneratedInstance veto_instance(int m);
// Profiles a > b > e and e > b > a with an alpha-decisive metric.
GeneratedInstance decisive_instance(double alpha);
// All voters close to `chosen` and far from everyone else. Equal distances
// are ordered by `tie_order` (a permutation of the other candidates; empty:
// index ascending).
GeneratedInstance hidden_star(int m, Candidate chosen, int n = 3, std::vector<Candidate> tie_order = {},
                              double far_ratio = kFarRatio);

// Names accepted by generate(): impartial, euclidean, chain, dr-lower-bound,
// ktop-lower-bound, missing-tight, veto, decisive, hidden-star.
struct GeneratorParams {
    int n = 50;
    int m = 10;
    int dim = 2;
    int k = 1;
    int ell = 2;
    double epsilon = 0.2;
    double alpha = 1.0;
    double ratio = 1e-6;
    Candidate chosen = 0;
    std::uint64_t seed = 0;
};
GeneratedInstance generate(const std::string& name, const GeneratorParams& p);

nlohmann::json witness_to_json(const MetricWitness& w);
MetricWitness witness_from_json(const nlohmann::json& j);
// Sidecar with parameters, expected properties, witness, schedule, missing voters.
nlohmann::json sidecar(const GeneratedInstance& inst);

}  // namespace mdist
