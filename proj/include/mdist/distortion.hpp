#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "mdist/election.hpp"
#include "mdist/lp.hpp"
#include "mdist/metric.hpp"

namespace mdist {

enum class LpMode {
    // Voter-candidate and candidate-candidate variables only, identical voters
    // merged into weighted classes, triangle rows added on demand.
    pruned,
    // One variable per unordered pair over V u C and every triangle row.
    full,
};

// MetricLP(a, b): maximize SC(a) over metrics consistent with the election
// subject to SC(b) = 1, optionally under alpha-decisiveness.
struct MetricLp {
    LinearProgram lp;
    std::size_t lazy_from = 0;
    LpMode mode = LpMode::pruned;
    int voters = 0;
    int candidates = 0;
    Candidate a = 0;
    Candidate b = 0;
    // Pruned mode: class of every voter and multiplicity of every class.
    std::vector<int> voter_class;
    std::vector<int> class_weight;

    int classes() const { return static_cast<int>(class_weight.size()); }
    // Pruned mode variables.
    int vc_var(int cls, Candidate c) const { return cls * candidates + c; }
    int cc_var(Candidate c, Candidate d) const;
    // Full mode: points are voters [0, n) then candidates [n, n + m).
    int pair_var(int p, int q) const;
};

MetricLp build_metric_lp(const Election& e, Candidate a, Candidate b, std::optional<double> alpha = std::nullopt,
                         LpMode mode = LpMode::pruned);

LpOutcome solve_metric_lp(const MetricLp& lp);

// Worst-case SC(a) / SC(b) over consistent metrics; +inf when unbounded and
// 1 when a == b. Throws SolverError if the LP cannot be certified.
double distortion_pair(const Election& e, Candidate a, Candidate b, std::optional<double> alpha = std::nullopt,
                       LpMode mode = LpMode::pruned);

// Metric attaining an optimal LP value. Merged points show up as zero
// distances; voter-voter distances follow from the stored ones.
MetricWitness extract_pseudometric(const MetricLp& lp, const LpOutcome& outcome);

struct MinimaxOptions {
    std::optional<double> alpha;
    LpMode mode = LpMode::pruned;
    int jobs = 1;
};

struct DistortionReport {
    int candidates = 0;
    std::optional<double> alpha;
    // table[a][b] = D(a | b)
    std::vector<std::vector<double>> table;
    // D(a) = max_b D(a | b) and the first b attaining it.
    std::vector<double> distortion;
    std::vector<Candidate> worst_opponent;
    Candidate winner = 0;
};

// Worst-case distortion of one candidate and its worst opponent.
std::pair<double, Candidate> candidate_distortion(const Election& e, Candidate a, const MinimaxOptions& options = {});

// Instance-optimal rule: the candidate minimizing D(a); ties (within the LP
// tolerance) go to the lowest index.
DistortionReport minimax(const Election& e, const MinimaxOptions& options = {});

// Infinite values are written as the string "inf".
nlohmann::json to_json(const DistortionReport& report);

}  // namespace mdist
