#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mdist/election.hpp"
#include "mdist/fraction.hpp"
#include "mdist/transcript.hpp"

namespace mdist {

enum class SampleMode { copeland, plurality_matching };

// Default sample sizes:
//   copeland:           c = ceil(ln(2 m^2 / delta) / (2 (eps/16)^2)), rounded up to odd
//   plurality_matching: c = ceil(2 (m + ln(2 m / delta)) / (eps/8)^2)
// eps in (0, 4], delta in (0, 1).
std::int64_t sample_size(double epsilon, double delta, int m, SampleMode mode);

enum class CapacitySource {
    // Plurality counts of the sample itself.
    empirical,
    // Population plurality counts scaled to the sample size.
    population,
};

struct SamplePlan {
    double epsilon = 1.0;
    double delta = 0.05;
    SampleMode mode = SampleMode::copeland;
    std::int64_t c = 1;
    bool replacement = true;
    std::uint64_t seed = 0;
    CapacitySource capacities = CapacitySource::empirical;
};

// Plan with the default size; with replacement for Copeland, without for
// plurality matching.
SamplePlan make_plan(double epsilon, double delta, int m, SampleMode mode, std::uint64_t seed);

struct VoterSample {
    Election election;
    std::vector<Voter> indices;
    Transcript transcript;
};

VoterSample sample_voters(const Election& e, const SamplePlan& plan);

// Largest-remainder rounding of c * counts[k] / sum(counts); sums to c.
std::vector<std::int64_t> scaled_plurality(std::span<const std::int64_t> counts, std::int64_t c);

struct SampledOutcome {
    Candidate winner = 0;
    std::int64_t c = 0;
    Transcript transcript;
    // Plurality matching only: matching fraction on the sample per candidate.
    std::vector<Fraction> phi_hat;
    double phi_hat_max = 0.0;
};

SampledOutcome sampled_copeland(const Election& e, const SamplePlan& plan);
SampledOutcome sampled_copeland(const Election& e, double epsilon, double delta, std::uint64_t seed);

SampledOutcome sampled_plurality_matching(const Election& e, const SamplePlan& plan);
SampledOutcome sampled_plurality_matching(const Election& e, double epsilon, double delta, std::uint64_t seed);

}  // namespace mdist
