#include "mdist/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mdist/error.hpp"
#include "mdist/matching.hpp"
#include "mdist/mechanisms.hpp"
#include "mdist/rng.hpp"

namespace mdist {

std::int64_t sample_size(double epsilon, double delta, int m, SampleMode mode) {
    if (!(epsilon > 0.0 && epsilon <= 4.0)) throw ConfigError("epsilon must lie in (0, 4]");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (m < 1) throw ConfigError("need at least one candidate");
    if (mode == SampleMode::copeland) {
        const double e = epsilon / 16.0;
        auto c = static_cast<std::int64_t>(std::ceil(std::log(2.0 * m * m / delta) / (2.0 * e * e)));
        c = std::max<std::int64_t>(c, 1);
        return c % 2 ? c : c + 1;
    }
    const double e = epsilon / 8.0;
    const auto c = static_cast<std::int64_t>(std::ceil(2.0 * (m + std::log(2.0 * m / delta)) / (e * e)));
    return std::max<std::int64_t>(c, 1);
}

SamplePlan make_plan(double epsilon, double delta, int m, SampleMode mode, std::uint64_t seed) {
    SamplePlan p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.mode = mode;
    p.c = sample_size(epsilon, delta, m, mode);
    p.replacement = mode == SampleMode::copeland;
    p.seed = seed;
    return p;
}

VoterSample sample_voters(const Election& e, const SamplePlan& plan) {
    const std::int64_t n = e.voters();
    if (plan.c < 1) throw ConfigError("sample size must be at least 1");
    if (n < 1) throw DataError("cannot sample from an empty electorate");
    if (!plan.replacement && plan.c > n)
        throw ConfigError("sample size " + std::to_string(plan.c) + " exceeds the " + std::to_string(n) +
                          " voters available without replacement");
    Rng rng(plan.seed);
    VoterSample s;
    if (plan.replacement) {
        for (std::int64_t t = 0; t < plan.c; ++t) s.indices.push_back(static_cast<Voter>(rng.below(n)));
    } else {
        // Partial Fisher-Yates: the first c slots of a random permutation.
        std::vector<Voter> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::int64_t t = 0; t < plan.c; ++t) {
            const auto j = t + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - t)));
            std::swap(pool[t], pool[j]);
            s.indices.push_back(pool[t]);
        }
    }
    for (Voter i : s.indices) s.transcript.record_sample(i);
    s.election = e.subset(s.indices);
    return s;
}

std::vector<std::int64_t> scaled_plurality(std::span<const std::int64_t> counts, std::int64_t c) {
    if (c < 1) throw ConfigError("sample size must be at least 1");
    std::int64_t n = 0;
    for (auto x : counts) {
        if (x < 0) throw DataError("negative count");
        n += x;
    }
    if (n == 0) throw DataError("counts sum to zero");
    std::vector<std::int64_t> out(counts.size());
    std::vector<std::pair<std::int64_t, std::size_t>> remainder;
    std::int64_t used = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        out[k] = c * counts[k] / n;
        used += out[k];
        remainder.emplace_back(c * counts[k] % n, k);
    }
    std::stable_sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t t = 0; used < c; ++t, ++used) ++out[remainder[t].second];
    return out;
}

SampledOutcome sampled_copeland(const Election& e, const SamplePlan& plan) {
    if (!e.all_total()) throw DataError("sampled Copeland needs total orders");
    auto s = sample_voters(e, plan);
    SampledOutcome out;
    out.c = plan.c;
    out.winner = king_vertex(majority_digraph(comparison_graph(s.election)));
    out.transcript = std::move(s.transcript);
    return out;
}

SampledOutcome sampled_copeland(const Election& e, double epsilon, double delta, std::uint64_t seed) {
    return sampled_copeland(e, make_plan(epsilon, delta, e.candidates(), SampleMode::copeland, seed));
}

SampledOutcome sampled_plurality_matching(const Election& e, const SamplePlan& plan) {
    if (!e.all_total()) throw DataError("sampled plurality matching needs total orders");
    auto s = sample_voters(e, plan);
    const auto source = plan.capacities == CapacitySource::empirical ? scores(s.election).plurality : scores(e).plurality;
    const auto capacity = scaled_plurality(source, plan.c);
    SampledOutcome out;
    out.c = plan.c;
    for (Candidate a = 0; a < e.candidates(); ++a) {
        const auto r = max_matching(domination_graph(s.election, a, capacity));
        out.phi_hat.push_back(Fraction(r.size, plan.c).reduced());
    }
    for (Candidate a = 1; a < e.candidates(); ++a)
        if (out.phi_hat[a] > out.phi_hat[out.winner]) out.winner = a;
    out.phi_hat_max = out.phi_hat[out.winner].to_double();
    out.transcript = std::move(s.transcript);
    return out;
}

SampledOutcome sampled_plurality_matching(const Election& e, double epsilon, double delta, std::uint64_t seed) {
    return sampled_plurality_matching(e,
                                      make_plan(epsilon, delta, e.candidates(), SampleMode::plurality_matching, seed));
}

}  // namespace mdist
