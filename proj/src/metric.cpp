#include "mdist/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdist/error.hpp"
#include "mdist/kernels.hpp"

namespace mdist {

MetricWitness::MetricWitness(int n, int m)
    : n_(n), m_(m), vc_(static_cast<std::size_t>(n) * m, 0.0), cc_(static_cast<std::size_t>(m) * m, 0.0) {}

void MetricWitness::set_candidate_candidate(Candidate a, Candidate b, double d) {
    cc_[static_cast<std::size_t>(a) * m_ + b] = d;
    cc_[static_cast<std::size_t>(b) * m_ + a] = d;
}

MetricWitness MetricWitness::from_points(const std::vector<std::vector<double>>& voters,
                                         const std::vector<std::vector<double>>& candidates) {
    const auto dist = [](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) throw DataError("points of different dimension");
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
        return std::sqrt(s);
    };
    const int n = static_cast<int>(voters.size());
    const int m = static_cast<int>(candidates.size());
    MetricWitness w(n, m);
    for (Candidate a = 0; a < m; ++a) {
        for (Voter i = 0; i < n; ++i) w.set_voter_candidate(i, a, dist(voters[i], candidates[a]));
        for (Candidate b = a + 1; b < m; ++b) w.set_candidate_candidate(a, b, dist(candidates[a], candidates[b]));
    }
    return w;
}

MetricWitness MetricWitness::from_table(int n, int m, std::span<const double> table) {
    const std::size_t size = static_cast<std::size_t>(n + m);
    if (table.size() != size * size) throw DataError("distance table has wrong dimension");
    MetricWitness w(n, m);
    for (Candidate a = 0; a < m; ++a) {
        for (Voter i = 0; i < n; ++i) w.set_voter_candidate(i, a, table[static_cast<std::size_t>(i) * size + n + a]);
        for (Candidate b = a + 1; b < m; ++b)
            w.set_candidate_candidate(a, b, table[static_cast<std::size_t>(n + a) * size + n + b]);
    }
    return w;
}

double MetricWitness::distance(int p, int q) const {
    if (p == q) return 0.0;
    if (p >= n_ && q >= n_) return candidate_candidate(p - n_, q - n_);
    if (p < n_ && q >= n_) return voter_candidate(p, q - n_);
    if (q < n_ && p >= n_) return voter_candidate(q, p - n_);
    double best = std::numeric_limits<double>::infinity();
    for (Candidate c = 0; c < m_; ++c) best = std::min(best, voter_candidate(p, c) + voter_candidate(q, c));
    return best;
}

double MetricWitness::scale() const {
    double s = 0.0;
    for (double d : vc_) s = std::max(s, d);
    for (double d : cc_) s = std::max(s, d);
    return s;
}

double MetricWitness::max_triangle_violation() const {
    const auto& k = simd::active();
    double worst = -std::numeric_limits<double>::infinity();
    for (double d : vc_) worst = std::max(worst, -d);
    for (double d : cc_) worst = std::max(worst, -d);
    for (Candidate a = 0; a < m_; ++a)
        for (Candidate b = a + 1; b < m_; ++b)
            worst = std::max(worst, k.triangle_violation(cc_.data() + static_cast<std::size_t>(a) * m_,
                                                         cc_.data() + static_cast<std::size_t>(b) * m_,
                                                         candidate_candidate(a, b), static_cast<std::size_t>(m_)));
    std::vector<double> row(m_);
    for (Voter i = 0; i < n_; ++i) {
        for (Candidate c = 0; c < m_; ++c) row[c] = voter_candidate(i, c);
        for (Candidate a = 0; a < m_; ++a)
            worst = std::max(worst, k.triangle_violation(row.data(), cc_.data() + static_cast<std::size_t>(a) * m_,
                                                         row[a], static_cast<std::size_t>(m_)));
    }
    return worst;
}

bool MetricWitness::is_pseudometric(double rel_tol) const {
    for (Candidate a = 0; a < m_; ++a)
        if (candidate_candidate(a, a) != 0.0) return false;
    return max_triangle_violation() <= rel_tol * std::max(1.0, scale());
}

MetricWitness MetricWitness::restricted(std::span<const Voter> voters) const {
    MetricWitness w(static_cast<int>(voters.size()), m_);
    w.cc_ = cc_;
    for (std::size_t j = 0; j < voters.size(); ++j)
        for (Candidate a = 0; a < m_; ++a) w.set_voter_candidate(static_cast<Voter>(j), a, voter_candidate(voters[j], a));
    return w;
}

MetricWitness shortest_path_metric(int n, int m, std::span<const WeightedEdge> edges) {
    const int size = n + m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(size) * size, inf);
    const auto at = [size](int p, int q) { return static_cast<std::size_t>(p) * size + q; };
    for (int p = 0; p < size; ++p) d[at(p, p)] = 0.0;
    for (const auto& e : edges) {
        if (e.p < 0 || e.p >= size || e.q < 0 || e.q >= size || e.w < 0.0) throw DataError("bad graph edge");
        d[at(e.p, e.q)] = std::min(d[at(e.p, e.q)], e.w);
        d[at(e.q, e.p)] = std::min(d[at(e.q, e.p)], e.w);
    }
    for (int k = 0; k < size; ++k)
        for (int p = 0; p < size; ++p)
            for (int q = 0; q < size; ++q) d[at(p, q)] = std::min(d[at(p, q)], d[at(p, k)] + d[at(k, q)]);
    for (double v : d)
        if (std::isinf(v)) throw DataError("graph metric is disconnected");
    return MetricWitness::from_table(n, m, d);
}

bool check_consistent(const MetricWitness& metric, const Election& e) {
    if (metric.voters() != e.voters() || metric.candidates() != e.candidates())
        throw DataError("metric does not match election dimensions");
    const double tol = kMetricTolerance * std::max(1.0, metric.scale());
    const int m = e.candidates();
    for (Voter i = 0; i < e.voters(); ++i) {
        const auto rel = e.relation(i);
        for (Candidate a = 0; a < m; ++a)
            for (Candidate b = 0; b < m; ++b)
                if (rel[static_cast<std::size_t>(a) * m + b] &&
                    metric.voter_candidate(i, a) > metric.voter_candidate(i, b) + tol)
                    return false;
    }
    return true;
}

double social_cost(const MetricWitness& metric, Candidate a) {
    const auto col = metric.candidate_column(a);
    return simd::active().sum(col.data(), col.size());
}

std::vector<double> social_costs(const MetricWitness& metric) {
    std::vector<double> out(metric.candidates());
    for (Candidate a = 0; a < metric.candidates(); ++a) out[a] = social_cost(metric, a);
    return out;
}

double realized_distortion(const MetricWitness& metric, Candidate a) {
    const auto sc = social_costs(metric);
    const double best = *std::min_element(sc.begin(), sc.end());
    if (best == 0.0) return sc[a] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return sc[a] / best;
}

Election induce_election(const MetricWitness& metric, std::span<const int> priority) {
    const int m = metric.candidates();
    if (!priority.empty() && static_cast<int>(priority.size()) != m)
        throw DataError("tie priority must list every candidate");
    Election e(m);
    std::vector<Candidate> order(m);
    for (Voter i = 0; i < metric.voters(); ++i) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](Candidate x, Candidate y) {
            const double dx = metric.voter_candidate(i, x), dy = metric.voter_candidate(i, y);
            if (dx != dy) return dx < dy;
            const int px = priority.empty() ? x : priority[x];
            const int py = priority.empty() ? y : priority[y];
            return px != py ? px < py : x < y;
        });
        e.add_ranking(order);
    }
    return e;
}

}  // namespace mdist
