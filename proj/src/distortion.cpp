#include "mdist/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mdist/error.hpp"
#include "mdist/parallel.hpp"

namespace mdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int unordered_index(int p, int q, int count) {
    if (p > q) std::swap(p, q);
    // Row-major index of (p, q), p < q, in the strict upper triangle.
    return p * (2 * count - p - 1) / 2 + (q - p - 1);
}

void check_alpha(const Election& e, std::optional<double> alpha) {
    if (!alpha) return;
    if (!(*alpha >= 0.0 && *alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    for (Voter i = 0; i < e.voters(); ++i)
        if (!e.top(i) || !e.second(i))
            throw DataError("alpha-decisive LP needs top and second choice of voter " + std::to_string(i));
}

// Pairs (c, d) of the relation with nothing in between.
std::vector<Pair> cover_pairs(const Election& e, Voter i) {
    const int m = e.candidates();
    std::vector<Pair> out;
    for (Candidate c = 0; c < m; ++c)
        for (Candidate d = 0; d < m; ++d) {
            if (!e.prefers(i, c, d)) continue;
            bool direct = true;
            for (Candidate x = 0; x < m && direct; ++x) direct = !(e.prefers(i, c, x) && e.prefers(i, x, d));
            if (direct) out.push_back({c, d});
        }
    return out;
}

MetricLp build_pruned(const Election& e, Candidate a, Candidate b, std::optional<double> alpha) {
    const int n = e.voters();
    const int m = e.candidates();
    MetricLp out;
    out.mode = LpMode::pruned;
    out.voters = n;
    out.candidates = m;
    out.a = a;
    out.b = b;

    std::map<std::vector<std::uint8_t>, int> seen;
    std::vector<Voter> representative;
    out.voter_class.resize(n);
    for (Voter i = 0; i < n; ++i) {
        const auto rel = e.relation(i);
        const auto [it, fresh] = seen.try_emplace(std::vector<std::uint8_t>(rel.begin(), rel.end()),
                                                  static_cast<int>(representative.size()));
        if (fresh) {
            representative.push_back(i);
            out.class_weight.push_back(0);
        }
        out.voter_class[i] = it->second;
        ++out.class_weight[it->second];
    }
    const int g = out.classes();

    auto& lp = out.lp;
    for (int cls = 0; cls < g; ++cls)
        for (Candidate c = 0; c < m; ++c) lp.add_variable(c == a ? out.class_weight[cls] : 0.0);
    for (int p = 0; p < m * (m - 1) / 2; ++p) lp.add_variable();

    std::vector<LinearTerm> norm;
    for (int cls = 0; cls < g; ++cls) norm.push_back({out.vc_var(cls, b), static_cast<double>(out.class_weight[cls])});
    lp.add(std::move(norm), Sense::eq, 1.0);

    for (int cls = 0; cls < g; ++cls) {
        const Voter i = representative[cls];
        for (const auto& p : cover_pairs(e, i))
            lp.add({{out.vc_var(cls, p.better), 1.0}, {out.vc_var(cls, p.worse), -1.0}}, Sense::le, 0.0);
        if (alpha)
            lp.add({{out.vc_var(cls, *e.top(i)), 1.0}, {out.vc_var(cls, *e.second(i)), -*alpha}}, Sense::le, 0.0);
    }

    // Triangle rows: |x_c - x_d| <= D_cd <= x_c + x_d per class. A difference
    // row is implied by an ordering row whenever the voter ranks the pair.
    const auto triangles = [&](int cls, Candidate c, Candidate d) {
        const Voter i = representative[cls];
        const int xc = out.vc_var(cls, c), xd = out.vc_var(cls, d), dcd = out.cc_var(c, d);
        if (!e.prefers(i, c, d)) lp.add({{xc, 1.0}, {xd, -1.0}, {dcd, -1.0}}, Sense::le, 0.0);
        if (!e.prefers(i, d, c)) lp.add({{xd, 1.0}, {xc, -1.0}, {dcd, -1.0}}, Sense::le, 0.0);
        lp.add({{dcd, 1.0}, {xc, -1.0}, {xd, -1.0}}, Sense::le, 0.0);
    };
    if (a != b)
        for (int cls = 0; cls < g; ++cls) triangles(cls, std::min(a, b), std::max(a, b));
    out.lazy_from = lp.constraints.size();
    for (int cls = 0; cls < g; ++cls)
        for (Candidate c = 0; c < m; ++c)
            for (Candidate d = c + 1; d < m; ++d)
                if (!(c == std::min(a, b) && d == std::max(a, b))) triangles(cls, c, d);
    return out;
}

MetricLp build_full(const Election& e, Candidate a, Candidate b, std::optional<double> alpha) {
    const int n = e.voters();
    const int m = e.candidates();
    const int points = n + m;
    MetricLp out;
    out.mode = LpMode::full;
    out.voters = n;
    out.candidates = m;
    out.a = a;
    out.b = b;
    auto& lp = out.lp;
    for (int p = 0; p < points; ++p)
        for (int q = p + 1; q < points; ++q) lp.add_variable(q == n + a && p < n ? 1.0 : 0.0);

    std::vector<LinearTerm> norm;
    for (Voter i = 0; i < n; ++i) norm.push_back({out.pair_var(i, n + b), 1.0});
    lp.add(std::move(norm), Sense::eq, 1.0);
    for (Voter i = 0; i < n; ++i) {
        for (const auto& p : e.pairs(i))
            lp.add({{out.pair_var(i, n + p.better), 1.0}, {out.pair_var(i, n + p.worse), -1.0}}, Sense::le, 0.0);
        if (alpha)
            lp.add({{out.pair_var(i, n + *e.top(i)), 1.0}, {out.pair_var(i, n + *e.second(i)), -*alpha}}, Sense::le,
                   0.0);
    }
    for (int p = 0; p < points; ++p)
        for (int q = p + 1; q < points; ++q)
            for (int r = q + 1; r < points; ++r) {
                const int pq = out.pair_var(p, q), pr = out.pair_var(p, r), qr = out.pair_var(q, r);
                lp.add({{pq, 1.0}, {pr, -1.0}, {qr, -1.0}}, Sense::le, 0.0);
                lp.add({{pr, 1.0}, {pq, -1.0}, {qr, -1.0}}, Sense::le, 0.0);
                lp.add({{qr, 1.0}, {pq, -1.0}, {pr, -1.0}}, Sense::le, 0.0);
            }
    out.lazy_from = lp.constraints.size();
    return out;
}

}  // namespace

int MetricLp::cc_var(Candidate c, Candidate d) const {
    return classes() * candidates + unordered_index(c, d, candidates);
}

int MetricLp::pair_var(int p, int q) const { return unordered_index(p, q, voters + candidates); }

MetricLp build_metric_lp(const Election& e, Candidate a, Candidate b, std::optional<double> alpha, LpMode mode) {
    const int m = e.candidates();
    if (a < 0 || a >= m || b < 0 || b >= m) throw DataError("candidate out of range");
    if (a == b) throw DataError("MetricLP needs two distinct candidates");
    if (e.voters() == 0) throw DataError("election has no voters");
    check_alpha(e, alpha);
    return mode == LpMode::pruned ? build_pruned(e, a, b, alpha) : build_full(e, a, b, alpha);
}

LpOutcome solve_metric_lp(const MetricLp& lp) {
    LpOptions options;
    options.lazy_from = lp.lazy_from;
    options.batch = static_cast<std::size_t>(std::max(64, lp.lp.num_vars));
    return solve_lp(lp.lp, options);
}

double distortion_pair(const Election& e, Candidate a, Candidate b, std::optional<double> alpha, LpMode mode) {
    if (a == b) {
        if (a < 0 || a >= e.candidates()) throw DataError("candidate out of range");
        return 1.0;
    }
    const auto lp = build_metric_lp(e, a, b, alpha, mode);
    const auto out = solve_metric_lp(lp);
    switch (out.status) {
        case LpStatus::optimal: return out.value;
        case LpStatus::unbounded: return kInf;
        default:
            throw SolverError("MetricLP(" + std::to_string(a) + ", " + std::to_string(b) + ") ended " +
                              to_string(out.status));
    }
}

MetricWitness extract_pseudometric(const MetricLp& lp, const LpOutcome& outcome) {
    if (outcome.status != LpStatus::optimal) throw SolverError("no optimal solution to extract a metric from");
    const auto& x = outcome.solution;
    const int n = lp.voters, m = lp.candidates;
    MetricWitness w(n, m);
    if (lp.mode == LpMode::full) {
        for (Candidate c = 0; c < m; ++c) {
            for (Voter i = 0; i < n; ++i) w.set_voter_candidate(i, c, x[lp.pair_var(i, n + c)]);
            for (Candidate d = c + 1; d < m; ++d) w.set_candidate_candidate(c, d, x[lp.pair_var(n + c, n + d)]);
        }
        return w;
    }
    for (Voter i = 0; i < n; ++i)
        for (Candidate c = 0; c < m; ++c) w.set_voter_candidate(i, c, x[lp.vc_var(lp.voter_class[i], c)]);
    // Tightest candidate distances compatible with the voter rows; a maximum
    // of line metrics, hence itself a pseudometric.
    for (Candidate c = 0; c < m; ++c)
        for (Candidate d = c + 1; d < m; ++d) {
            double dist = 0.0;
            for (int cls = 0; cls < lp.classes(); ++cls)
                dist = std::max(dist, std::abs(x[lp.vc_var(cls, c)] - x[lp.vc_var(cls, d)]));
            w.set_candidate_candidate(c, d, dist);
        }
    return w;
}

std::pair<double, Candidate> candidate_distortion(const Election& e, Candidate a, const MinimaxOptions& options) {
    const int m = e.candidates();
    std::vector<double> row(m, 1.0);
    std::vector<Candidate> others;
    for (Candidate b = 0; b < m; ++b)
        if (b != a) others.push_back(b);
    parallel_for(others.size(), options.jobs,
                 [&](std::size_t t) { row[others[t]] = distortion_pair(e, a, others[t], options.alpha, options.mode); });
    Candidate worst = a;
    for (Candidate b = 0; b < m; ++b)
        if (row[b] > row[worst]) worst = b;
    return {row[worst], worst};
}

DistortionReport minimax(const Election& e, const MinimaxOptions& options) {
    const int m = e.candidates();
    if (m < 1) throw DataError("election has no candidates");
    check_alpha(e, options.alpha);
    DistortionReport r;
    r.candidates = m;
    r.alpha = options.alpha;
    r.table.assign(m, std::vector<double>(m, 1.0));
    std::vector<std::pair<Candidate, Candidate>> jobs;
    for (Candidate a = 0; a < m; ++a)
        for (Candidate b = 0; b < m; ++b)
            if (a != b) jobs.emplace_back(a, b);
    parallel_for(jobs.size(), options.jobs, [&](std::size_t t) {
        const auto [a, b] = jobs[t];
        r.table[a][b] = distortion_pair(e, a, b, options.alpha, options.mode);
    });
    r.distortion.resize(m);
    r.worst_opponent.resize(m);
    for (Candidate a = 0; a < m; ++a) {
        Candidate worst = a;
        for (Candidate b = 0; b < m; ++b)
            if (r.table[a][b] > r.table[a][worst]) worst = b;
        r.distortion[a] = r.table[a][worst];
        r.worst_opponent[a] = worst;
    }
    const double best = *std::min_element(r.distortion.begin(), r.distortion.end());
    const double slack = std::isinf(best) ? 0.0 : kLpTolerance * std::max(1.0, best);
    for (Candidate a = 0; a < m; ++a)
        if (r.distortion[a] <= best + slack) {
            r.winner = a;
            break;
        }
    return r;
}

nlohmann::json to_json(const DistortionReport& report) {
    const auto value = [](double v) -> nlohmann::json {
        if (std::isinf(v)) return "inf";
        return v;
    };
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : report.table) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) r.push_back(value(v));
        table.push_back(std::move(r));
    }
    nlohmann::json dist = nlohmann::json::array();
    for (double v : report.distortion) dist.push_back(value(v));
    nlohmann::json j;
    j["candidates"] = report.candidates;
    j["alpha"] = report.alpha ? nlohmann::json(*report.alpha) : nlohmann::json(nullptr);
    j["table"] = std::move(table);
    j["distortion"] = std::move(dist);
    j["worst_opponent"] = report.worst_opponent;
    j["winner"] = report.winner;
    return j;
}

}  // namespace mdist
