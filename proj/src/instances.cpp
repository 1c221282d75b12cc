#include "mdist/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdist/error.hpp"
#include "mdist/fraction.hpp"
#include "mdist/rng.hpp"

namespace mdist {

namespace {

std::vector<int> higher_index_first(int m) {
    std::vector<int> p(m);
    for (int c = 0; c < m; ++c) p[c] = m - 1 - c;
    return p;
}

GeneratedInstance line_instance(std::string name, const std::vector<double>& voters, const std::vector<double>& candidates,
                                std::vector<int> priority) {
    std::vector<std::vector<double>> vp, cp;
    for (double x : voters) vp.push_back({x});
    for (double x : candidates) cp.push_back({x});
    GeneratedInstance inst;
    inst.generator = std::move(name);
    inst.witness = MetricWitness::from_points(vp, cp);
    inst.election = induce_election(*inst.witness, priority);
    inst.tie_priority = std::move(priority);
    return inst;
}

}  // namespace

GeneratedInstance impartial_culture(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 1) throw ConfigError("impartial culture needs n, m >= 1");
    Rng rng(seed);
    GeneratedInstance inst;
    inst.generator = "impartial";
    inst.parameters = {{"n", n}, {"m", m}, {"seed", seed}};
    inst.election = Election(m);
    std::vector<Candidate> order(m);
    for (int i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(std::span<Candidate>(order));
        inst.election.add_ranking(order);
    }
    return inst;
}

GeneratedInstance euclidean(int n, int m, int dim, std::uint64_t seed) {
    if (n < 1 || m < 1) throw ConfigError("euclidean needs n, m >= 1");
    if (dim < 1) throw ConfigError("dimension must be at least 1");
    Rng rng(seed);
    const auto draw = [&](int count) {
        std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
        for (auto& p : pts)
            for (auto& x : p) x = rng.uniform();
        return pts;
    };
    const auto vp = draw(n);
    const auto cp = draw(m);
    GeneratedInstance inst;
    inst.generator = "euclidean";
    inst.parameters = {{"n", n}, {"m", m}, {"dim", dim}, {"seed", seed}};
    inst.witness = MetricWitness::from_points(vp, cp);
    inst.election = induce_election(*inst.witness);
    return inst;
}

GeneratedInstance chain(int ell) {
    if (ell < 2) throw ConfigError("chain needs ell >= 2");
    std::vector<double> pos(ell);
    for (int i = 1; i <= ell; ++i) pos[i - 1] = i == 1 ? 0.0 : (i % 2 == 0 ? i : -(i - 1));
    auto inst = line_instance("chain", {0.0, 1.0}, pos, higher_index_first(ell));
    inst.parameters = {{"ell", ell}};
    std::vector<int> sc(ell);
    for (int i = 1; i <= ell; ++i) sc[i - 1] = 2 * i - 1;
    inst.expected = {{"social_cost", sc}, {"tie_rule", "higher_index_wins"}, {"ratio_last_first", 2 * ell - 1}};
    return inst;
}

GeneratedInstance dr_lower_bound(int m) {
    int t = 0;
    while ((1 << t) < m) ++t;
    if (m < 2 || (1 << t) != m) throw ConfigError("dr_lower_bound needs m = 2^t with t >= 1");
    const int ell = t + 1;
    const double far = 100.0 * 2 * ell;
    const auto base = chain(ell);

    MetricWitness w(2, m);
    for (Candidate c = 0; c < m; ++c) {
        for (Voter i = 0; i < 2; ++i) w.set_voter_candidate(i, c, c < ell ? base.witness->voter_candidate(i, c) : far);
        for (Candidate d = c + 1; d < m; ++d)
            w.set_candidate_candidate(c, d, d < ell ? base.witness->candidate_candidate(c, d) : far);
    }
    GeneratedInstance inst;
    inst.generator = "dr-lower-bound";
    inst.parameters = {{"m", m}};
    inst.tie_priority = higher_index_first(m);
    inst.election = induce_election(w, inst.tie_priority);
    inst.witness = std::move(w);

    // Round r: c_{r+2} meets c_{r+1}; the other chain members meet far
    // candidates; far candidates fill the rest among themselves.
    std::vector<std::vector<std::pair<Candidate, Candidate>>> rounds;
    std::vector<Candidate> alive(m);
    std::iota(alive.begin(), alive.end(), 0);
    for (int r = 0; alive.size() > 1; ++r) {
        std::vector<Candidate> chain_alive, far_alive;
        for (Candidate c : alive) (c < ell ? chain_alive : far_alive).push_back(c);
        std::vector<std::pair<Candidate, Candidate>> pairs{{chain_alive[1], chain_alive[0]}};
        std::size_t f = 0;
        for (std::size_t j = 2; j < chain_alive.size(); ++j) pairs.emplace_back(chain_alive[j], far_alive[f++]);
        for (; f + 1 < far_alive.size(); f += 2) pairs.emplace_back(far_alive[f], far_alive[f + 1]);
        std::vector<Candidate> next;
        for (const auto& [a, b] : pairs) {
            const Candidate loser = majority_oracle(inst.election, a, b);
            next.push_back(loser == a ? b : a);
        }
        rounds.push_back(std::move(pairs));
        alive = std::move(next);
    }
    inst.schedule = Pairing::scheduled(rounds);
    inst.expected = {{"winner", ell - 1}, {"distortion", 2 * t + 1}, {"far_distance", far}};
    return inst;
}

GeneratedInstance ktop_lower_bound(int m, int k, double ratio) {
    if (k < 1 || m < 2 || (m - 1) % k != 0) throw ConfigError("ktop_lower_bound needs k | (m - 1)");
    if (!(ratio > 0.0)) throw ConfigError("ratio must be positive");
    const int n = (m - 1) / k;
    const Candidate x = m - 1;
    const double big = 1.0, small = ratio;
    std::vector<WeightedEdge> edges;
    const auto cand = [n](Candidate c) { return n + c; };
    edges.push_back({0, cand(x), big});
    for (Candidate c = 0; c < k; ++c) {
        edges.push_back({0, cand(c), big});
        if (c > 0) edges.push_back({cand(0), cand(c), 0.0});
    }
    for (Voter i = 1; i < n; ++i) {
        edges.push_back({i, cand(x), small});
        for (Candidate c = i * k; c < (i + 1) * k; ++c) edges.push_back({i, cand(c), 0.0});
    }
    GeneratedInstance inst;
    inst.generator = "ktop-lower-bound";
    inst.parameters = {{"m", m}, {"k", k}, {"ratio", ratio}};
    inst.witness = shortest_path_metric(n, m, edges);
    std::vector<std::vector<Candidate>> lists(n);
    for (Voter i = 0; i < n; ++i)
        for (Candidate c = i * k; c < (i + 1) * k; ++c) lists[i].push_back(c);
    inst.election = Election::from_rankings(m, lists);
    const double value = (1.0 + (n - 1) * (ratio + 2.0)) / (1.0 + (n - 1) * ratio);
    inst.expected = {{"x", x}, {"ratio_first_x", value}, {"limit", 2 * n - 1}, {"voters", n}};
    return inst;
}

GeneratedInstance missing_voters_tight(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    const Fraction eps = approximate(epsilon);
    // Smallest n with eps * n and (1 - eps) * n / 2 integral.
    std::int64_t n = 1;
    while ((eps.num * n) % eps.den != 0 || ((eps.den - eps.num) * n) % (2 * eps.den) != 0) ++n;
    const std::int64_t missing = eps.num * n / eps.den;
    const std::int64_t half = (n - missing) / 2;
    std::vector<double> voters;
    for (std::int64_t i = 0; i < half; ++i) voters.push_back(1.0);
    for (std::int64_t i = 0; i < n - half; ++i) voters.push_back(2.0);
    auto inst = line_instance("missing-tight", voters, {0.0, 2.0}, {});
    for (std::int64_t i = n - missing; i < n; ++i) inst.missing.push_back(static_cast<Voter>(i));
    inst.election = inst.election.masked(inst.missing);
    inst.parameters = {{"epsilon", epsilon}};
    const double e = eps.to_double();
    inst.expected = {{"candidate", 0}, {"distortion", 3.0 + 4.0 * e / (1.0 - e)}, {"missing", missing}, {"n", n}};
    return inst;
}

GeneratedInstance veto_instance(int m) {
    if (m < 3) throw ConfigError("veto instance needs m >= 3");
    const int n = m;
    std::vector<std::vector<Candidate>> rankings;
    std::vector<Candidate> tops;
    for (int i = 1; i < n; ++i) tops.push_back(i == 1 ? 1 : m + 1 - i);
    for (Candidate t : tops) {
        std::vector<Candidate> r{t, 0};
        for (int s = 1; s < m - 1; ++s) r.push_back(1 + (t - 1 + s) % (m - 1));
        rankings.push_back(r);
    }
    std::vector<Candidate> last{1};
    for (Candidate c = m - 1; c >= 2; --c) last.push_back(c);
    last.push_back(0);
    rankings.push_back(last);

    std::vector<WeightedEdge> edges;
    const auto cand = [n](Candidate c) { return n + c; };
    for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, cand(0), 1.0});
        edges.push_back({i, cand(tops[i]), 1.0});
    }
    for (Candidate c = 0; c < m; ++c) edges.push_back({n - 1, cand(c), 1.0});

    GeneratedInstance inst;
    inst.generator = "veto";
    inst.parameters = {{"m", m}};
    inst.election = Election::from_rankings(m, rankings);
    inst.witness = shortest_path_metric(n, m, edges);
    inst.expected = {{"a", 0},
                     {"sc_a", m},
                     {"sc_other", 3 * m - 4},
                     {"plurality_a", 0},
                     {"veto_a", 1},
                     {"support_a_over_b", nlohmann::json::array({m - 2, m})}};
    return inst;
}

GeneratedInstance decisive_instance(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    const Candidate a = 0, b = 1, e = 2;
    const int n = 2;
    const auto cand = [](Candidate c) { return 2 + c; };
    const std::vector<WeightedEdge> edges{{0, cand(a), alpha},
                                          {0, cand(b), 1.0},
                                          {0, cand(e), 1.0},
                                          {1, cand(e), 0.0},
                                          {cand(e), cand(b), 1.0 + alpha}};
    GeneratedInstance inst;
    inst.generator = "decisive";
    inst.parameters = {{"alpha", alpha}};
    inst.election = Election::from_rankings(3, {{a, b, e}, {e, b, a}});
    inst.witness = shortest_path_metric(n, 3, edges);
    inst.expected = {{"sc", {1.0 + 2 * alpha, 2.0 + alpha, 1.0}},
                     {"distortion_a", 1.0 + 2 * alpha},
                     {"distortion_e", 1.0 + 2 * alpha},
                     {"distortion_b", 2.0 + alpha}};
    return inst;
}

GeneratedInstance hidden_star(int m, Candidate chosen, int n, std::vector<Candidate> tie_order, double far_ratio) {
    if (m < 3) throw ConfigError("hidden star needs m >= 3");
    if (chosen < 0 || chosen >= m) throw ConfigError("chosen candidate out of range");
    if (n < 1) throw ConfigError("hidden star needs n >= 1");
    if (!(far_ratio > 1.0)) throw ConfigError("far ratio must exceed 1");
    if (tie_order.empty())
        for (Candidate c = 0; c < m; ++c)
            if (c != chosen) tie_order.push_back(c);
    if (static_cast<int>(tie_order.size()) != m - 1) throw ConfigError("tie order must list the other candidates");
    std::vector<int> priority(m, -1);
    priority[chosen] = 0;
    for (std::size_t r = 0; r < tie_order.size(); ++r) {
        const Candidate c = tie_order[r];
        if (c < 0 || c >= m || c == chosen || priority[c] >= 0) throw ConfigError("tie order is not a permutation");
        priority[c] = static_cast<int>(r) + 1;
    }
    const double delta = 1.0, far = far_ratio;
    MetricWitness w(n, m);
    for (Candidate c = 0; c < m; ++c) {
        for (Voter i = 0; i < n; ++i) w.set_voter_candidate(i, c, c == chosen ? delta : far);
        for (Candidate d = c + 1; d < m; ++d) w.set_candidate_candidate(c, d, far);
    }
    GeneratedInstance inst;
    inst.generator = "hidden-star";
    inst.parameters = {{"m", m}, {"chosen", chosen}, {"n", n}, {"far_ratio", far_ratio}, {"tie_order", tie_order}};
    inst.election = induce_election(w, priority);
    inst.witness = std::move(w);
    inst.tie_priority = std::move(priority);
    inst.expected = {{"optimal", chosen}, {"distortion_other", far / delta}};
    return inst;
}

GeneratedInstance generate(const std::string& name, const GeneratorParams& p) {
    if (name == "impartial") return impartial_culture(p.n, p.m, p.seed);
    if (name == "euclidean") return euclidean(p.n, p.m, p.dim, p.seed);
    if (name == "chain") return chain(p.ell);
    if (name == "dr-lower-bound") return dr_lower_bound(p.m);
    if (name == "ktop-lower-bound") return ktop_lower_bound(p.m, p.k, p.ratio);
    if (name == "missing-tight") return missing_voters_tight(p.epsilon);
    if (name == "veto") return veto_instance(p.m);
    if (name == "decisive") return decisive_instance(p.alpha);
    if (name == "hidden-star") return hidden_star(p.m, p.chosen, p.n);
    throw ConfigError("unknown generator '" + name + "'");
}

nlohmann::json witness_to_json(const MetricWitness& w) {
    nlohmann::json vc = nlohmann::json::array(), cc = nlohmann::json::array();
    for (Voter i = 0; i < w.voters(); ++i) {
        std::vector<double> row(w.candidates());
        for (Candidate c = 0; c < w.candidates(); ++c) row[c] = w.voter_candidate(i, c);
        vc.push_back(row);
    }
    for (Candidate c = 0; c < w.candidates(); ++c) {
        std::vector<double> row(w.candidates());
        for (Candidate d = 0; d < w.candidates(); ++d) row[d] = w.candidate_candidate(c, d);
        cc.push_back(row);
    }
    return {{"voters", w.voters()}, {"candidates", w.candidates()}, {"voter_candidate", vc}, {"candidate_candidate", cc}};
}

MetricWitness witness_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("voters").get<int>(), m = j.at("candidates").get<int>();
        const auto& vc = j.at("voter_candidate");
        const auto& cc = j.at("candidate_candidate");
        if (static_cast<int>(vc.size()) != n || static_cast<int>(cc.size()) != m)
            throw DataError("witness tables have wrong dimensions");
        MetricWitness w(n, m);
        for (Voter i = 0; i < n; ++i) {
            if (static_cast<int>(vc[i].size()) != m) throw DataError("witness row has wrong length");
            for (Candidate c = 0; c < m; ++c) w.set_voter_candidate(i, c, vc[i][c].get<double>());
        }
        for (Candidate c = 0; c < m; ++c) {
            if (static_cast<int>(cc[c].size()) != m) throw DataError("witness row has wrong length");
            for (Candidate d = c + 1; d < m; ++d) w.set_candidate_candidate(c, d, cc[c][d].get<double>());
        }
        return w;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("malformed witness: ") + ex.what());
    }
}

nlohmann::json sidecar(const GeneratedInstance& inst) {
    nlohmann::json j;
    j["generator"] = inst.generator;
    j["parameters"] = inst.parameters;
    j["expected"] = inst.expected;
    j["witness"] = inst.witness ? witness_to_json(*inst.witness) : nlohmann::json(nullptr);
    if (inst.schedule) {
        nlohmann::json rounds = nlohmann::json::array();
        for (const auto& r : inst.schedule->rounds) {
            nlohmann::json pairs = nlohmann::json::array();
            for (const auto& [a, b] : r) pairs.push_back({a, b});
            rounds.push_back(pairs);
        }
        j["schedule"] = rounds;
    }
    if (!inst.missing.empty()) j["missing"] = inst.missing;
    if (!inst.tie_priority.empty()) j["tie_priority"] = inst.tie_priority;
    return j;
}

}  // namespace mdist
