#include "mdist/matching.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "mdist/error.hpp"

namespace mdist {

DominationGraph domination_graph(const Election& e, Candidate a, std::vector<std::int64_t> capacity) {
    const int m = e.candidates();
    if (a < 0 || a >= m) throw DataError("candidate out of range");
    if (static_cast<int>(capacity.size()) != m) throw DataError("one capacity per candidate required");
    DominationGraph g;
    g.focus = a;
    g.voters = e.voters();
    g.candidates = m;
    g.capacity = std::move(capacity);
    g.adjacency.assign(static_cast<std::size_t>(g.voters) * m, 0);
    for (Voter i = 0; i < g.voters; ++i)
        for (Candidate k = 0; k < m; ++k)
            g.adjacency[static_cast<std::size_t>(i) * m + k] = (k == a || e.prefers(i, a, k));
    return g;
}

DominationGraph domination_graph(const Election& e, Candidate a) {
    return domination_graph(e, a, scores(e).plurality);
}

std::vector<Voter> MatchingResult::part(Candidate k) const {
    std::vector<Voter> out;
    for (Voter i = 0; i < static_cast<Voter>(assignment.size()); ++i)
        if (assignment[i] == k) out.push_back(i);
    return out;
}

namespace {

class MaxFlow {
public:
    explicit MaxFlow(int nodes) : head_(nodes, -1), level_(nodes), it_(nodes) {}

    int add_edge(int u, int v, std::int64_t cap) {
        to_.push_back(v);
        cap_.push_back(cap);
        next_.push_back(head_[u]);
        head_[u] = static_cast<int>(to_.size()) - 1;
        to_.push_back(u);
        cap_.push_back(0);
        next_.push_back(head_[v]);
        head_[v] = static_cast<int>(to_.size()) - 1;
        return static_cast<int>(to_.size()) - 2;
    }

    std::int64_t flow_on(int edge) const { return cap_[edge ^ 1]; }

    std::int64_t run(int s, int t) {
        std::int64_t total = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (const std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
        }
        return total;
    }

private:
    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::vector<int> queue{s};
        level_[s] = 0;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (int e = head_[queue[h]]; e >= 0; e = next_[e])
                if (cap_[e] > 0 && level_[to_[e]] < 0) {
                    level_[to_[e]] = level_[queue[h]] + 1;
                    queue.push_back(to_[e]);
                }
        return level_[t] >= 0;
    }

    std::int64_t dfs(int u, int t, std::int64_t limit) {
        if (u == t) return limit;
        for (int& e = it_[u]; e >= 0; e = next_[e]) {
            const int v = to_[e];
            if (cap_[e] <= 0 || level_[v] != level_[u] + 1) continue;
            if (const std::int64_t f = dfs(v, t, std::min(limit, cap_[e]))) {
                cap_[e] -= f;
                cap_[e ^ 1] += f;
                return f;
            }
        }
        return 0;
    }

    std::vector<int> head_, to_, next_, level_, it_;
    std::vector<std::int64_t> cap_;
};

}  // namespace

MatchingResult max_matching(const DominationGraph& g) {
    const int n = g.voters, m = g.candidates;
    for (auto c : g.capacity)
        if (c < 0) throw DataError("negative capacity");

    // Voters with the same neighbourhood are interchangeable.
    std::map<std::vector<std::uint8_t>, int> type_of;
    std::vector<int> voter_type(n);
    std::vector<std::vector<Voter>> members;
    for (Voter i = 0; i < n; ++i) {
        const auto* row = g.adjacency.data() + static_cast<std::size_t>(i) * m;
        const auto [it, fresh] = type_of.try_emplace(std::vector<std::uint8_t>(row, row + m), static_cast<int>(members.size()));
        if (fresh) members.emplace_back();
        members[it->second].push_back(i);
        voter_type[i] = it->second;
    }
    const int types = static_cast<int>(members.size());
    const int source = types + m, sink = source + 1;
    MaxFlow flow(sink + 1);
    for (int t = 0; t < types; ++t) flow.add_edge(source, t, static_cast<std::int64_t>(members[t].size()));
    std::vector<std::vector<std::pair<Candidate, int>>> links(types);
    for (int t = 0; t < types; ++t) {
        const Voter rep = members[t].front();
        for (Candidate k = 0; k < m; ++k)
            if (g.edge(rep, k) && g.capacity[k] > 0)
                links[t].emplace_back(k, flow.add_edge(t, types + k, static_cast<std::int64_t>(members[t].size())));
    }
    for (Candidate k = 0; k < m; ++k)
        if (g.capacity[k] > 0) flow.add_edge(types + k, sink, g.capacity[k]);

    MatchingResult out;
    out.size = flow.run(source, sink);
    out.usage.assign(m, 0);
    out.assignment.assign(n, -1);
    for (int t = 0; t < types; ++t) {
        std::size_t next = 0;
        for (const auto& [k, edge] : links[t]) {
            for (std::int64_t f = flow.flow_on(edge); f > 0; --f) out.assignment[members[t][next++]] = k;
            out.usage[k] += flow.flow_on(edge);
        }
    }
    out.phi = Fraction(out.size, std::max(n, 1)).reduced();
    return out;
}

PluralityMatchingResult plurality_matching(const Election& e) {
    const int m = e.candidates();
    if (m == 0) throw DataError("election has no candidates");
    if (e.voters() == 0) throw DataError("election has no voters");
    const auto plurality = scores(e).plurality;
    PluralityMatchingResult out;
    for (Candidate a = 0; a < m; ++a) out.phi.push_back(max_matching(domination_graph(e, a, plurality)).phi);
    for (Candidate a = 1; a < m; ++a)
        if (out.phi[a] > out.phi[out.winner]) out.winner = a;
    return out;
}

ConjectureProbe conjecture_probe(const Election& e, int k) {
    const int m = e.candidates();
    if (k < 1 || k > m) throw ConfigError("k must lie in [1, m]");
    const auto pm = plurality_matching(e);
    ConjectureProbe out;
    out.best = pm.winner;
    out.fraction = pm.phi[pm.winner];
    out.holds = out.fraction >= Fraction(k, m);
    return out;
}

}  // namespace mdist
