#include "mdist/mechanisms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mdist/error.hpp"
#include "mdist/rng.hpp"

namespace mdist {

Candidate majority_oracle(const Election& e, Candidate a, Candidate b, TieRule tie) {
    const int m = e.candidates();
    if (a < 0 || a >= m || b < 0 || b >= m || a == b) throw DataError("majority oracle needs two distinct candidates");
    int for_a = 0, for_b = 0;
    for (Voter i = 0; i < e.voters(); ++i) {
        for_a += e.prefers(i, a, b);
        for_b += e.prefers(i, b, a);
    }
    if (for_a != for_b) return for_a < for_b ? a : b;
    const bool a_wins = (a > b) == (tie == TieRule::higher_index_wins);
    return a_wins ? b : a;
}

DominationRootResult domination_root(std::span<const Candidate> candidates, const ComparisonOracle& oracle,
                                     const Pairing& pairing) {
    if (candidates.empty()) throw DataError("domination root needs at least one candidate");
    DominationRootResult out;
    std::vector<Candidate> alive(candidates.begin(), candidates.end());
    for (std::size_t i = 0; i < alive.size(); ++i)
        for (std::size_t j = i + 1; j < alive.size(); ++j)
            if (alive[i] == alive[j]) throw DataError("candidate listed twice");

    while (alive.size() > 1) {
        const int round = out.rounds++;
        std::vector<std::pair<Candidate, Candidate>> pairs;
        std::vector<Candidate> bye;
        const bool scheduled = pairing.kind == Pairing::Kind::schedule &&
                               static_cast<std::size_t>(round) < pairing.rounds.size();
        if (scheduled) {
            pairs = pairing.rounds[round];
            if (pairs.size() != alive.size() / 2)
                throw ConfigError("schedule round " + std::to_string(round) + " must have " +
                                  std::to_string(alive.size() / 2) + " pairs");
            std::vector<int> used(alive.size(), 0);
            const auto mark = [&](Candidate c) {
                const auto it = std::find(alive.begin(), alive.end(), c);
                if (it == alive.end() || used[it - alive.begin()]++)
                    throw ConfigError("schedule round " + std::to_string(round) + " pairs candidate " +
                                      std::to_string(c) + " invalidly");
            };
            for (const auto& [a, b] : pairs) {
                mark(a);
                mark(b);
            }
            for (std::size_t i = 0; i < alive.size(); ++i)
                if (!used[i]) bye.push_back(alive[i]);
        } else {
            std::vector<Candidate> order = alive;
            if (pairing.kind == Pairing::Kind::shuffled) {
                Rng rng(child_seed(pairing.seed, static_cast<std::uint64_t>(round)));
                rng.shuffle(std::span<Candidate>(order));
            }
            for (std::size_t i = 0; i + 1 < order.size(); i += 2) pairs.emplace_back(order[i], order[i + 1]);
            if (order.size() % 2) bye.push_back(order.back());
        }
        std::vector<Candidate> next;
        for (const auto& [a, b] : pairs) {
            const Candidate loser = oracle(a, b);
            if (loser != a && loser != b) throw DataError("oracle returned a candidate outside the queried pair");
            out.transcript.record_compare(round, a, b, loser);
            next.push_back(loser == a ? b : a);
        }
        next.insert(next.end(), bye.begin(), bye.end());
        alive = std::move(next);
    }
    out.winner = alive.front();
    return out;
}

int Digraph::out_degree(Candidate a) const {
    int d = 0;
    for (Candidate b = 0; b < m_; ++b) d += (b != a && edge(a, b));
    return d;
}

bool Digraph::contains_tournament() const {
    for (Candidate a = 0; a < m_; ++a)
        for (Candidate b = a + 1; b < m_; ++b)
            if (!edge(a, b) && !edge(b, a)) return false;
    return true;
}

Digraph threshold_digraph(const ComparisonGraph& g, Fraction tau) {
    Digraph d(g.candidates());
    for (Candidate a = 0; a < g.candidates(); ++a)
        for (Candidate b = 0; b < g.candidates(); ++b)
            if (a != b && g.weight(a, b) >= tau) d.set_edge(a, b);
    return d;
}

Digraph majority_digraph(const ComparisonGraph& g) {
    Digraph d(g.candidates());
    for (Candidate a = 0; a < g.candidates(); ++a)
        for (Candidate b = 0; b < g.candidates(); ++b)
            if (a != b && g.count(a, b) >= g.count(b, a)) d.set_edge(a, b);
    return d;
}

std::vector<int> hop_distances(const Digraph& g, Candidate v) {
    std::vector<int> dist(g.size(), -1);
    std::vector<Candidate> queue{v};
    dist[v] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Candidate u = queue[head];
        for (Candidate w = 0; w < g.size(); ++w)
            if (w != u && g.edge(u, w) && dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

bool is_two_hop_king(const Digraph& g, Candidate v) {
    const auto dist = hop_distances(g, v);
    return std::all_of(dist.begin(), dist.end(), [](int d) { return d >= 0 && d <= 2; });
}

Candidate king_vertex(const Digraph& g) {
    if (g.size() == 0) throw DataError("empty digraph");
    for (Candidate a = 0; a < g.size(); ++a)
        for (Candidate b = a + 1; b < g.size(); ++b)
            if (!g.edge(a, b) && !g.edge(b, a))
                throw DataError("no edge between candidates " + std::to_string(a) + " and " + std::to_string(b));
    Candidate best = 0;
    for (Candidate a = 1; a < g.size(); ++a)
        if (g.out_degree(a) > g.out_degree(best)) best = a;
    if (!is_two_hop_king(g, best))
        throw TheoremViolation("maximum out-degree vertex " + std::to_string(best) + " is not a 2-hop king");
    return best;
}

CopelandResult copeland(const ComparisonGraph& g) {
    const int m = g.candidates();
    CopelandResult out;
    out.doubled_score.assign(m, 0);
    for (Candidate a = 0; a < m; ++a)
        for (Candidate b = a + 1; b < m; ++b) {
            const int ab = g.count(a, b), ba = g.count(b, a);
            if (ab + ba == 0)
                throw DataError("no voter compares candidates " + std::to_string(a) + " and " + std::to_string(b));
            if (ab > ba) {
                out.doubled_score[a] += 2;
            } else if (ba > ab) {
                out.doubled_score[b] += 2;
            } else {
                ++out.doubled_score[a];
                ++out.doubled_score[b];
            }
        }
    out.winner = static_cast<Candidate>(std::max_element(out.doubled_score.begin(), out.doubled_score.end()) -
                                        out.doubled_score.begin());
    if (m > 0 && !is_two_hop_king(majority_digraph(g), out.winner))
        throw TheoremViolation("Copeland winner " + std::to_string(out.winner) + " is not a king");
    return out;
}

CopelandResult copeland(const Election& e) {
    if (e.candidates() == 0) throw DataError("election has no candidates");
    return copeland(comparison_graph(e));
}

Candidate balanced_rule(const Election& e, Fraction alpha) {
    if (alpha <= Fraction(0) || alpha > Fraction(1)) throw ConfigError("alpha must lie in (0, 1]");
    if (e.voters() == 0) throw DataError("election has no voters");
    const auto g = comparison_graph(e);
    for (Candidate a = 0; a < e.candidates(); ++a)
        for (Candidate b = a + 1; b < e.candidates(); ++b)
            if (g.coverage(a, b) < alpha)
                throw DataError("pair (" + std::to_string(a) + ", " + std::to_string(b) + ") is compared by " +
                                std::to_string(g.count(a, b) + g.count(b, a)) + " of " + std::to_string(e.voters()) +
                                " voters, below alpha");
    return king_vertex(threshold_digraph(g, Fraction(alpha.num, alpha.den * 2)));
}

Candidate ktop_rule(const Election& e, int k) {
    const int m = e.candidates();
    if (k < 1 || k > m) throw ConfigError("k must lie in [1, m]");
    if (e.voters() == 0) throw DataError("election has no voters");
    for (Voter i = 0; i < e.voters(); ++i) {
        const auto& list = e.top_list(i);
        const int len = list ? static_cast<int>(list->size()) : 0;
        // A (m-1)-top list is stored as the full ranking.
        if (!(len == k || (k == m - 1 && len == m)))
            throw DataError("voter " + std::to_string(i) + " does not carry a " + std::to_string(k) + "-top list");
    }
    const auto g = comparison_graph(e);
    const auto d = threshold_digraph(g, Fraction(k, 3 * m));
    const auto s = scores(e);
    std::vector<Candidate> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Candidate x, Candidate y) { return s.topk_coverage[x] > s.topk_coverage[y]; });
    for (Candidate c : order)
        if (is_two_hop_king(d, c)) return c;
    throw TheoremViolation("no 2-hop king in the k/(3m) threshold digraph (k=" + std::to_string(k) + ")");
}

}  // namespace mdist
