#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mdist/election.hpp"
#include "mdist/error.hpp"
#include "mdist/metric.hpp"
#include "mdist/rng.hpp"

using namespace mdist;

namespace {

Election random_partial(Rng& rng, int n, int m) {
    Election e(m);
    for (int i = 0; i < n; ++i) {
        std::vector<Candidate> order(m);
        for (int c = 0; c < m; ++c) order[c] = c;
        rng.shuffle(std::span<Candidate>(order));
        std::vector<Pair> pairs;
        for (int x = 0; x < m; ++x)
            for (int y = x + 1; y < m; ++y)
                if (rng.uniform() < 0.3) pairs.push_back({order[x], order[y]});
        e.add_pairs(pairs);
    }
    return e;
}

}  // namespace

TEST_CASE("transitive closure") {
    const std::vector<Pair> chain{{0, 1}, {1, 2}};
    const auto closed = transitive_closure(3, chain);
    CHECK(closed == std::vector<Pair>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(transitive_closure(3, {}).empty());
    const std::vector<Pair> cycle{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(transitive_closure(2, cycle), InconsistentPreferences);
    CHECK(transitive_closure(3, closed) == closed);
}

TEST_CASE("closure is monotone") {
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<Pair> small;
        std::vector<Candidate> order{0, 1, 2, 3, 4};
        rng.shuffle(std::span<Candidate>(order));
        for (int x = 0; x < 5; ++x)
            for (int y = x + 1; y < 5; ++y)
                if (rng.uniform() < 0.4) small.push_back({order[x], order[y]});
        auto big = small;
        big.push_back({order[0], order[4]});
        const auto cs = transitive_closure(5, small);
        const auto cb = transitive_closure(5, big);
        const std::set<Pair> sb(cb.begin(), cb.end());
        for (const auto& p : cs) CHECK(sb.count(p) == 1);
    }
}

TEST_CASE("k-top annotation expands to pairs") {
    const auto e = Election::from_rankings(4, {{2, 0}});
    CHECK(e.prefers(0, 2, 0));
    CHECK(e.prefers(0, 2, 3));
    CHECK(e.prefers(0, 0, 1));
    CHECK_FALSE(e.prefers(0, 1, 3));
    CHECK_FALSE(e.prefers(0, 3, 1));
    CHECK(e.pair_count(0) == 5);
    CHECK(e.top(0) == 2);
    CHECK(e.second(0) == 0);
    CHECK_FALSE(e.bottom(0).has_value());
}

TEST_CASE("ranking of length m-1 is a total order") {
    const auto a = Election::from_rankings(3, {{1, 2}});
    const auto b = Election::from_rankings(3, {{1, 2, 0}});
    CHECK(a == b);
    CHECK(a.is_total(0));
    CHECK(a.bottom(0) == 0);
}

TEST_CASE("comparison graph") {
    const auto e = Election::from_rankings(2, {{0, 1}, {0, 1}, {0, 1}});
    const auto g = comparison_graph(e);
    CHECK(g.weight(0, 1) == Fraction{1, 1});
    CHECK(g.weight(1, 0) == Fraction{0, 1});

    Election f(2);
    const std::vector<Pair> one{{0, 1}};
    f.add_pairs(one);
    f.add_pairs({});
    const auto h = comparison_graph(f);
    CHECK(h.weight(0, 1) == Fraction{1, 2});
    CHECK(h.weight(1, 0) == Fraction{0, 1});
}

TEST_CASE("comparison graph matches brute-force recount") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto e = random_partial(rng, 17, 6);
        const auto g = comparison_graph(e);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                int count = 0;
                for (int i = 0; i < e.voters(); ++i) {
                    const auto ps = e.pairs(i);
                    for (const auto& p : ps) count += (p.better == a && p.worse == b);
                }
                CHECK(g.count(a, b) == count);
            }
    }
}

TEST_CASE("scores") {
    const auto e = Election::from_rankings(3, {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}});
    const auto s = scores(e);
    CHECK(s.plurality == std::vector<std::int64_t>{2, 1, 0});
    CHECK(s.veto == std::vector<std::int64_t>{0, 1, 2});
    CHECK(s.topk_coverage[0] == Fraction{1, 1});

    Election partial(3);
    partial.add_pairs({});
    const auto z = scores(partial);
    CHECK(z.plurality == std::vector<std::int64_t>{0, 0, 0});
    CHECK(z.veto == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("text format round trip") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        Election e(5);
        for (int i = 0; i < 6; ++i) {
            std::vector<Candidate> order{0, 1, 2, 3, 4};
            rng.shuffle(std::span<Candidate>(order));
            order.resize(rng.below(6));
            e.add_ranking(order);
        }
        std::stringstream ss;
        write_election(ss, e);
        CHECK(read_election(ss) == e);
    }
    std::istringstream in("# comment\n3 4\n0 > 1=2\n-\n3\n");
    const auto e = read_election(in);
    CHECK(e.voters() == 3);
    CHECK(e.prefers(0, 0, 1));
    CHECK(e.prefers(0, 0, 3));
    CHECK(e.prefers(0, 1, 3));
    CHECK_FALSE(e.prefers(0, 1, 2));
    CHECK(e.pair_count(1) == 0);
    CHECK(e.top_list(2) == std::vector<Candidate>{3});
    std::stringstream out;
    write_election(out, e);
    CHECK(read_election(out) == e);
}

TEST_CASE("malformed election text") {
    std::istringstream bad_header("2\n");
    CHECK_THROWS_AS(read_election(bad_header), DataError);
    std::istringstream cyc("1 2\n0 > 1 > 0\n");
    CHECK_THROWS_AS(read_election(cyc), DataError);
    std::istringstream range("1 2\n0 > 5\n");
    CHECK_THROWS_AS(read_election(range), DataError);
}

TEST_CASE("metric consistency and social cost") {
    Rng rng(5);
    std::vector<std::vector<double>> vs(9, std::vector<double>(2)), cs(4, std::vector<double>(2));
    for (auto& p : vs)
        for (auto& x : p) x = rng.uniform();
    for (auto& p : cs)
        for (auto& x : p) x = rng.uniform();
    const auto w = MetricWitness::from_points(vs, cs);
    CHECK(w.is_pseudometric());
    const auto e = induce_election(w);
    CHECK(check_consistent(w, e));

    MetricWitness bad(1, 2);
    bad.set_voter_candidate(0, 0, 2.0);
    bad.set_voter_candidate(0, 1, 1.0);
    bad.set_candidate_candidate(0, 1, 1.0);
    const auto ab = Election::from_rankings(2, {{0, 1}});
    CHECK_FALSE(check_consistent(bad, ab));
    Election empty(2);
    empty.add_pairs({});
    CHECK(check_consistent(bad, empty));

    MetricWitness at(3, 2);
    for (int i = 0; i < 3; ++i) at.set_voter_candidate(i, 1, 1.0);
    at.set_candidate_candidate(0, 1, 1.0);
    CHECK(social_cost(at, 0) == 0.0);
    CHECK(social_cost(at, 1) == 3.0);
    CHECK(std::isinf(realized_distortion(at, 1)));
}

TEST_CASE("triangle violations are detected") {
    MetricWitness w(1, 3);
    w.set_candidate_candidate(0, 1, 1.0);
    w.set_candidate_candidate(1, 2, 1.0);
    w.set_candidate_candidate(0, 2, 5.0);
    CHECK_FALSE(w.is_pseudometric());
    w.set_candidate_candidate(0, 2, 2.0);
    w.set_voter_candidate(0, 0, 0.5);
    w.set_voter_candidate(0, 1, 0.5);
    w.set_voter_candidate(0, 2, 1.5);
    CHECK(w.is_pseudometric());
    w.set_voter_candidate(0, 2, 1.6);
    CHECK_FALSE(w.is_pseudometric());
}
