#include <doctest.h>

#include <cmath>

#include "mdist/distortion.hpp"
#include "mdist/error.hpp"
#include "mdist/instances.hpp"
#include "mdist/matching.hpp"
#include "mdist/mechanisms.hpp"
#include "mdist/rng.hpp"

using namespace mdist;

TEST_CASE("impartial culture") {
    const auto a = impartial_culture(20, 5, 9);
    const auto b = impartial_culture(20, 5, 9);
    CHECK(a.election == b.election);
    CHECK(a.election.all_total());
    CHECK_FALSE(a.witness.has_value());
    const auto one = impartial_culture(4, 1, 1);
    for (Voter i = 0; i < 4; ++i) CHECK(one.election.top(i) == 0);
    const auto g = comparison_graph(impartial_culture(50, 10, 3).election);
    for (Candidate x = 0; x < 10; ++x)
        for (Candidate y = x + 1; y < 10; ++y) CHECK(g.weight(x, y) + g.weight(y, x) == Fraction(1));
}

TEST_CASE("euclidean placements are consistent") {
    for (int dim = 1; dim <= 3; ++dim) {
        const auto inst = euclidean(15, 6, dim, 100 + dim);
        REQUIRE(inst.witness);
        CHECK(inst.witness->is_pseudometric());
        CHECK(check_consistent(*inst.witness, inst.election));
    }
    // On a line every voter's ranking is single-peaked in candidate position.
    const auto line = euclidean(10, 5, 1, 4);
    const auto& w = *line.witness;
    for (Voter i = 0; i < 10; ++i) {
        const auto r = line.election.ranked_prefix(i);
        for (std::size_t p = 1; p < r.size(); ++p) CHECK(w.voter_candidate(i, r[p - 1]) <= w.voter_candidate(i, r[p]));
    }
}

TEST_CASE("chain construction") {
    for (int ell = 2; ell <= 8; ++ell) {
        const auto inst = chain(ell);
        const auto& w = *inst.witness;
        CHECK(check_consistent(w, inst.election));
        for (int i = 1; i <= ell; ++i) CHECK(social_cost(w, i - 1) == 2.0 * i - 1);
        for (int i = 2; i <= ell; ++i) {
            CHECK(majority_oracle(inst.election, i - 1, i - 2) == i - 2);
            // Every such comparison is a 1-1 split decided by the tie rule.
            CHECK(comparison_graph(inst.election).count(i - 1, i - 2) == 1);
        }
    }
    CHECK_THROWS_AS(chain(1), ConfigError);
}

TEST_CASE("dr lower bound") {
    for (int t = 1; t <= 4; ++t) {
        const int m = 1 << t;
        const auto inst = dr_lower_bound(m);
        REQUIRE(inst.schedule);
        CHECK(check_consistent(*inst.witness, inst.election));
        std::vector<Candidate> all(m);
        for (int c = 0; c < m; ++c) all[c] = c;
        const auto oracle = [&](Candidate a, Candidate b) { return majority_oracle(inst.election, a, b); };
        const auto r = domination_root(all, oracle, *inst.schedule);
        CHECK(r.winner == t);
        CHECK(r.transcript.size() == static_cast<std::size_t>(m - 1));
        CHECK(realized_distortion(*inst.witness, r.winner) == 2.0 * t + 1);
        for (const auto& ev : r.transcript.events())
            if (ev.a > t && ev.b > t) continue;
            else if (ev.a > t || ev.b > t) CHECK(ev.loser > t);
    }
    CHECK_THROWS_AS(dr_lower_bound(6), ConfigError);
}

TEST_CASE("ktop lower bound") {
    const auto inst = ktop_lower_bound(5, 2, 1e-6);
    CHECK(inst.election.voters() == 2);
    CHECK(check_consistent(*inst.witness, inst.election));
    const auto s = scores(inst.election);
    CHECK(s.topk_coverage[4] == Fraction(0));
    const double expected = inst.expected["ratio_first_x"].get<double>();
    CHECK(std::abs(expected - 3.0) < 1e-3);
    CHECK(social_cost(*inst.witness, 0) / social_cost(*inst.witness, 4) == doctest::Approx(expected).epsilon(1e-12));
    const auto big = ktop_lower_bound(13, 3, 0.5);
    CHECK(check_consistent(*big.witness, big.election));
    CHECK(social_cost(*big.witness, 0) / social_cost(*big.witness, 12) ==
          doctest::Approx(big.expected["ratio_first_x"].get<double>()).epsilon(1e-12));
    CHECK_THROWS_AS(ktop_lower_bound(6, 2, 0.1), ConfigError);
}

TEST_CASE("missing voters tight instance") {
    for (double eps : {0.2, 0.4, 0.6}) {
        const auto inst = missing_voters_tight(eps);
        const auto& w = *inst.witness;
        CHECK(check_consistent(w, inst.election));
        const double value = 3.0 + 4.0 * eps / (1.0 - eps);
        CHECK(social_cost(w, 0) / social_cost(w, 1) == doctest::Approx(value).epsilon(1e-12));
        CHECK(inst.expected["distortion"].get<double>() == doctest::Approx(value).epsilon(1e-12));
    }
    const auto inst = missing_voters_tight(0.2);
    CHECK(inst.election.voters() == 5);
    CHECK(inst.missing.size() == 1);
    CHECK(inst.expected["distortion"].get<double>() == 4.0);
}

TEST_CASE("veto instance") {
    const auto four = veto_instance(4);
    const auto expected = Election::from_rankings(4, {{1, 0, 2, 3}, {3, 0, 1, 2}, {2, 0, 3, 1}, {1, 3, 2, 0}});
    CHECK(four.election == expected);
    for (int m = 3; m <= 9; ++m) {
        const auto inst = veto_instance(m);
        const auto& w = *inst.witness;
        CHECK(check_consistent(w, inst.election));
        CHECK(social_cost(w, 0) == m);
        for (Candidate b = 1; b < m; ++b) CHECK(social_cost(w, b) == 3 * m - 4);
        const auto s = scores(inst.election);
        CHECK(s.plurality[0] == 0);
        CHECK(s.veto[0] == 1);
        const auto g = comparison_graph(inst.election);
        for (Candidate b = 1; b < m; ++b) CHECK(g.weight(0, b) == Fraction(m - 2, m));
    }
}

TEST_CASE("decisive instance") {
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
        const auto inst = decisive_instance(alpha);
        const auto& w = *inst.witness;
        CHECK(check_consistent(w, inst.election));
        CHECK(social_cost(w, 2) == doctest::Approx(1.0));
        CHECK(social_cost(w, 1) == doctest::Approx(2.0 + alpha));
        for (Voter i = 0; i < 2; ++i)
            CHECK(w.voter_candidate(i, *inst.election.top(i)) <= alpha * w.voter_candidate(i, *inst.election.second(i)) + 1e-12);
    }
    CHECK(social_cost(*decisive_instance(1.0).witness, 1) == 3.0);
}

TEST_CASE("hidden star") {
    const auto inst = hidden_star(5, 2, 3);
    CHECK(check_consistent(*inst.witness, inst.election));
    CHECK(realized_distortion(*inst.witness, 2) == 1.0);
    for (Candidate c : {0, 1, 3, 4}) CHECK(realized_distortion(*inst.witness, c) >= kFarRatio / (5 * 1.0) - 1);
}

TEST_CASE("fewer than m-1 comparisons cannot find the hidden candidate") {
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 3 + static_cast<int>(rng.below(6));
        const Candidate chosen = static_cast<Candidate>(rng.below(m));
        const auto base = hidden_star(m, chosen);
        const int q = static_cast<int>(rng.below(m - 1));
        std::vector<std::pair<Candidate, Candidate>> queries;
        std::vector<int> lost(m, 0);
        std::vector<Candidate> answers;
        for (int t = 0; t < q; ++t) {
            const Candidate a = static_cast<Candidate>(rng.below(m));
            Candidate b = static_cast<Candidate>(rng.below(m - 1));
            if (b >= a) ++b;
            queries.emplace_back(a, b);
            answers.push_back(majority_oracle(base.election, a, b));
            lost[answers.back()] = 1;
        }
        std::vector<Candidate> undefeated;
        for (Candidate c = 0; c < m; ++c)
            if (!lost[c]) undefeated.push_back(c);
        CHECK(undefeated.size() >= 2);
        for (Candidate other : undefeated) {
            // Same answers when `other` is the hidden candidate and the old one
            // heads the tie order.
            std::vector<Candidate> order{chosen};
            for (Candidate c = 0; c < m; ++c)
                if (c != chosen && c != other) order.push_back(c);
            if (other == chosen) order.clear();
            const auto alt = hidden_star(m, other, 3, order);
            for (int t = 0; t < q; ++t)
                CHECK(majority_oracle(alt.election, queries[t].first, queries[t].second) == answers[t]);
        }
    }
}

TEST_CASE("hidden star: domination root finds the hidden candidate") {
    for (int m = 3; m <= 10; ++m)
        for (Candidate chosen = 0; chosen < m; ++chosen) {
            const auto inst = hidden_star(m, chosen);
            std::vector<Candidate> all(m);
            for (int c = 0; c < m; ++c) all[c] = c;
            const auto r = domination_root(all, [&](Candidate a, Candidate b) { return majority_oracle(inst.election, a, b); });
            CHECK(r.winner == chosen);
        }
}

TEST_CASE("sidecar round trip") {
    const auto inst = veto_instance(5);
    const auto j = sidecar(inst);
    const auto w = witness_from_json(j["witness"]);
    for (Voter i = 0; i < 5; ++i)
        for (Candidate c = 0; c < 5; ++c) CHECK(w.voter_candidate(i, c) == inst.witness->voter_candidate(i, c));
    CHECK(sidecar(dr_lower_bound(8))["schedule"].size() == 3);
    CHECK_THROWS_AS(generate("nope", {}), ConfigError);
}
