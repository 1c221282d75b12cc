#include <doctest.h>

#include <cmath>

#include "mdist/distortion.hpp"
#include "mdist/error.hpp"
#include "mdist/lp.hpp"
#include "mdist/rng.hpp"

using namespace mdist;

TEST_CASE("simplex basics") {
    LinearProgram bounded;
    const int x = bounded.add_variable(1.0);
    bounded.add({{x, 1.0}}, Sense::le, 1.0);
    const auto o1 = solve_lp(bounded);
    CHECK(o1.status == LpStatus::optimal);
    CHECK(o1.value == doctest::Approx(1.0));

    LinearProgram open;
    open.add_variable(1.0);
    const auto o2 = solve_lp(open);
    CHECK(o2.status == LpStatus::unbounded);
    CHECK(std::isinf(o2.value));
    REQUIRE(o2.ray.size() == 1);
    CHECK(o2.ray[0] > 0.0);

    LinearProgram empty;
    const int y = empty.add_variable(0.0);
    empty.add({{y, 1.0}}, Sense::le, -1.0);
    CHECK(solve_lp(empty).status == LpStatus::infeasible);
}

TEST_CASE("simplex on a textbook program") {
    // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    LinearProgram lp;
    const int x = lp.add_variable(3.0), y = lp.add_variable(5.0);
    lp.add({{x, 1.0}}, Sense::le, 4.0);
    lp.add({{y, 2.0}}, Sense::le, 12.0);
    lp.add({{x, 3.0}, {y, 2.0}}, Sense::le, 18.0);
    const auto o = solve_lp(lp);
    REQUIRE(o.status == LpStatus::optimal);
    CHECK(o.value == doctest::Approx(36.0));
    CHECK(o.solution[0] == doctest::Approx(2.0));
    CHECK(o.solution[1] == doctest::Approx(6.0));

    // Equalities and >= rows need phase one.
    LinearProgram eq;
    const int a = eq.add_variable(-1.0), b = eq.add_variable(-1.0);
    eq.add({{a, 1.0}, {b, 1.0}}, Sense::eq, 3.0);
    eq.add({{a, 1.0}}, Sense::ge, 1.0);
    const auto oe = solve_lp(eq);
    REQUIRE(oe.status == LpStatus::optimal);
    CHECK(oe.value == doctest::Approx(-3.0));
}

TEST_CASE("lazy rows reach the same optimum") {
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        LinearProgram lp;
        const int vars = 6;
        for (int j = 0; j < vars; ++j) lp.add_variable(rng.uniform());
        for (int j = 0; j < vars; ++j) lp.add({{j, 1.0}}, Sense::le, 10.0);
        for (int r = 0; r < 20; ++r) {
            std::vector<LinearTerm> terms;
            for (int j = 0; j < vars; ++j) terms.push_back({j, rng.uniform() * 2.0 - 0.5});
            lp.add(std::move(terms), Sense::le, 1.0 + rng.uniform());
        }
        const auto eager = solve_lp(lp);
        LpOptions opt;
        opt.lazy_from = 0;
        opt.batch = 2;
        const auto lazy = solve_lp(lp, opt);
        REQUIRE(eager.status == LpStatus::optimal);
        REQUIRE(lazy.status == LpStatus::optimal);
        CHECK(lazy.value == doctest::Approx(eager.value).epsilon(1e-9));
        CHECK(lazy.active_rows <= eager.active_rows);
    }
}

TEST_CASE("lazy rows cut an unbounded ray") {
    LinearProgram lp;
    const int x = lp.add_variable(1.0), y = lp.add_variable(1.0);
    lp.add({{x, 1.0}, {y, -1.0}}, Sense::le, 1.0);
    lp.add({{y, 1.0}}, Sense::le, 2.0);
    LpOptions opt;
    opt.lazy_from = 0;
    const auto o = solve_lp(lp, opt);
    REQUIRE(o.status == LpStatus::optimal);
    CHECK(o.value == doctest::Approx(5.0));
}

TEST_CASE("metric LP shape") {
    const auto e = Election::from_rankings(2, {{0, 1}});
    const auto full = build_metric_lp(e, 0, 1, std::nullopt, LpMode::full);
    CHECK(full.lp.num_vars == 3);
    const auto pruned = build_metric_lp(e, 0, 1);
    CHECK(pruned.lp.num_vars == 3);
    bool ordering = false;
    for (const auto& c : pruned.lp.constraints)
        if (c.terms.size() == 2 && c.rhs == 0.0 && c.terms[0].var == pruned.vc_var(0, 0) && c.terms[0].coef == 1.0 &&
            c.terms[1].var == pruned.vc_var(0, 1) && c.terms[1].coef == -1.0)
            ordering = true;
    CHECK(ordering);

    Election blank(3);
    blank.add_pairs({});
    const auto lp = build_metric_lp(blank, 0, 1);
    for (std::size_t r = 1; r < lp.lazy_from; ++r) CHECK(lp.lp.constraints[r].terms.size() == 3);
    CHECK_THROWS_AS(build_metric_lp(blank, 0, 1, 0.5), DataError);
}

TEST_CASE("alpha zero pins the top choice") {
    const auto e = Election::from_rankings(3, {{0, 1, 2}, {2, 1, 0}});
    const auto lp = build_metric_lp(e, 1, 0, 0.0);
    const auto o = solve_metric_lp(lp);
    REQUIRE(o.status == LpStatus::optimal);
    CHECK(o.solution[lp.vc_var(lp.voter_class[0], 0)] == doctest::Approx(0.0));
    CHECK(o.solution[lp.vc_var(lp.voter_class[1], 2)] == doctest::Approx(0.0));
}

TEST_CASE("hand-solvable distortions") {
    const auto one = Election::from_rankings(2, {{0, 1}});
    CHECK(distortion_pair(one, 0, 1) == doctest::Approx(1.0));
    CHECK(std::isinf(distortion_pair(one, 1, 0)));
    CHECK(distortion_pair(one, 1, 1) == 1.0);

    const auto split = Election::from_rankings(2, {{0, 1}, {1, 0}});
    CHECK(distortion_pair(split, 0, 1) == doctest::Approx(3.0));
    CHECK(distortion_pair(split, 0, 1, std::nullopt, LpMode::full) == doctest::Approx(3.0));
    const auto r = minimax(split);
    CHECK(r.winner == 0);
    CHECK(r.distortion[0] == doctest::Approx(3.0));

    Election single(1);
    single.add_pairs({});
    const auto s = minimax(single);
    CHECK(s.winner == 0);
    CHECK(s.distortion[0] == 1.0);
}

TEST_CASE("extracted witness attains the LP value") {
    const auto split = Election::from_rankings(2, {{0, 1}, {1, 0}});
    for (auto mode : {LpMode::pruned, LpMode::full}) {
        const auto lp = build_metric_lp(split, 0, 1, std::nullopt, mode);
        const auto o = solve_metric_lp(lp);
        REQUIRE(o.status == LpStatus::optimal);
        const auto w = extract_pseudometric(lp, o);
        CHECK(w.is_pseudometric());
        CHECK(check_consistent(w, split));
        CHECK(social_cost(w, 0) / social_cost(w, 1) == doctest::Approx(3.0).epsilon(1e-9));
    }
}

TEST_CASE("report json marks infinity") {
    const auto one = Election::from_rankings(2, {{0, 1}});
    const auto j = to_json(minimax(one));
    CHECK(j["table"][1][0] == "inf");
    CHECK(j["winner"] == 0);
}
