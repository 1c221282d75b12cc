// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Usage: acceptance <path to mdist binary> [work dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdist/distortion.hpp"
#include "mdist/error.hpp"
#include "mdist/instances.hpp"
#include "mdist/matching.hpp"
#include "mdist/mechanisms.hpp"
#include "mdist/rng.hpp"
#include "mdist/sampling.hpp"

using namespace mdist;

namespace {

// Pinned tolerances.
constexpr double kLpRel = 1e-6;
constexpr double kMissingAbs = 1e-5;
constexpr double kKtopAbs = 1e-3;
constexpr double kRatioRel = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::vector<Candidate> all_candidates(int m) {
    std::vector<Candidate> c(m);
    for (int i = 0; i < m; ++i) c[i] = i;
    return c;
}

ComparisonOracle oracle_for(const Election& e) {
    return [&e](Candidate a, Candidate b) { return majority_oracle(e, a, b); };
}

bool within_rel(double value, double bound, double rel) { return value <= bound + rel * std::max(1.0, std::abs(bound)); }

int ceil_log2(int m) {
    int t = 0;
    while ((1 << t) < m) ++t;
    return t;
}

// Seeded Euclidean corpus shared by criteria 3, 4 and 8.
std::vector<GeneratedInstance> euclidean_corpus() {
    std::vector<GeneratedInstance> out;
    Rng rng(20240601);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng.below(200));
        const int m = 1 + static_cast<int>(rng.below(16));
        const int dim = 1 + static_cast<int>(rng.below(3));
        out.push_back(euclidean(n, m, dim, rng.next()));
    }
    return out;
}

// ------------------------------------------------------------------ 1

Outcome c1() {
    Outcome o;
    int runs = 0;
    Rng rng(1);
    for (int m = 2; m <= 64; ++m) {
        const auto e = impartial_culture(9, m, rng.next()).election;
        // Explicit first round: first against last, second against second to last, ...
        std::vector<std::pair<Candidate, Candidate>> first;
        for (int i = 0; i < m / 2; ++i) first.emplace_back(i, m - 1 - i);
        for (const auto& p : {Pairing::input_order(), Pairing::shuffled(rng.next()), Pairing::scheduled({first})}) {
            const auto r = domination_root(all_candidates(m), oracle_for(e), p);
            ++runs;
            if (r.transcript.size() != static_cast<std::size_t>(m - 1) || r.transcript.compares() != r.transcript.size()) {
                o.pass = false;
                o.detail = "m=" + std::to_string(m) + " used " + std::to_string(r.transcript.size()) + " queries";
                return o;
            }
        }
    }
    o.detail = std::to_string(runs) + " runs, all m-1 queries";
    return o;
}

// ------------------------------------------------------------------ 2

Outcome c2() {
    Outcome o;
    for (int m : {2, 4, 8, 16}) {
        const auto inst = dr_lower_bound(m);
        const auto r = domination_root(all_candidates(m), oracle_for(inst.election), *inst.schedule);
        const double d = realized_distortion(*inst.witness, r.winner);
        const double want = 2.0 * ceil_log2(m) + 1.0;
        o.detail += "m=" + std::to_string(m) + ":" + std::to_string(static_cast<int>(d)) + " ";
        if (d != want) {
            o.pass = false;
            o.detail += "(expected " + std::to_string(want) + ") ";
        }
    }
    return o;
}

// ------------------------------------------------------------------ 3

Outcome c3(const std::vector<GeneratedInstance>& corpus) {
    Outcome o;
    int violations = 0, runs = 0;
    double worst = 0;
    Rng rng(3);
    for (const auto& inst : corpus) {
        const int m = inst.election.candidates();
        const double bound = 2.0 * ceil_log2(m) + 1.0;
        for (const auto& p : {Pairing::input_order(), Pairing::shuffled(rng.next())}) {
            const auto r = domination_root(all_candidates(m), oracle_for(inst.election), p);
            const double d = realized_distortion(*inst.witness, r.winner);
            ++runs;
            if (m > 1) worst = std::max(worst, d / bound);
            if (!within_rel(d, bound, kRatioRel)) ++violations;
        }
    }
    o.pass = violations == 0;
    o.detail = std::to_string(runs) + " runs, " + std::to_string(violations) + " violations, max d/bound " +
               std::to_string(worst);
    return o;
}

// ------------------------------------------------------------------ 4

Outcome c4(const std::vector<GeneratedInstance>& corpus) {
    Outcome o;
    long chains = 0;
    int violations = 0;
    for (const auto& inst : corpus) {
        const auto g = majority_digraph(comparison_graph(inst.election));
        const auto sc = social_costs(*inst.witness);
        const int m = inst.election.candidates();
        // A shortest chain gives the strongest bound between its endpoints;
        // longer chains between the same endpoints are implied.
        for (Candidate a = 0; a < m; ++a) {
            const auto dist = hop_distances(g, a);
            for (Candidate b = 0; b < m; ++b) {
                if (b == a || dist[b] < 0 || dist[b] > 4) continue;
                const int ell = dist[b] + 1;
                ++chains;
                if (!within_rel(sc[a], (2.0 * ell - 1.0) * sc[b], kRatioRel)) ++violations;
            }
        }
    }
    bool tight = true;
    for (int ell = 2; ell <= 6; ++ell) {
        const auto inst = chain(ell);
        const auto& e = inst.election;
        for (Candidate i = 1; i < ell; ++i)
            tight = tight && 2 * comparison_graph(e).count(i, i - 1) >= e.voters();
        tight = tight && social_cost(*inst.witness, ell - 1) == (2.0 * ell - 1.0) * social_cost(*inst.witness, 0);
    }
    o.pass = violations == 0 && tight;
    o.detail = std::to_string(chains) + " chain endpoints, " + std::to_string(violations) +
               " violations, equality on chain(2..6): " + (tight ? "yes" : "no");
    return o;
}

// ------------------------------------------------------------------ 5

// Partial profiles derived from a metric-induced total order stay consistent
// with that metric, so every instance carries a ground-truth witness.
std::vector<std::pair<Election, MetricWitness>> small_corpus() {
    std::vector<std::pair<Election, MetricWitness>> out;
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng.below(12));
        const int m = 2 + static_cast<int>(rng.below(3));
        auto inst = euclidean(n, m, 1 + static_cast<int>(rng.below(2)), rng.next());
        Election e = inst.election;
        switch (t % 4) {
            case 0:
                break;
            case 1:
                e = e.truncated(1 + static_cast<int>(rng.below(m)));
                break;
            case 2: {
                std::vector<Voter> missing;
                for (Voter i = 0; i < n; ++i)
                    if (rng.below(3) == 0) missing.push_back(i);
                if (static_cast<int>(missing.size()) == n) missing.pop_back();
                e = e.masked(missing);
                break;
            }
            default: {
                std::vector<std::vector<Pair>> pairs(n);
                for (Voter i = 0; i < n; ++i)
                    for (const auto& p : inst.election.pairs(i))
                        if (rng.below(2) == 0) pairs[i].push_back(p);
                e = Election::from_pairs(m, pairs);
            }
        }
        out.emplace_back(std::move(e), std::move(*inst.witness));
    }
    return out;
}

Outcome c5() {
    Outcome o;
    int pairs = 0, mismatches = 0, unsound = 0, loose = 0, inconsistent = 0, unbounded = 0, over3 = 0, totals = 0;
    for (const auto& [e, w] : small_corpus()) {
        const int m = e.candidates();
        const auto sc = social_costs(w);
        for (Candidate a = 0; a < m; ++a)
            for (Candidate b = 0; b < m; ++b) {
                if (a == b) continue;
                ++pairs;
                const auto lp = build_metric_lp(e, a, b);
                const auto res = solve_metric_lp(lp);
                const double full = distortion_pair(e, a, b, std::nullopt, LpMode::full);
                if (res.status == LpStatus::unbounded) {
                    ++unbounded;
                    if (!std::isinf(full)) ++mismatches;
                    continue;
                }
                if (res.status != LpStatus::optimal) {
                    ++mismatches;
                    continue;
                }
                if (std::abs(res.value - full) > kLpRel * std::max(1.0, full)) ++mismatches;
                if (sc[b] > 0 && !within_rel(sc[a] / sc[b], res.value, kLpRel)) ++unsound;
                const auto tight = extract_pseudometric(lp, res);
                if (!check_consistent(tight, e)) ++inconsistent;
                const double sb = social_cost(tight, b);
                if (std::abs(social_cost(tight, a) / sb - res.value) > kLpRel * std::max(1.0, res.value)) ++loose;
            }
        if (e.all_total()) {
            ++totals;
            const auto r = minimax(e);
            if (!within_rel(r.distortion[r.winner], 3.0, kLpRel)) ++over3;
        }
    }
    o.pass = mismatches == 0 && unsound == 0 && loose == 0 && inconsistent == 0 && over3 == 0;
    o.detail = std::to_string(pairs) + " pairs (" + std::to_string(unbounded) + " unbounded), pruned/full mismatches " +
               std::to_string(mismatches) + ", unsound " + std::to_string(unsound) + ", not tight " +
               std::to_string(loose) + ", inconsistent witnesses " + std::to_string(inconsistent) + ", D>3 on " +
               std::to_string(over3) + "/" + std::to_string(totals) + " total profiles";
    return o;
}

// ------------------------------------------------------------------ 6

Outcome c6() {
    Outcome o;
    for (double eps : {0.2, 0.4, 0.6}) {
        const auto inst = missing_voters_tight(eps);
        const double d = candidate_distortion(inst.election, 0).first;
        const double want = 3.0 + 4.0 * eps / (1.0 - eps);
        char buf[96];
        std::snprintf(buf, sizeof buf, "eps=%.1f: %.7f vs %.7f  ", eps, d, want);
        o.detail += buf;
        if (std::abs(d - want) > kMissingAbs) o.pass = false;
    }
    return o;
}

// ------------------------------------------------------------------ 7

Outcome c7() {
    Outcome o;
    int kings = 0, lp_checks = 0, violations = 0, missing_king = 0;
    double worst = 0;
    for (int m : {4, 6, 8, 10}) {
        for (int t = 0; t < 10; ++t) {
            const auto full = impartial_culture(50, m, child_seed(m, t)).election;
            for (int k = 1; k <= m; ++k) {
                const auto e = k < m ? full.truncated(k) : full;
                Candidate w;
                try {
                    w = ktop_rule(e, k);
                } catch (const TheoremViolation&) {
                    ++missing_king;
                    continue;
                }
                ++kings;
                // The LP part runs on the first five realizations of each m.
                if (t >= 5) continue;
                const double d = candidate_distortion(e, w).first;
                const double bound = 6.0 * m / k + 1.0;
                ++lp_checks;
                worst = std::max(worst, d / bound);
                if (!within_rel(d, bound, kLpRel)) ++violations;
            }
        }
    }
    int lower_bound_bad = 0;
    std::string cases;
    for (const auto& [m, k] : std::vector<std::pair<int, int>>{{5, 2}, {7, 3}, {7, 2}, {9, 4}, {10, 3}, {13, 3}}) {
        const auto inst = ktop_lower_bound(m, k, 1e-6);
        const double want = inst.expected["ratio_first_x"].get<double>();
        const Candidate w = ktop_rule(inst.election, k);
        const double d = realized_distortion(*inst.witness, w);
        const double lp = candidate_distortion(inst.election, w).first;
        if (std::abs(d - want) > kKtopAbs || !within_rel(d, lp, kLpRel)) ++lower_bound_bad;
        char buf[64];
        std::snprintf(buf, sizeof buf, "(%d,%d):%.4f ", m, k, d);
        cases += buf;
    }
    o.pass = missing_king == 0 && violations == 0 && lower_bound_bad == 0;
    o.detail = std::to_string(kings) + " kings found, " + std::to_string(missing_king) + " missing, " +
               std::to_string(lp_checks) + " LP checks, " + std::to_string(violations) +
               " over 6m/k+1 (max d/bound " + std::to_string(worst) + "); lower-bound instances " + cases;
    return o;
}

// ------------------------------------------------------------------ 8

std::int64_t brute_matching(const DominationGraph& g) {
    std::vector<std::int64_t> left = g.capacity;
    std::function<std::int64_t(int)> go = [&](int i) -> std::int64_t {
        if (i == g.voters) return 0;
        std::int64_t best = go(i + 1);
        for (Candidate k = 0; k < g.candidates; ++k)
            if (g.edge(i, k) && left[k] > 0) {
                --left[k];
                best = std::max(best, 1 + go(i + 1));
                ++left[k];
            }
        return best;
    };
    return go(0);
}

Outcome c8(const std::vector<GeneratedInstance>& corpus) {
    Outcome o;
    int phi_bad = 0, lp_checks = 0, over3 = 0, total = 0;
    std::vector<Election> profiles;
    for (const auto& inst : corpus) profiles.push_back(inst.election);
    for (const auto& [e, w] : small_corpus())
        if (e.all_total()) profiles.push_back(e);
    Rng rng(8);
    for (int t = 0; t < 40; ++t)
        profiles.push_back(impartial_culture(1 + static_cast<int>(rng.below(30)), 2 + static_cast<int>(rng.below(5)),
                                             rng.next())
                               .election);
    for (const auto& e : profiles) {
        ++total;
        const auto r = plurality_matching(e);
        if (r.phi[r.winner] != Fraction(1)) ++phi_bad;
        // LP evaluation on the profiles small enough to solve quickly.
        if (e.voters() <= 30 && e.candidates() <= 6) {
            ++lp_checks;
            if (!within_rel(candidate_distortion(e, r.winner).first, 3.0, kLpRel)) ++over3;
        }
    }

    const auto veto = veto_instance(4);
    const auto s = scores(veto.election);
    const auto pm = plurality_matching(veto.election);
    bool veto_ok = s.plurality[0] < s.veto[0] && pm.winner != 0;
    const double sa = social_cost(*veto.witness, 0);
    for (Candidate b = 1; b < 4; ++b) veto_ok = veto_ok && social_cost(*veto.witness, b) == 2.0 * sa;
    veto_ok = veto_ok && check_consistent(*veto.witness, veto.election);

    int match_checks = 0, match_bad = 0;
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const int m = 2 + static_cast<int>(rng.below(4));
        auto e = impartial_culture(n, m, rng.next()).election;
        if (t % 2) e = e.truncated(1 + static_cast<int>(rng.below(m)));
        std::vector<std::int64_t> cap(m);
        for (auto& c : cap) c = static_cast<std::int64_t>(rng.below(4));
        for (Candidate a = 0; a < m; ++a) {
            const auto g = t % 3 ? domination_graph(e, a, cap) : domination_graph(e, a);
            ++match_checks;
            if (max_matching(g).size != brute_matching(g)) ++match_bad;
        }
    }
    o.pass = phi_bad == 0 && over3 == 0 && veto_ok && match_bad == 0;
    o.detail = std::to_string(total) + " profiles, max phi != 1 on " + std::to_string(phi_bad) + ", D>3 on " +
               std::to_string(over3) + "/" + std::to_string(lp_checks) + "; veto(4) " + (veto_ok ? "ok" : "FAILED") +
               "; matchings " + std::to_string(match_checks - match_bad) + "/" + std::to_string(match_checks) +
               " equal to exhaustive";
    return o;
}

// ------------------------------------------------------------------ 9

Outcome c9() {
    Outcome o;
    const double eps = 1.0, delta = 0.05;
    int cop_ok = 0, pm_ok = 0, phi_ok = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const int m = 2 + t % 5;
        const auto inst = euclidean(5000, m, 2, child_seed(9, t));
        const auto& e = inst.election;
        const auto cop = sampled_copeland(e, eps, delta, child_seed(90, t));
        if (realized_distortion(*inst.witness, cop.winner) <= 5.0 + eps) ++cop_ok;

        const auto plan = make_plan(eps, delta, m, SampleMode::plurality_matching, child_seed(91, t));
        const auto pm = sampled_plurality_matching(e, plan);
        if (realized_distortion(*inst.witness, pm.winner) <= 3.0 + eps) ++pm_ok;

        const auto truth = plurality_matching(e);
        bool close = true;
        for (Candidate j = 0; j < m; ++j) {
            const double phi = truth.phi[j].to_double(), hat = pm.phi_hat[j].to_double();
            close = close && std::abs(hat - phi) <= eps * phi + static_cast<double>(m) / plan.c + 1e-12;
        }
        phi_ok += close;
    }
    o.pass = cop_ok >= 95 && pm_ok >= 95 && phi_ok >= 95;
    o.detail = "copeland within 5+eps " + std::to_string(cop_ok) + "/100, plurality matching within 3+eps " +
               std::to_string(pm_ok) + "/100, phi-hat bound " + std::to_string(phi_ok) + "/100";
    return o;
}

// ------------------------------------------------------------------ 10

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome c10(const std::string& cli, const std::filesystem::path& dir) {
    Outcome o;
    if (cli.empty()) {
        o.pass = false;
        o.detail = "no CLI path given";
        return o;
    }
    std::filesystem::create_directories(dir);
    const std::vector<std::string> commands = {
        "sample --generator euclidean --n 400 --m 5 --trials 20 --seed 7 --jobs 1",
        "sample --generator euclidean --n 400 --m 5 --trials 20 --seed 7 --jobs 1 --mechanism plurality-matching "
        "--epsilon 2 --delta 0.1",
        "sample --generator impartial --n 40 --m 4 --trials 5 --seed 3 --jobs 1",
        "sweep-k --generator impartial --n 12 --m 4 --trials 2 --seed 11 --jobs 1 --mechanism ktop",
        "sweep-missing --generator impartial --n 10 --m 3 --trials 2 --seed 5 --jobs 1",
        "sweep-missing --generator missing-tight --epsilon 0.4 --trials 1 --jobs 1",
        "eval --generator veto --m 5 --jobs 1",
        "run --generator dr-lower-bound --m 16 --mechanism dr --jobs 1",
    };
    int identical = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const auto path = dir / ("out_" + std::to_string(c) + "_" + std::to_string(rep) + ".csv");
            const std::string cmd = "\"" + cli + "\" " + commands[c] + " --out \"" + path.string() + "\"";
            if (std::system(cmd.c_str()) != 0) {
                o.pass = false;
                o.detail += "command failed: " + commands[c] + "; ";
            }
            outputs[rep] = slurp(path);
        }
        if (!outputs[0].empty() && outputs[0] == outputs[1])
            ++identical;
        else
            o.pass = false;
    }
    o.detail += std::to_string(identical) + "/" + std::to_string(commands.size()) + " CSV outputs byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::filesystem::path dir =
        argc > 2 ? std::filesystem::path(argv[2]) : std::filesystem::temp_directory_path() / "mdist_acceptance";

    struct Criterion {
        int id;
        std::string name;
        double limit_s;
        std::function<Outcome()> run;
    };
    std::vector<GeneratedInstance> corpus;
    const auto corpus_ref = [&]() -> const std::vector<GeneratedInstance>& {
        if (corpus.empty()) corpus = euclidean_corpus();
        return corpus;
    };
    const std::vector<Criterion> criteria = {
        {1, "DR query count", 1, c1},
        {2, "DR lower bound", 1, c2},
        {3, "DR upper bound", 30, [&] { return c3(corpus_ref()); }},
        {4, "majority chain bound", 60, [&] { return c4(corpus_ref()); }},
        {5, "minimax LP correctness", 300, c5},
        {6, "missing-voters tightness", 10, c6},
        {7, "k-top mechanism", 600, c7},
        {8, "plurality matching", 300, [&] { return c8(corpus_ref()); }},
        {9, "sampling", 600, c9},
        {10, "reproducibility", 600, [&] { return c10(cli, dir); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = out.pass && in_time;
        failed += !pass;
        std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.limit_s, in_time ? "" : ", too slow");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
