#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mdist/fraction.hpp"

namespace mdist {

using Voter = int;
using Candidate = int;

// Ordered pair (better, worse).
struct Pair {
    Candidate better = 0;
    Candidate worse = 0;
    friend constexpr auto operator<=>(const Pair&, const Pair&) = default;
};

// Smallest transitively closed superset of `pairs` over candidates [0, m).
// Throws InconsistentPreferences when the closure is not antisymmetric.
std::vector<Pair> transitive_closure(int m, std::span<const Pair> pairs);

// An election over n voters and m candidates. Each voter carries a strict
// partial order stored as a closed m x m indicator matrix, plus an optional
// top list: the voter's k highest candidates in order, with every listed
// candidate above every unlisted one and nothing known among the unlisted.
//
// Total orders always carry their full ranking as the top list, so two
// elections compare equal exactly when relations and top lists agree.
class Election {
public:
    explicit Election(int m = 0) : m_(m) {}

    // One (possibly truncated) ranking per voter, k-top semantics.
    static Election from_rankings(int m, const std::vector<std::vector<Candidate>>& rankings);
    // Arbitrary elicited pairs per voter; closed here.
    static Election from_pairs(int m, const std::vector<std::vector<Pair>>& pairs);

    int voters() const { return n_; }
    int candidates() const { return m_; }

    bool prefers(Voter i, Candidate a, Candidate b) const {
        return rel_[(static_cast<std::size_t>(i) * m_ + a) * m_ + b] != 0;
    }
    // Row-major m x m indicator of voter i.
    std::span<const std::uint8_t> relation(Voter i) const {
        return {rel_.data() + static_cast<std::size_t>(i) * m_ * m_,
                static_cast<std::size_t>(m_) * m_};
    }
    // All voters back to back; used by counting kernels.
    std::span<const std::uint8_t> relations() const { return rel_; }

    const std::optional<std::vector<Candidate>>& top_list(Voter i) const { return top_[i]; }
    std::vector<Pair> pairs(Voter i) const;
    std::size_t pair_count(Voter i) const;

    // Candidate above all others in voter i's relation, if any.
    std::optional<Candidate> top(Voter i) const;
    // Candidate above all others except top(i).
    std::optional<Candidate> second(Voter i) const;
    // Candidate below all others.
    std::optional<Candidate> bottom(Voter i) const;
    // Longest prefix c1, c2, ... where each c_j is above every candidate not yet listed.
    std::vector<Candidate> ranked_prefix(Voter i) const;

    bool is_total(Voter i) const { return pair_count(i) == static_cast<std::size_t>(m_) * (m_ - 1) / 2; }
    bool all_total() const;

    // Appends a voter from a closed relation (validated) and optional top list.
    void add_voter(std::span<const std::uint8_t> relation,
                   std::optional<std::vector<Candidate>> top_list = std::nullopt);
    void add_ranking(const std::vector<Candidate>& ranking);
    void add_pairs(std::span<const Pair> pairs);

    // k-top truncation of an all-total election.
    Election truncated(int k) const;
    // Same electorate with the listed voters' preferences erased.
    Election masked(std::span<const Voter> missing) const;
    // Sub-electorate; indices may repeat.
    Election subset(std::span<const Voter> voters) const;

    friend bool operator==(const Election&, const Election&) = default;

private:
    void push(std::vector<std::uint8_t> rel, std::optional<std::vector<Candidate>> top);

    int m_ = 0;
    int n_ = 0;
    std::vector<std::uint8_t> rel_;
    std::vector<std::optional<std::vector<Candidate>>> top_;
};

// Fraction of voters that certainly prefer a to b: w(a,b) = count(a,b) / n.
class ComparisonGraph {
public:
    ComparisonGraph() = default;
    ComparisonGraph(int m, int n, std::vector<std::int32_t> counts)
        : m_(m), n_(n), counts_(std::move(counts)) {}

    int candidates() const { return m_; }
    int voters() const { return n_; }
    std::int32_t count(Candidate a, Candidate b) const { return counts_[static_cast<std::size_t>(a) * m_ + b]; }
    Fraction weight(Candidate a, Candidate b) const { return {count(a, b), n_}; }
    // count(a,b) + count(b,a) as a fraction of n.
    Fraction coverage(Candidate a, Candidate b) const { return {count(a, b) + count(b, a), n_}; }

    friend bool operator==(const ComparisonGraph&, const ComparisonGraph&) = default;

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<std::int32_t> counts_;
};

ComparisonGraph comparison_graph(const Election& e);

struct Scores {
    // First-place counts over voters with a unique top; others contribute nothing.
    std::vector<std::int64_t> plurality;
    // Last-place counts over voters with a unique bottom.
    std::vector<std::int64_t> veto;
    // Fraction of voters whose top list contains the candidate.
    std::vector<Fraction> topk_coverage;
};

Scores scores(const Election& e);

// Line-based election format:
//   n m
//   one line per voter: groups separated by '>', ties inside a group by '=',
//   '-' (or an empty line) for a voter with no information.
// Omitted candidates sit below every listed one and are mutually unranked.
// Lines starting with '#' are comments.
Election read_election(std::istream& in);
void write_election(std::ostream& out, const Election& e);

}  // namespace mdist
