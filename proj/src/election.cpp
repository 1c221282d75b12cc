#include "mdist/election.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "mdist/error.hpp"
#include "mdist/kernels.hpp"

namespace mdist {

namespace {

void check_candidate(int m, Candidate c) {
    if (c < 0 || c >= m) throw DataError("candidate id " + std::to_string(c) + " out of range [0, " + std::to_string(m) + ")");
}

// Warshall closure in place; throws on a cycle.
void close_in_place(int m, std::vector<std::uint8_t>& rel) {
    const auto at = [m](int a, int b) { return static_cast<std::size_t>(a) * m + b; };
    for (int k = 0; k < m; ++k)
        for (int a = 0; a < m; ++a)
            if (rel[at(a, k)])
                for (int b = 0; b < m; ++b)
                    if (rel[at(k, b)]) rel[at(a, b)] = 1;
    for (int a = 0; a < m; ++a) {
        if (rel[at(a, a)])
            throw InconsistentPreferences("preference cycle through candidate " + std::to_string(a));
    }
}

std::vector<std::uint8_t> relation_from_ranking(int m, const std::vector<Candidate>& ranking) {
    std::vector<std::uint8_t> rel(static_cast<std::size_t>(m) * m, 0);
    std::vector<char> listed(m, 0);
    for (Candidate c : ranking) {
        check_candidate(m, c);
        if (listed[c]) throw DataError("candidate " + std::to_string(c) + " listed twice in a ranking");
        listed[c] = 1;
    }
    for (std::size_t p = 0; p < ranking.size(); ++p) {
        for (std::size_t q = p + 1; q < ranking.size(); ++q)
            rel[static_cast<std::size_t>(ranking[p]) * m + ranking[q]] = 1;
        for (Candidate c = 0; c < m; ++c)
            if (!listed[c]) rel[static_cast<std::size_t>(ranking[p]) * m + c] = 1;
    }
    return rel;
}

}  // namespace

std::vector<Pair> transitive_closure(int m, std::span<const Pair> pairs) {
    std::vector<std::uint8_t> rel(static_cast<std::size_t>(m) * m, 0);
    for (const Pair& p : pairs) {
        check_candidate(m, p.better);
        check_candidate(m, p.worse);
        if (p.better == p.worse)
            throw InconsistentPreferences("candidate " + std::to_string(p.better) + " preferred to itself");
        rel[static_cast<std::size_t>(p.better) * m + p.worse] = 1;
    }
    close_in_place(m, rel);
    std::vector<Pair> out;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (rel[static_cast<std::size_t>(a) * m + b]) out.push_back({a, b});
    return out;
}

Election Election::from_rankings(int m, const std::vector<std::vector<Candidate>>& rankings) {
    Election e(m);
    for (const auto& r : rankings) e.add_ranking(r);
    return e;
}

Election Election::from_pairs(int m, const std::vector<std::vector<Pair>>& pairs) {
    Election e(m);
    for (const auto& p : pairs) e.add_pairs(p);
    return e;
}

void Election::add_ranking(const std::vector<Candidate>& ranking) {
    push(relation_from_ranking(m_, ranking), ranking);
}

void Election::add_pairs(std::span<const Pair> pairs) {
    std::vector<std::uint8_t> rel(static_cast<std::size_t>(m_) * m_, 0);
    for (const Pair& p : transitive_closure(m_, pairs)) rel[static_cast<std::size_t>(p.better) * m_ + p.worse] = 1;
    push(std::move(rel), std::nullopt);
}

void Election::add_voter(std::span<const std::uint8_t> relation, std::optional<std::vector<Candidate>> top_list) {
    push(std::vector<std::uint8_t>(relation.begin(), relation.end()), std::move(top_list));
}

void Election::push(std::vector<std::uint8_t> rel, std::optional<std::vector<Candidate>> top) {
    const std::size_t mm = static_cast<std::size_t>(m_) * m_;
    if (rel.size() != mm) throw DataError("relation has wrong dimension");
    const auto at = [this](int a, int b) { return static_cast<std::size_t>(a) * m_ + b; };
    std::size_t count = 0;
    for (int a = 0; a < m_; ++a) {
        if (rel[at(a, a)]) throw InconsistentPreferences("relation is not irreflexive");
        for (int b = 0; b < m_; ++b) {
            if (!rel[at(a, b)]) continue;
            rel[at(a, b)] = 1;
            ++count;
            if (rel[at(b, a)]) throw InconsistentPreferences("relation is not antisymmetric");
            for (int c = 0; c < m_; ++c)
                if (rel[at(b, c)] && !rel[at(a, c)]) throw InconsistentPreferences("relation is not transitively closed");
        }
    }
    if (top && top->empty()) top.reset();
    if (top) {
        if (relation_from_ranking(m_, *top) != rel) throw DataError("top list disagrees with relation");
        if (static_cast<int>(top->size()) == m_ - 1) {
            std::vector<char> listed(m_, 0);
            for (Candidate c : *top) listed[c] = 1;
            for (Candidate c = 0; c < m_; ++c)
                if (!listed[c]) top->push_back(c);
        }
    }
    if (!top && m_ > 0 && count == static_cast<std::size_t>(m_) * (m_ - 1) / 2) {
        // Total order: record the full ranking.
        std::vector<Candidate> ranking(m_);
        std::iota(ranking.begin(), ranking.end(), 0);
        std::vector<int> above(m_, 0);
        for (int a = 0; a < m_; ++a)
            for (int b = 0; b < m_; ++b)
                if (rel[at(a, b)]) ++above[b];
        std::sort(ranking.begin(), ranking.end(), [&](Candidate x, Candidate y) { return above[x] < above[y]; });
        top = std::move(ranking);
    }
    rel_.insert(rel_.end(), rel.begin(), rel.end());
    top_.push_back(std::move(top));
    ++n_;
}

std::vector<Pair> Election::pairs(Voter i) const {
    std::vector<Pair> out;
    for (int a = 0; a < m_; ++a)
        for (int b = 0; b < m_; ++b)
            if (prefers(i, a, b)) out.push_back({a, b});
    return out;
}

std::size_t Election::pair_count(Voter i) const {
    const auto r = relation(i);
    return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

bool Election::all_total() const {
    for (Voter i = 0; i < n_; ++i)
        if (!is_total(i)) return false;
    return true;
}

std::optional<Candidate> Election::top(Voter i) const {
    for (Candidate a = 0; a < m_; ++a) {
        bool all = true;
        for (Candidate b = 0; b < m_ && all; ++b)
            if (b != a && !prefers(i, a, b)) all = false;
        if (all) return a;
    }
    return std::nullopt;
}

std::optional<Candidate> Election::second(Voter i) const {
    const auto t = top(i);
    if (!t || m_ < 2) return std::nullopt;
    for (Candidate a = 0; a < m_; ++a) {
        if (a == *t) continue;
        bool all = true;
        for (Candidate b = 0; b < m_ && all; ++b)
            if (b != a && b != *t && !prefers(i, a, b)) all = false;
        if (all) return a;
    }
    return std::nullopt;
}

std::optional<Candidate> Election::bottom(Voter i) const {
    for (Candidate a = 0; a < m_; ++a) {
        bool all = true;
        for (Candidate b = 0; b < m_ && all; ++b)
            if (b != a && !prefers(i, b, a)) all = false;
        if (all) return a;
    }
    return std::nullopt;
}

std::vector<Candidate> Election::ranked_prefix(Voter i) const {
    if (top_[i]) return *top_[i];
    std::vector<Candidate> prefix;
    std::vector<char> used(m_, 0);
    while (static_cast<int>(prefix.size()) < m_) {
        std::optional<Candidate> next;
        for (Candidate a = 0; a < m_ && !next; ++a) {
            if (used[a]) continue;
            bool all = true;
            for (Candidate b = 0; b < m_ && all; ++b)
                if (b != a && !used[b] && !prefers(i, a, b)) all = false;
            if (all) next = a;
        }
        if (!next) break;
        used[*next] = 1;
        prefix.push_back(*next);
    }
    return prefix;
}

Election Election::truncated(int k) const {
    if (k < 1 || k > m_) throw ConfigError("k must lie in [1, m]");
    Election out(m_);
    for (Voter i = 0; i < n_; ++i) {
        if (!top_[i] || static_cast<int>(top_[i]->size()) != m_)
            throw DataError("truncation requires total orders (voter " + std::to_string(i) + ")");
        out.add_ranking(std::vector<Candidate>(top_[i]->begin(), top_[i]->begin() + k));
    }
    return out;
}

Election Election::masked(std::span<const Voter> missing) const {
    std::vector<char> drop(n_, 0);
    for (Voter i : missing) {
        if (i < 0 || i >= n_) throw DataError("voter index out of range");
        drop[i] = 1;
    }
    Election out(m_);
    const std::vector<std::uint8_t> empty(static_cast<std::size_t>(m_) * m_, 0);
    for (Voter i = 0; i < n_; ++i) {
        if (drop[i])
            out.push(empty, std::nullopt);
        else
            out.push(std::vector<std::uint8_t>(relation(i).begin(), relation(i).end()), top_[i]);
    }
    return out;
}

Election Election::subset(std::span<const Voter> voters) const {
    Election out(m_);
    const std::size_t mm = static_cast<std::size_t>(m_) * m_;
    out.rel_.reserve(voters.size() * mm);
    for (Voter i : voters) {
        if (i < 0 || i >= n_) throw DataError("voter index out of range");
        out.rel_.insert(out.rel_.end(), rel_.begin() + static_cast<std::ptrdiff_t>(i * mm),
                        rel_.begin() + static_cast<std::ptrdiff_t>((i + 1) * mm));
        out.top_.push_back(top_[i]);
        ++out.n_;
    }
    return out;
}

ComparisonGraph comparison_graph(const Election& e) {
    const int m = e.candidates();
    const std::size_t mm = static_cast<std::size_t>(m) * m;
    std::vector<std::int32_t> counts(mm, 0);
    const auto& k = simd::active();
    const auto all = e.relations();
    for (Voter i = 0; i < e.voters(); ++i) k.accumulate_u8(counts.data(), all.data() + i * mm, mm);
    return {m, e.voters(), std::move(counts)};
}

Scores scores(const Election& e) {
    const int m = e.candidates();
    Scores s{std::vector<std::int64_t>(m, 0), std::vector<std::int64_t>(m, 0), {}};
    std::vector<std::int64_t> listed(m, 0);
    for (Voter i = 0; i < e.voters(); ++i) {
        if (const auto t = e.top(i)) ++s.plurality[*t];
        if (const auto b = e.bottom(i)) ++s.veto[*b];
        if (const auto& list = e.top_list(i))
            for (Candidate c : *list) ++listed[c];
    }
    const std::int64_t n = std::max(e.voters(), 1);
    for (Candidate c = 0; c < m; ++c) s.topk_coverage.emplace_back(listed[c], n);
    return s;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Candidate parse_candidate(const std::string& tok, int m, int line) {
    const std::string t = trim(tok);
    std::size_t used = 0;
    int c = -1;
    try {
        c = std::stoi(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size())
        throw DataError("line " + std::to_string(line) + ": bad candidate '" + t + "'");
    if (c < 0 || c >= m)
        throw DataError("line " + std::to_string(line) + ": candidate " + t + " out of range");
    return c;
}

}  // namespace

Election read_election(std::istream& in) {
    std::string raw;
    int line_no = 0;
    int n = -1, m = -1;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0) throw DataError("line " + std::to_string(line_no) + ": expected header 'n m'");
        std::string extra;
        if (hs >> extra) throw DataError("line " + std::to_string(line_no) + ": trailing data after header");
        break;
    }
    if (n < 0) throw DataError("missing header");
    Election e(m);
    const std::size_t mm = static_cast<std::size_t>(m) * m;
    while (e.voters() < n && std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (!line.empty() && line[0] == '#') continue;
        std::vector<std::uint8_t> rel(mm, 0);
        if (line.empty() || line == "-") {
            e.add_voter(rel);
            continue;
        }
        std::vector<std::vector<Candidate>> groups;
        std::vector<char> seen(m, 0);
        std::istringstream ls(line);
        std::string group;
        while (std::getline(ls, group, '>')) {
            std::vector<Candidate> g;
            std::istringstream gs(group);
            std::string tok;
            while (std::getline(gs, tok, '=')) {
                const Candidate c = parse_candidate(tok, m, line_no);
                if (seen[c]) throw DataError("line " + std::to_string(line_no) + ": candidate listed twice");
                seen[c] = 1;
                g.push_back(c);
            }
            if (g.empty()) throw DataError("line " + std::to_string(line_no) + ": empty group");
            groups.push_back(std::move(g));
        }
        if (!line.empty() && line.back() == '>') throw DataError("line " + std::to_string(line_no) + ": dangling '>'");
        bool singletons = true;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            singletons = singletons && groups[gi].size() == 1;
            for (Candidate x : groups[gi]) {
                for (std::size_t gj = gi + 1; gj < groups.size(); ++gj)
                    for (Candidate y : groups[gj]) rel[static_cast<std::size_t>(x) * m + y] = 1;
                for (Candidate y = 0; y < m; ++y)
                    if (!seen[y]) rel[static_cast<std::size_t>(x) * m + y] = 1;
            }
        }
        std::optional<std::vector<Candidate>> top;
        if (singletons) {
            top.emplace();
            for (const auto& g : groups) top->push_back(g[0]);
        }
        e.add_voter(rel, std::move(top));
    }
    if (e.voters() != n) throw DataError("expected " + std::to_string(n) + " voter lines, found " + std::to_string(e.voters()));
    return e;
}

void write_election(std::ostream& out, const Election& e) {
    const int m = e.candidates();
    out << e.voters() << ' ' << m << '\n';
    for (Voter i = 0; i < e.voters(); ++i) {
        if (const auto& top = e.top_list(i)) {
            for (std::size_t p = 0; p < top->size(); ++p) out << (p ? " > " : "") << (*top)[p];
            if (top->empty()) out << '-';
            out << '\n';
            continue;
        }
        if (e.pair_count(i) == 0) {
            out << "-\n";
            continue;
        }
        // Layer by longest chain above each candidate.
        std::vector<int> level(m, 0);
        for (bool changed = true; changed;) {
            changed = false;
            for (Candidate a = 0; a < m; ++a)
                for (Candidate b = 0; b < m; ++b)
                    if (e.prefers(i, a, b) && level[b] < level[a] + 1) {
                        level[b] = level[a] + 1;
                        changed = true;
                    }
        }
        for (Candidate a = 0; a < m; ++a)
            for (Candidate b = 0; b < m; ++b)
                if (a != b && e.prefers(i, a, b) != (level[a] < level[b]))
                    throw DataError("voter " + std::to_string(i) + ": relation has no layered form");
        const int depth = *std::max_element(level.begin(), level.end());
        for (int l = 0; l <= depth; ++l) {
            if (l) out << " > ";
            bool first = true;
            for (Candidate a = 0; a < m; ++a) {
                if (level[a] != l) continue;
                out << (first ? "" : "=") << a;
                first = false;
            }
        }
        out << '\n';
    }
}

}  // namespace mdist
