#include "mdist/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>

#include "mdist/error.hpp"

namespace mdist {

CsvSchema schema_by_name(const std::string& text) {
    if (text == "eurovision") return {"From country", "To country", "Points", ScoreTable::Kind::points, {""}, true};
    if (text == "f1") return {"raceId", "driverId", "position", ScoreTable::Kind::rank, {"\\N", ""}, false};
    const std::string prefix = "generic:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<std::string> cols;
        std::string rest = text.substr(prefix.size());
        for (std::size_t start = 0;;) {
            const auto comma = rest.find(',', start);
            cols.push_back(rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cols.size() != 3 || std::any_of(cols.begin(), cols.end(), [](const auto& c) { return c.empty(); }))
            throw ConfigError("generic schema needs three column names: generic:voter,candidate,score");
        return {cols[0], cols[1], cols[2], ScoreTable::Kind::points, {""}, false};
    }
    throw ConfigError("unknown schema '" + text + "'");
}

CsvFilter parse_filter(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("filter must look like column=value");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    char ch;
    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    const auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        any = true;
        if (ch == '"' && field.empty()) {
            quoted = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\n') {
            end_row();
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get(ch);
            end_row();
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) throw DataError("unterminated quoted CSV field");
    if (any || !field.empty() || !row.empty()) end_row();
    // Drop blank lines.
    rows.erase(std::remove_if(rows.begin(), rows.end(), [](const auto& r) { return r.size() == 1 && r[0].empty(); }),
               rows.end());
    return rows;
}

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

ScoreTable load_csv(std::istream& in, const CsvSchema& schema, const std::vector<CsvFilter>& filters) {
    const auto rows = read_csv(in);
    if (rows.empty()) throw DataError("CSV file is empty");
    const auto& header = rows.front();
    const auto column = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (trimmed(header[j]) == name) return j;
        throw DataError("CSV has no column '" + name + "'");
    };
    const std::size_t vc = column(schema.voter_column), cc = column(schema.candidate_column),
                      sc = column(schema.score_column);
    std::vector<std::pair<std::size_t, std::string>> keep;
    for (const auto& f : filters) keep.emplace_back(column(f.column), f.value);

    ScoreTable t;
    t.kind = schema.kind;
    std::map<std::string, int> voter_id, cand_id;
    std::set<std::pair<int, int>> seen;
    const auto id_of = [](std::map<std::string, int>& ids, std::vector<std::string>& names, const std::string& name) {
        const auto [it, fresh] = ids.try_emplace(name, static_cast<int>(names.size()));
        if (fresh) names.push_back(name);
        return it->second;
    };
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = "CSV row " + std::to_string(r + 1);
        if (row.size() != header.size())
            throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(row.size()));
        if (!std::all_of(keep.begin(), keep.end(), [&](const auto& k) { return trimmed(row[k.first]) == k.second; }))
            continue;
        const std::string voter = trimmed(row[vc]), cand = trimmed(row[cc]), score = trimmed(row[sc]);
        if (voter.empty() || cand.empty()) throw DataError(where + ": empty voter or candidate");
        const int v = id_of(voter_id, t.voters, voter);
        const int c = id_of(cand_id, t.candidates, cand);
        if (!seen.emplace(v, c).second)
            throw DataError(where + ": duplicate row for voter '" + voter + "' and candidate '" + cand + "'");
        if (std::find(schema.unscored_tokens.begin(), schema.unscored_tokens.end(), score) !=
            schema.unscored_tokens.end())
            continue;
        std::int64_t value = 0;
        const auto [end, ec] = std::from_chars(score.data(), score.data() + score.size(), value);
        if (ec != std::errc() || end != score.data() + score.size())
            throw DataError(where + ": score '" + score + "' is not an integer");
        if (value < 0) throw DataError(where + ": negative score");
        if (value == 0 && schema.zero_is_unscored) continue;
        t.entries.push_back({v, c, value});
    }
    return t;
}

ScoreTable load_csv(const std::string& path, const CsvSchema& schema, const std::vector<CsvFilter>& filters) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_csv(in, schema, filters);
}

Election scores_to_election(const ScoreTable& table) {
    const int n = static_cast<int>(table.voters.size());
    const int m = static_cast<int>(table.candidates.size());
    std::vector<std::vector<ScoreTable::Entry>> by_voter(n);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : table.entries) {
        if (e.voter < 0 || e.voter >= n || e.candidate < 0 || e.candidate >= m) throw DataError("score entry out of range");
        if (!seen.emplace(e.voter, e.candidate).second)
            throw DataError("duplicate score for voter '" + table.voters[e.voter] + "'");
        by_voter[e.voter].push_back(e);
    }
    const bool higher_first = table.kind == ScoreTable::Kind::points;
    std::vector<std::vector<Candidate>> rankings(n);
    for (int v = 0; v < n; ++v) {
        auto& list = by_voter[v];
        std::stable_sort(list.begin(), list.end(), [&](const auto& x, const auto& y) {
            return higher_first ? x.score > y.score : x.score < y.score;
        });
        for (std::size_t p = 1; p < list.size(); ++p)
            if (list[p].score == list[p - 1].score)
                throw DataError("voter '" + table.voters[v] + "' gives the same score to two candidates");
        for (const auto& e : list) rankings[v].push_back(e.candidate);
    }
    return Election::from_rankings(m, rankings);
}

ScoringRule ScoringRule::eurovision() { return {"eurovision", {12, 10, 8, 7, 6, 5, 4, 3, 2, 1}}; }
ScoringRule ScoringRule::formula1() { return {"f1", {25, 18, 15, 12, 10, 8, 6, 4, 2, 1}}; }
ScoringRule ScoringRule::plurality() { return {"plurality", {1}}; }

ScoringRule ScoringRule::by_name(const std::string& name) {
    if (name == "eurovision") return eurovision();
    if (name == "f1") return formula1();
    if (name == "plurality") return plurality();
    throw ConfigError("unknown scoring rule '" + name + "'");
}

PositionalResult positional_score(const Election& e, const ScoringRule& rule) {
    for (std::size_t p = 1; p < rule.weights.size(); ++p)
        if (rule.weights[p] > rule.weights[p - 1]) throw ConfigError("scoring weights must be nonincreasing");
    PositionalResult out;
    out.totals.assign(e.candidates(), 0);
    for (Voter i = 0; i < e.voters(); ++i) {
        const auto prefix = e.ranked_prefix(i);
        for (std::size_t p = 0; p < prefix.size() && p < rule.weights.size(); ++p) out.totals[prefix[p]] += rule.weights[p];
    }
    for (Candidate c = 1; c < e.candidates(); ++c)
        if (out.totals[c] > out.totals[out.winner]) out.winner = c;
    return out;
}

}  // namespace mdist
