#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mdist/election.hpp"

namespace mdist {

// Scores given by voters to candidates. Names are mapped to ids in order of
// first appearance.
struct ScoreTable {
    enum class Kind {
        points,  // larger is better
        rank,    // smaller is better (finishing positions)
    };
    struct Entry {
        int voter = 0;
        int candidate = 0;
        std::int64_t score = 0;
    };
    Kind kind = Kind::points;
    std::vector<std::string> voters;
    std::vector<std::string> candidates;
    std::vector<Entry> entries;
};

struct CsvSchema {
    std::string voter_column;
    std::string candidate_column;
    std::string score_column;
    ScoreTable::Kind kind = ScoreTable::Kind::points;
    // Score cells meaning "not scored" (the pair is still registered).
    std::vector<std::string> unscored_tokens;
    // Treat a score of 0 as "not scored" (points tables listing every pair).
    bool zero_is_unscored = false;
};

// eurovision: "From country" / "To country" / "Points", zero points unscored.
// f1: "raceId" / "driverId" / "position" (rank), "\N" unscored.
// generic:VOTER,CANDIDATE,SCORE: points in the named columns.
CsvSchema schema_by_name(const std::string& text);

// Keeps only rows whose `column` equals `value`.
struct CsvFilter {
    std::string column;
    std::string value;
};
// Parses "column=value".
CsvFilter parse_filter(const std::string& text);

// RFC 4180 reader: quoted fields, doubled quotes, CRLF line ends.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

ScoreTable load_csv(std::istream& in, const CsvSchema& schema, const std::vector<CsvFilter>& filters = {});
ScoreTable load_csv(const std::string& path, const CsvSchema& schema, const std::vector<CsvFilter>& filters = {});

// Scored candidates in score order, all above the unscored ones, which stay
// mutually incomparable. Tied scores within a voter are an error.
Election scores_to_election(const ScoreTable& table);

struct ScoringRule {
    std::string name;
    // Points by rank position; nonincreasing.
    std::vector<std::int64_t> weights;

    static ScoringRule eurovision();
    static ScoringRule formula1();
    static ScoringRule plurality();
    static ScoringRule by_name(const std::string& name);
};

struct PositionalResult {
    std::vector<std::int64_t> totals;
    Candidate winner = 0;
};

// Totals over each voter's ranked prefix; winner has the highest total,
// lowest index on ties.
PositionalResult positional_score(const Election& e, const ScoringRule& rule);

}  // namespace mdist
