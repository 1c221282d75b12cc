#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdist/dataio.hpp"
#include "mdist/distortion.hpp"
#include "mdist/error.hpp"
#include "mdist/fraction.hpp"
#include "mdist/instances.hpp"
#include "mdist/matching.hpp"
#include "mdist/mechanisms.hpp"
#include "mdist/parallel.hpp"
#include "mdist/rng.hpp"
#include "mdist/sampling.hpp"
#include "mdist/version.hpp"

using json = nlohmann::json;
using namespace mdist;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
    // instance source
    std::string input;
    std::string sidecar;
    std::string generator;
    GeneratorParams gen;

    std::uint64_t seed = 1;
    int trials = -1;
    double epsilon = 1.0;
    double delta = 0.05;
    int k = 0;
    std::optional<double> alpha;
    std::string mechanism;
    std::string pairing;
    std::string tie = "higher";
    std::string out;
    std::string format = "csv";
    int jobs = 1;
    bool full_lp = false;
    bool no_lp = false;
    bool timing = false;
    std::int64_t sample_c = 0;
    std::string replacement = "auto";
    std::string capacities = "empirical";
    std::vector<double> grid{0.0, 0.2, 0.4, 0.6, 0.8};
    std::string transcript;

    // ingest
    std::string schema;
    std::vector<std::string> filters;
    std::vector<std::string> drop;
};

struct Instance {
    Election election;
    std::optional<MetricWitness> witness;
    std::optional<Pairing> schedule;
    std::vector<Voter> missing;
};

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

json num(double x) { return std::isfinite(x) ? json(x) : json(fmt(x)); }

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

// Rows keyed by a fixed column list; rendered as CSV with a comment header
// or as one JSON document.
class Report {
public:
    Report(std::string command, json config, std::uint64_t seed, std::vector<std::string> columns)
        : command_(std::move(command)), config_(std::move(config)), seed_(seed), columns_(std::move(columns)) {}

    void add(std::vector<json> row) { rows_.push_back(std::move(row)); }
    void summary(json s) { summary_ = std::move(s); }
    void extra(const std::string& key, json value) { extra_[key] = std::move(value); }

    std::string render(const std::string& format) const {
        std::ostringstream out;
        if (format == "json") {
            json doc;
            doc["meta"] = meta();
            doc["columns"] = columns_;
            doc["rows"] = json::array();
            for (const auto& r : rows_) {
                json obj = json::object();
                for (std::size_t j = 0; j < columns_.size(); ++j) obj[columns_[j]] = r[j];
                doc["rows"].push_back(obj);
            }
            if (!summary_.is_null()) doc["summary"] = summary_;
            for (const auto& [k, v] : extra_.items()) doc[k] = v;
            out << doc.dump(2) << '\n';
            return out.str();
        }
        out << header();
        for (std::size_t j = 0; j < columns_.size(); ++j) out << (j ? "," : "") << columns_[j];
        out << '\n';
        for (const auto& r : rows_) {
            for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << csv_cell(r[j]);
            out << '\n';
        }
        if (!summary_.is_null()) out << "# summary: " << summary_.dump() << '\n';
        return out.str();
    }

    std::string header() const {
        std::ostringstream out;
        out << "# mdist " << kVersion << '\n';
        out << "# command: " << command_ << '\n';
        out << "# config: " << config_.dump() << '\n';
        out << "# seed: " << seed_ << '\n';
        return out.str();
    }

private:
    json meta() const { return {{"version", kVersion}, {"command", command_}, {"config", config_}, {"seed", seed_}}; }

    std::string command_;
    json config_;
    std::uint64_t seed_;
    std::vector<std::string> columns_;
    std::vector<std::vector<json>> rows_;
    json summary_;
    json extra_ = json::object();
};

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + o.out + "'");
    f << text;
}

json generator_config(const Options& o) {
    if (!o.input.empty()) return {{"input", o.input}, {"sidecar", o.sidecar}};
    const auto& p = o.gen;
    return {{"generator", o.generator}, {"n", p.n},         {"m", p.m},         {"dim", p.dim},
            {"k", p.k},                 {"ell", p.ell},     {"ratio", p.ratio}, {"chosen", p.chosen},
            {"epsilon", p.epsilon},     {"alpha", p.alpha}};
}

void validate_source(const Options& o) {
    if (!o.input.empty() && !o.generator.empty()) throw ConfigError("use either --input or --generator, not both");
    if (o.jobs < 1) throw ConfigError("--jobs must be at least 1");
    if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
}

Instance from_generated(GeneratedInstance g) {
    return {std::move(g.election), std::move(g.witness), std::move(g.schedule), std::move(g.missing)};
}

Instance load_instance(const Options& o, std::uint64_t seed) {
    if (o.input.empty()) {
        auto p = o.gen;
        p.seed = seed;
        if (o.k > 0) p.k = o.k;
        if (o.alpha) p.alpha = *o.alpha;
        return from_generated(generate(o.generator.empty() ? "impartial" : o.generator, p));
    }
    std::ifstream in(o.input);
    if (!in) throw DataError("cannot open '" + o.input + "'");
    Instance inst{read_election(in), std::nullopt, std::nullopt, {}};
    if (!o.sidecar.empty()) {
        std::ifstream sf(o.sidecar);
        if (!sf) throw DataError("cannot open '" + o.sidecar + "'");
        json j;
        try {
            j = json::parse(sf);
        } catch (const json::exception& ex) {
            throw DataError("malformed sidecar: " + std::string(ex.what()));
        }
        if (j.contains("witness") && !j["witness"].is_null()) inst.witness = witness_from_json(j["witness"]);
        if (j.contains("schedule")) {
            std::vector<std::vector<std::pair<Candidate, Candidate>>> rounds;
            for (const auto& r : j["schedule"]) {
                rounds.emplace_back();
                for (const auto& p : r) rounds.back().emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
            }
            inst.schedule = Pairing::scheduled(std::move(rounds));
        }
        if (j.contains("missing")) inst.missing = j["missing"].get<std::vector<Voter>>();
        if (inst.witness && (inst.witness->voters() != inst.election.voters() ||
                             inst.witness->candidates() != inst.election.candidates()))
            throw DataError("sidecar witness does not match the election size");
    }
    return inst;
}

MinimaxOptions lp_options(const Options& o) {
    MinimaxOptions m;
    m.alpha = o.alpha;
    m.mode = o.full_lp ? LpMode::full : LpMode::pruned;
    m.jobs = o.jobs;
    return m;
}

std::vector<Candidate> all_candidates(int m) {
    std::vector<Candidate> c(m);
    for (int i = 0; i < m; ++i) c[i] = i;
    return c;
}

// Instance source flags shared by the evaluating subcommands.
void add_source(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "Election file");
    cmd->add_option("--sidecar", o.sidecar, "JSON sidecar with witness, schedule and missing voters");
    cmd->add_option("--generator", o.generator,
                    "impartial|euclidean|chain|dr-lower-bound|ktop-lower-bound|missing-tight|veto|decisive|hidden-star");
    cmd->add_option("--n", o.gen.n, "Voters")->capture_default_str();
    cmd->add_option("--m", o.gen.m, "Candidates")->capture_default_str();
    cmd->add_option("--dim", o.gen.dim, "Dimension (euclidean)")->capture_default_str();
    cmd->add_option("--ell", o.gen.ell, "Chain length")->capture_default_str();
    cmd->add_option("--ratio", o.gen.ratio, "delta/D ratio (ktop-lower-bound)")->capture_default_str();
    cmd->add_option("--chosen", o.gen.chosen, "Chosen candidate (hidden-star)")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Seed")->capture_default_str();
    cmd->add_option("--out", o.out, "Output file (default stdout)");
    cmd->add_option("--format", o.format, "csv|json")->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
    cmd->add_flag("--full-lp", o.full_lp, "Use the unpruned metric LP");
}

// ---------------------------------------------------------------- gen

int cmd_gen(Options& o) {
    if (o.generator.empty()) throw ConfigError("gen needs --generator");
    auto p = o.gen;
    p.seed = o.seed;
    const auto inst = generate(o.generator, p);
    std::ostringstream text;
    text << "# mdist " << kVersion << "\n# command: gen\n# config: " << generator_config(o).dump() << "\n# seed: " << o.seed
         << '\n';
    write_election(text, inst.election);
    if (o.out.empty()) {
        std::cout << text.str();
        return 0;
    }
    emit(o, text.str());
    const std::string side = o.sidecar.empty() ? o.out + ".json" : o.sidecar;
    std::ofstream sf(side, std::ios::binary);
    if (!sf) throw ConfigError("cannot write '" + side + "'");
    auto j = sidecar(inst);
    j["seed"] = o.seed;
    sf << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- run

struct RunResult {
    Candidate winner = 0;
    std::optional<Transcript> transcript;
    // Profile the LP evaluation uses.
    Election seen;
};

RunResult run_mechanism(const Options& o, const Instance& inst) {
    const auto& e = inst.election;
    const auto& mech = o.mechanism;
    RunResult r;
    r.seen = e;
    if (mech == "dr") {
        const TieRule tie = o.tie == "lower" ? TieRule::lower_index_wins : TieRule::higher_index_wins;
        Pairing pairing;
        if (o.pairing == "shuffled")
            pairing = Pairing::shuffled(o.seed);
        else if (o.pairing == "schedule" || (o.pairing.empty() && inst.schedule)) {
            if (!inst.schedule) throw ConfigError("--pairing schedule needs an instance with a schedule");
            pairing = *inst.schedule;
        } else if (!o.pairing.empty() && o.pairing != "input")
            throw ConfigError("--pairing must be input, shuffled or schedule");
        const auto cands = all_candidates(e.candidates());
        auto res = domination_root(cands, [&](Candidate a, Candidate b) { return majority_oracle(e, a, b, tie); }, pairing);
        r.winner = res.winner;
        r.transcript = std::move(res.transcript);
    } else if (mech == "copeland") {
        r.winner = copeland(e).winner;
    } else if (mech == "balanced") {
        if (!o.alpha) throw ConfigError("balanced needs --alpha");
        r.winner = balanced_rule(e, approximate(*o.alpha));
    } else if (mech == "ktop") {
        if (o.k < 1 || o.k > e.candidates()) throw ConfigError("ktop needs 1 <= --k <= m");
        if (e.all_total() && o.k < e.candidates()) r.seen = e.truncated(o.k);
        r.winner = ktop_rule(r.seen, o.k);
    } else if (mech == "plurality-matching") {
        r.winner = plurality_matching(e).winner;
    } else if (mech == "minimax") {
        r.winner = minimax(e, lp_options(o)).winner;
    } else if (mech == "plurality" || mech == "eurovision" || mech == "f1") {
        r.winner = positional_score(e, ScoringRule::by_name(mech)).winner;
    } else if (mech == "sampled-copeland" || mech == "sampled-pm") {
        const bool cop = mech == "sampled-copeland";
        auto plan = make_plan(o.epsilon, o.delta, e.candidates(),
                              cop ? SampleMode::copeland : SampleMode::plurality_matching, o.seed);
        if (o.sample_c > 0) plan.c = o.sample_c;
        if (o.replacement != "auto") plan.replacement = o.replacement == "with";
        plan.capacities = o.capacities == "population" ? CapacitySource::population : CapacitySource::empirical;
        auto res = cop ? sampled_copeland(e, plan) : sampled_plurality_matching(e, plan);
        r.winner = res.winner;
        r.transcript = std::move(res.transcript);
    } else {
        throw ConfigError("unknown mechanism '" + mech + "'");
    }
    return r;
}

json transcript_json(const Transcript& t) {
    json arr = json::array();
    for (const auto& ev : t.events()) {
        if (ev.kind == TranscriptEvent::Kind::compare)
            arr.push_back({{"kind", "compare"}, {"round", ev.round}, {"a", ev.a}, {"b", ev.b}, {"loser", ev.loser}});
        else
            arr.push_back({{"kind", "sample"}, {"voter", ev.voter}});
    }
    return arr;
}

json run_config(const Options& o) {
    auto c = generator_config(o);
    c["mechanism"] = o.mechanism;
    c["pairing"] = o.pairing;
    c["tie"] = o.tie;
    c["k"] = o.k;
    c["alpha"] = o.alpha ? json(*o.alpha) : json(nullptr);
    c["epsilon"] = o.epsilon;
    c["delta"] = o.delta;
    c["c"] = o.sample_c;
    c["replacement"] = o.replacement;
    c["capacities"] = o.capacities;
    c["full_lp"] = o.full_lp;
    c["no_lp"] = o.no_lp;
    return c;
}

int cmd_run(Options& o) {
    validate_source(o);
    if (o.generator == "missing-tight") o.gen.epsilon = o.epsilon;
    const auto inst = load_instance(o, o.seed);
    const auto r = run_mechanism(o, inst);
    Report rep("run", run_config(o), o.seed, {"mechanism", "winner", "queries", "realized_distortion", "lp_distortion"});
    const json queries = r.transcript ? json(r.transcript->size()) : json(nullptr);
    const json realized = inst.witness ? num(realized_distortion(*inst.witness, r.winner)) : json(nullptr);
    const json lp = o.no_lp ? json(nullptr) : num(candidate_distortion(r.seen, r.winner, lp_options(o)).first);
    rep.add({o.mechanism, r.winner, queries, realized, lp});
    if (r.transcript) {
        rep.extra("transcript", transcript_json(*r.transcript));
        if (!o.transcript.empty()) {
            std::ofstream tf(o.transcript, std::ios::binary);
            if (!tf) throw ConfigError("cannot write '" + o.transcript + "'");
            r.transcript->write_jsonl(tf);
        }
    }
    emit(o, rep.render(o.format));
    return 0;
}

// ---------------------------------------------------------------- eval

int cmd_eval(Options& o) {
    validate_source(o);
    const auto inst = load_instance(o, o.seed);
    const auto report = minimax(inst.election, lp_options(o));
    auto cfg = generator_config(o);
    cfg["alpha"] = o.alpha ? json(*o.alpha) : json(nullptr);
    cfg["full_lp"] = o.full_lp;
    Report rep("eval", cfg, o.seed, {"candidate", "distortion", "worst_opponent", "is_winner", "realized_distortion"});
    for (Candidate a = 0; a < report.candidates; ++a)
        rep.add({a, num(report.distortion[a]), report.worst_opponent[a], a == report.winner,
                 inst.witness ? num(realized_distortion(*inst.witness, a)) : json(nullptr)});
    rep.extra("report", to_json(report));
    emit(o, rep.render(o.format));
    return 0;
}

// ---------------------------------------------------------------- sweeps

std::uint64_t realization_seed(const Options& o, int r) { return o.input.empty() ? child_seed(o.seed, r) : o.seed; }

int default_trials(const Options& o, int fallback) {
    if (o.trials < 0) return o.input.empty() ? fallback : 1;
    return o.trials;
}

int cmd_sweep_k(Options& o) {
    validate_source(o);
    if (o.mechanism.empty()) o.mechanism = "minimax";
    if (o.mechanism != "minimax" && o.mechanism != "ktop") throw ConfigError("sweep-k --mechanism must be minimax or ktop");
    const int trials = default_trials(o, 5);
    auto cfg = generator_config(o);
    cfg["trials"] = trials;
    cfg["mechanism"] = o.mechanism;
    cfg["alpha"] = o.alpha ? json(*o.alpha) : json(nullptr);
    cfg["full_lp"] = o.full_lp;
    Report rep("sweep-k", cfg, o.seed,
               {"realization", "seed", "k", "winner", "distortion", "ktop_winner", "ktop_distortion"});
    for (int t = 0; t < trials; ++t) {
        const auto seed = realization_seed(o, t);
        const auto inst = load_instance(o, seed);
        if (!inst.election.all_total()) throw DataError("sweep-k needs total orders");
        const int m = inst.election.candidates();
        for (int k = 1; k <= m; ++k) {
            const auto e = k < m ? inst.election.truncated(k) : inst.election;
            const auto report = minimax(e, lp_options(o));
            json kw = nullptr, kd = nullptr;
            if (o.mechanism == "ktop") {
                const auto w = ktop_rule(e, k);
                kw = w;
                kd = num(candidate_distortion(e, w, lp_options(o)).first);
            }
            rep.add({t, seed, k, report.winner, num(report.distortion[report.winner]), kw, kd});
        }
    }
    emit(o, rep.render(o.format));
    return 0;
}

int cmd_sweep_missing(Options& o) {
    validate_source(o);
    const int trials = default_trials(o, 5);
    for (double g : o.grid)
        if (!(g >= 0.0 && g < 1.0)) throw ConfigError("--grid values must lie in [0, 1)");
    auto cfg = generator_config(o);
    cfg["trials"] = trials;
    cfg["grid"] = o.grid;
    cfg["alpha"] = o.alpha ? json(*o.alpha) : json(nullptr);
    cfg["full_lp"] = o.full_lp;
    Report rep("sweep-missing", cfg, o.seed,
               {"realization", "seed", "epsilon", "missing", "winner", "distortion", "envelope"});
    const auto envelope = [](double eps) {
        const double ell = 3.0;
        return eps >= 1.0 ? kInf : ell + eps / (1.0 - eps) * (ell + 1.0);
    };
    for (int t = 0; t < trials; ++t) {
        const auto seed = realization_seed(o, t);
        const auto inst = load_instance(o, seed);
        const int n = inst.election.voters();
        const auto evaluate = [&](const std::vector<Voter>& missing, double eps) {
            const auto report = minimax(inst.election.masked(missing), lp_options(o));
            rep.add({t, seed, num(eps), static_cast<int>(missing.size()), report.winner,
                     num(report.distortion[report.winner]), num(envelope(eps))});
        };
        if (!inst.missing.empty()) {
            // The instance fixes its own missing voters.
            evaluate(inst.missing, static_cast<double>(inst.missing.size()) / n);
            continue;
        }
        for (std::size_t g = 0; g < o.grid.size(); ++g) {
            const double eps = o.grid[g];
            const int count = std::min(n, static_cast<int>(std::ceil(eps * n - 1e-9)));
            std::vector<Voter> order(n);
            for (int i = 0; i < n; ++i) order[i] = i;
            Rng rng(child_seed(seed, g));
            rng.shuffle(std::span<Voter>(order));
            std::vector<Voter> missing(order.begin(), order.begin() + count);
            std::sort(missing.begin(), missing.end());
            evaluate(missing, eps);
        }
    }
    emit(o, rep.render(o.format));
    return 0;
}

// ---------------------------------------------------------------- sample

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
    return v[std::min(idx, v.size() - 1)];
}

int cmd_sample(Options& o) {
    validate_source(o);
    if (o.mechanism.empty()) o.mechanism = "copeland";
    if (o.mechanism != "copeland" && o.mechanism != "plurality-matching")
        throw ConfigError("sample --mechanism must be copeland or plurality-matching");
    if (o.replacement != "auto" && o.replacement != "with" && o.replacement != "without")
        throw ConfigError("--replacement must be auto, with or without");
    if (o.capacities != "empirical" && o.capacities != "population")
        throw ConfigError("--capacities must be empirical or population");
    const int trials = o.trials < 0 ? 100 : o.trials;
    const bool cop = o.mechanism == "copeland";
    const auto inst = load_instance(o, o.seed);
    const auto& e = inst.election;
    auto base = make_plan(o.epsilon, o.delta, e.candidates(), cop ? SampleMode::copeland : SampleMode::plurality_matching,
                          o.seed);
    if (o.sample_c > 0) base.c = o.sample_c;
    if (o.replacement != "auto") base.replacement = o.replacement == "with";
    base.capacities = o.capacities == "population" ? CapacitySource::population : CapacitySource::empirical;
    if (!base.replacement && base.c > e.voters())
        throw ConfigError("sample size " + std::to_string(base.c) + " exceeds the electorate without replacement");

    auto cfg = generator_config(o);
    cfg["mechanism"] = o.mechanism;
    cfg["epsilon"] = o.epsilon;
    cfg["delta"] = o.delta;
    cfg["trials"] = trials;
    cfg["c"] = base.c;
    cfg["replacement"] = base.replacement;
    cfg["capacities"] = o.capacities;
    cfg["timing"] = o.timing;
    Report rep("sample", cfg, o.seed, {"seed", "c", "winner", "realized_distortion", "phi_hat_max", "elapsed_ms"});

    struct Trial {
        std::uint64_t seed = 0;
        Candidate winner = 0;
        double phi = 0;
        double ms = 0;
    };
    std::vector<Trial> out(trials);
    parallel_for(out.size(), o.jobs, [&](std::size_t t) {
        auto plan = base;
        plan.seed = child_seed(o.seed, t);
        const auto start = std::chrono::steady_clock::now();
        const auto res = cop ? sampled_copeland(e, plan) : sampled_plurality_matching(e, plan);
        const auto stop = std::chrono::steady_clock::now();
        out[t] = {plan.seed, res.winner, res.phi_hat_max, std::chrono::duration<double, std::milli>(stop - start).count()};
    });

    // Exact ratio from the witness, else the LP value of the winner.
    std::map<Candidate, double> cache;
    const auto distortion = [&](Candidate w) {
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
        const double d = inst.witness ? realized_distortion(*inst.witness, w)
                                      : candidate_distortion(e, w, lp_options(o)).first;
        return cache[w] = d;
    };
    std::vector<double> values;
    for (const auto& t : out) {
        const double d = distortion(t.winner);
        values.push_back(d);
        rep.add({t.seed, base.c, t.winner, num(d), cop ? json(nullptr) : num(t.phi),
                 o.timing ? num(t.ms) : json(nullptr)});
    }
    if (!values.empty()) {
        const double bound = (cop ? 5.0 : 3.0) + o.epsilon;
        const auto within = std::count_if(values.begin(), values.end(), [&](double d) { return d <= bound + 1e-9; });
        rep.summary({{"trials", trials},
                     {"p50", num(quantile(values, 0.5))},
                     {"p90", num(quantile(values, 0.9))},
                     {"p95", num(quantile(values, 0.95))},
                     {"max", num(*std::max_element(values.begin(), values.end()))},
                     {"bound", num(bound)},
                     {"within_bound", within}});
    }
    emit(o, rep.render(o.format));
    return 0;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(Options& o) {
    if (o.input.empty()) throw ConfigError("ingest needs --input");
    if (o.schema.empty()) throw ConfigError("ingest needs --schema");
    std::vector<CsvFilter> filters;
    for (const auto& f : o.filters) filters.push_back(parse_filter(f));
    auto table = load_csv(o.input, schema_by_name(o.schema), filters);
    if (!o.drop.empty()) {
        // Dropped names lose their ballots; ids of the others are renumbered.
        ScoreTable kept;
        kept.kind = table.kind;
        kept.candidates = table.candidates;
        std::vector<int> remap(table.voters.size(), -1);
        for (std::size_t v = 0; v < table.voters.size(); ++v)
            if (std::find(o.drop.begin(), o.drop.end(), table.voters[v]) == o.drop.end()) {
                remap[v] = static_cast<int>(kept.voters.size());
                kept.voters.push_back(table.voters[v]);
            }
        for (const auto& en : table.entries)
            if (remap[en.voter] >= 0) kept.entries.push_back({remap[en.voter], en.candidate, en.score});
        table = std::move(kept);
    }
    const auto e = scores_to_election(table);
    json cfg = {{"input", o.input}, {"schema", o.schema}, {"filter", o.filters}, {"drop", o.drop}};
    std::ostringstream text;
    text << "# mdist " << kVersion << "\n# command: ingest\n# config: " << cfg.dump() << "\n# seed: 0\n";
    for (std::size_t c = 0; c < table.candidates.size(); ++c)
        text << "# candidate " << c << ": " << table.candidates[c] << '\n';
    for (std::size_t v = 0; v < table.voters.size(); ++v) text << "# voter " << v << ": " << table.voters[v] << '\n';
    write_election(text, e);
    emit(o, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric distortion toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "Generate an instance (election file plus JSON sidecar)");
    add_source(gen, o);
    gen->add_option("--k", o.gen.k, "k (ktop-lower-bound)")->capture_default_str();
    gen->add_option("--epsilon", o.gen.epsilon, "Missing fraction (missing-tight)")->capture_default_str();
    gen->add_option("--alpha", o.gen.alpha, "alpha (decisive)")->capture_default_str();

    auto* run = app.add_subcommand("run", "Run one mechanism");
    add_source(run, o);
    run->add_option("--mechanism", o.mechanism,
                    "dr|copeland|balanced|ktop|plurality-matching|minimax|plurality|eurovision|f1|sampled-copeland|"
                    "sampled-pm")
        ->required();
    run->add_option("--pairing", o.pairing, "input|shuffled|schedule (dr)");
    run->add_option("--tie", o.tie, "higher|lower: majority tie rule (dr)")->capture_default_str();
    run->add_option("--k", o.k, "k (ktop)");
    run->add_option("--alpha", o.alpha, "Decisiveness alpha (balanced, LP)");
    run->add_option("--epsilon", o.epsilon, "Sampling epsilon")->capture_default_str();
    run->add_option("--delta", o.delta, "Sampling delta")->capture_default_str();
    run->add_option("--c", o.sample_c, "Override the sample size");
    run->add_option("--replacement", o.replacement, "auto|with|without")->capture_default_str();
    run->add_option("--capacities", o.capacities, "empirical|population")->capture_default_str();
    run->add_option("--transcript", o.transcript, "Write the oracle transcript as JSON lines");
    run->add_flag("--no-lp", o.no_lp, "Skip the LP evaluation of the winner");

    auto* eval = app.add_subcommand("eval", "Worst-case distortion table and minimax winner");
    add_source(eval, o);
    eval->add_option("--alpha", o.alpha, "Decisiveness alpha");

    auto* sweep_k = app.add_subcommand("sweep-k", "Minimax distortion for k = 1..m");
    add_source(sweep_k, o);
    sweep_k->add_option("--trials", o.trials, "Realizations (default 5)");
    sweep_k->add_option("--mechanism", o.mechanism, "minimax|ktop");
    sweep_k->add_option("--alpha", o.alpha, "Decisiveness alpha");
    sweep_k->add_option("--k", o.gen.k, "k (ktop-lower-bound generator)")->capture_default_str();

    auto* sweep_missing = app.add_subcommand("sweep-missing", "Minimax distortion with missing voters");
    add_source(sweep_missing, o);
    sweep_missing->add_option("--trials", o.trials, "Realizations (default 5)");
    sweep_missing->add_option("--grid", o.grid, "Missing fractions")->delimiter(',')->capture_default_str();
    sweep_missing->add_option("--epsilon", o.gen.epsilon, "Missing fraction (missing-tight generator)")
        ->capture_default_str();
    sweep_missing->add_option("--alpha", o.alpha, "Decisiveness alpha");

    auto* sample = app.add_subcommand("sample", "Monte Carlo study of the sampled mechanisms");
    add_source(sample, o);
    sample->add_option("--mechanism", o.mechanism, "copeland|plurality-matching");
    sample->add_option("--trials", o.trials, "Trials (default 100)");
    sample->add_option("--epsilon", o.epsilon, "epsilon")->capture_default_str();
    sample->add_option("--delta", o.delta, "delta")->capture_default_str();
    sample->add_option("--c", o.sample_c, "Override the sample size");
    sample->add_option("--replacement", o.replacement, "auto|with|without")->capture_default_str();
    sample->add_option("--capacities", o.capacities, "empirical|population")->capture_default_str();
    sample->add_flag("--timing", o.timing, "Fill the elapsed_ms column");

    auto* ingest = app.add_subcommand("ingest", "Convert a score CSV into an election file");
    ingest->add_option("--input", o.input, "CSV file")->required();
    ingest->add_option("--schema", o.schema, "eurovision|f1|generic:voter,candidate,score")->required();
    ingest->add_option("--filter", o.filters, "Keep rows with column=value (repeatable)");
    ingest->add_option("--drop", o.drop, "Voter names whose ballots are discarded (repeatable)");
    ingest->add_option("--out", o.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config);
    }

    try {
        if (*gen) return cmd_gen(o);
        if (*run) return cmd_run(o);
        if (*eval) return cmd_eval(o);
        if (*sweep_k) return cmd_sweep_k(o);
        if (*sweep_missing) return cmd_sweep_missing(o);
        if (*sample) return cmd_sample(o);
        if (*ingest) return cmd_ingest(o);
    } catch (const Error& e) {
        std::cerr << "mdist: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "mdist: " << e.what() << '\n';
        return static_cast<int>(ExitCode::data);
    }
    return 0;
}
