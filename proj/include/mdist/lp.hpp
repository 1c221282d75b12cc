#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace mdist {

inline constexpr double kLpTolerance = 1e-7;

struct LinearTerm {
    int var = 0;
    double coef = 0.0;
};

enum class Sense { le, ge, eq };

struct Constraint {
    std::vector<LinearTerm> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

// maximize objective . x  subject to constraints, x >= 0.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> constraints;

    int add_variable(double cost = 0.0);
    void add(std::vector<LinearTerm> terms, Sense sense, double rhs);
};

enum class LpStatus { optimal, unbounded, infeasible, numerical_error };

std::string to_string(LpStatus s);

struct LpOutcome {
    LpStatus status = LpStatus::numerical_error;
    // +inf when unbounded, NaN when infeasible or failed.
    double value = std::numeric_limits<double>::quiet_NaN();
    // Optimal point, or the feasible base point of an improving ray.
    std::vector<double> solution;
    // Improving direction when unbounded: objective . ray > 0 and the ray
    // keeps every constraint satisfied.
    std::vector<double> ray;
    long iterations = 0;
    // Constraints actually loaded into the tableau.
    std::size_t active_rows = 0;
};

struct LpOptions {
    double tolerance = kLpTolerance;
    long max_iterations = 1'000'000;
    // Constraints from this index on are added only once the current point
    // or ray violates them (cutting-plane loop). Defaults to loading all rows.
    std::size_t lazy_from = std::numeric_limits<std::size_t>::max();
    // Upper bound on rows added per separation round (0: no bound).
    std::size_t batch = 0;
};

// Dense tableau simplex (two-phase, Dantzig pricing with a Bland fallback on
// stalling). The returned point is re-checked against every constraint;
// violations beyond tolerance are reported as numerical_error.
LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace mdist
