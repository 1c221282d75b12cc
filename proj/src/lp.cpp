#include "mdist/lp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <span>

#include "mdist/error.hpp"
#include "mdist/kernels.hpp"

namespace mdist {

int LinearProgram::add_variable(double cost) {
    objective.push_back(cost);
    return num_vars++;
}

void LinearProgram::add(std::vector<LinearTerm> terms, Sense sense, double rhs) {
    for (const auto& t : terms)
        if (t.var < 0 || t.var >= num_vars) throw SolverError("constraint references an undeclared variable");
    constraints.push_back({std::move(terms), sense, rhs});
}

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::numerical_error: return "numerical_error";
    }
    return "unknown";
}

namespace {

constexpr double kEps = 1e-9;
constexpr int kStallLimit = 50;

enum class Result { optimal, unbounded, limit };

// Row i of the tableau states  B[i] = rhs_i - sum_j D[i][j] * N[j].
// Column n holds the phase-one artificial variable (id -1); column n + 1 the
// right-hand side. Slack variables get ids n, n + 1, ... in row order.
class Tableau {
public:
    Tableau(int n, std::span<const double> cost, const simd::KernelTable& k)
        : n_(n), stride_(static_cast<std::size_t>(n) + 2), k_(k), N_(n + 1), obj_(stride_, 0.0), aux_(stride_, 0.0) {
        std::iota(N_.begin(), N_.begin() + n, 0);
        N_[n] = -1;
        for (int j = 0; j < n; ++j) obj_[j] = -cost[j];
        aux_[n] = 1.0;
    }

    std::size_t rows() const { return B_.size(); }
    long iterations() const { return iterations_; }

    // Appends  a . x <= beta, rewritten in the current nonbasic variables.
    void add_rows(const std::vector<std::pair<std::vector<LinearTerm>, double>>& rows) {
        std::vector<int> col(n_ + 1, -1), row(n_ + 1, -1);  // index 0 is the artificial
        for (std::size_t j = 0; j < N_.size(); ++j)
            if (N_[j] < n_) col[N_[j] + 1] = static_cast<int>(j);
        for (std::size_t i = 0; i < B_.size(); ++i)
            if (B_[i] < n_) row[B_[i] + 1] = static_cast<int>(i);
        std::vector<double> fresh(stride_);
        for (const auto& [terms, beta] : rows) {
            std::fill(fresh.begin(), fresh.end(), 0.0);
            fresh[stride_ - 1] = beta;
            const auto place = [&](int id, double coef) {
                if (col[id + 1] >= 0)
                    fresh[col[id + 1]] += coef;
                else
                    k_.sub_scaled(fresh.data(), at(row[id + 1]), coef, stride_);
            };
            for (const auto& t : terms) place(t.var, t.coef);
            place(-1, -1.0);
            const std::size_t old = D_.size();
            D_.resize(old + stride_);
            std::copy(fresh.begin(), fresh.end(), D_.begin() + old);
            B_.push_back(n_ + static_cast<int>(B_.size()));
        }
    }

    // Phase one from the initial slack basis, then phase two. Only valid
    // before any pivot has been made.
    Result run(long max_iterations, bool& infeasible) {
        infeasible = false;
        std::size_t r = 0;
        for (std::size_t i = 1; i < rows(); ++i)
            if (rhs(i) < rhs(r)) r = i;
        if (rows() > 0 && rhs(r) < -kEps) {
            pivot(r, static_cast<std::size_t>(n_));
            const Result p1 = simplex(2, max_iterations);
            if (p1 == Result::limit) return p1;
            if (aux_[stride_ - 1] < -kEps * std::max(1.0, max_rhs())) {
                infeasible = true;
                return Result::optimal;
            }
            for (std::size_t i = 0; i < rows(); ++i) {
                if (B_[i] != -1) continue;
                const double* a = at(i);
                std::size_t s = N_.size();
                for (std::size_t j = 0; j < N_.size(); ++j)
                    if (std::abs(a[j]) > kEps && (s == N_.size() || std::abs(a[j]) > std::abs(a[s]))) s = j;
                if (s < N_.size()) pivot(i, s);
            }
        }
        return simplex(1, max_iterations);
    }

    // Dual simplex from a dual-feasible basis (after rows were appended to an
    // optimal tableau), then primal clean-up.
    Result reoptimize(long max_iterations, bool& infeasible) {
        infeasible = false;
        int stalled = 0;
        for (;;) {
            if (iterations_ >= max_iterations) return Result::limit;
            const bool bland = stalled > kStallLimit;
            std::size_t r = rows();
            for (std::size_t i = 0; i < rows(); ++i) {
                if (rhs(i) >= -kEps) continue;
                if (r == rows() || (bland ? B_[i] < B_[r] : rhs(i) < rhs(r) || (rhs(i) == rhs(r) && B_[i] < B_[r])))
                    r = i;
            }
            if (r == rows()) break;
            const double* a = at(r);
            std::size_t s = N_.size();
            double best = 0.0;
            for (std::size_t j = 0; j < N_.size(); ++j) {
                if (N_[j] == -1 || a[j] >= -kEps) continue;
                const double ratio = std::max(0.0, obj_[j]) / -a[j];
                if (s == N_.size() || ratio < best || (ratio == best && N_[j] < N_[s])) {
                    s = j;
                    best = ratio;
                }
            }
            if (s == N_.size()) {
                infeasible = true;
                return Result::optimal;
            }
            stalled = best <= kEps ? stalled + 1 : 0;
            pivot(r, s);
        }
        return simplex(1, max_iterations);
    }

    std::vector<double> point() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < rows(); ++i)
            if (B_[i] >= 0 && B_[i] < n_) x[B_[i]] = rhs(i);
        return x;
    }

    std::vector<double> ray() const {
        std::vector<double> d(n_, 0.0);
        if (N_[ray_col_] >= 0 && N_[ray_col_] < n_) d[N_[ray_col_]] = 1.0;
        for (std::size_t i = 0; i < rows(); ++i)
            if (B_[i] >= 0 && B_[i] < n_) d[B_[i]] = -at(i)[ray_col_];
        return d;
    }

private:
    double* at(std::size_t i) { return D_.data() + i * stride_; }
    const double* at(std::size_t i) const { return D_.data() + i * stride_; }
    double rhs(std::size_t i) const { return at(i)[stride_ - 1]; }
    double max_rhs() const {
        double s = 0.0;
        for (std::size_t i = 0; i < rows(); ++i) s = std::max(s, std::abs(rhs(i)));
        return s;
    }

    void pivot(std::size_t r, std::size_t s) {
        double* a = at(r);
        const double inv = 1.0 / a[s];
        const auto eliminate = [&](double* b) {
            if (b[s] == 0.0) return;
            const double f = b[s] * inv;
            k_.sub_scaled(b, a, f, stride_);
            b[s] = -f;
        };
        for (std::size_t i = 0; i < rows(); ++i)
            if (i != r) eliminate(at(i));
        eliminate(obj_.data());
        eliminate(aux_.data());
        k_.scale(a, inv, stride_);
        a[s] = inv;
        std::swap(B_[r], N_[s]);
        ++iterations_;
    }

    Result simplex(int phase, long max_iterations) {
        double* x = phase == 1 ? obj_.data() : aux_.data();
        int stalled = 0;
        for (;;) {
            if (iterations_ >= max_iterations) return Result::limit;
            const bool bland = stalled > kStallLimit;
            std::size_t s = N_.size();
            for (std::size_t j = 0; j < N_.size(); ++j) {
                if (N_[j] == -phase) continue;
                if (bland) {
                    if (x[j] < -kEps && (s == N_.size() || N_[j] < N_[s])) s = j;
                } else if (s == N_.size() || x[j] < x[s] || (x[j] == x[s] && N_[j] < N_[s])) {
                    s = j;
                }
            }
            if (s == N_.size() || x[s] >= -kEps) return Result::optimal;
            std::size_t r = rows();
            double best = 0.0;
            for (std::size_t i = 0; i < rows(); ++i) {
                const double* a = at(i);
                if (a[s] <= kEps) continue;
                const double ratio = a[stride_ - 1] / a[s];
                if (r == rows() || ratio < best || (ratio == best && B_[i] < B_[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == rows()) {
                ray_col_ = s;
                return Result::unbounded;
            }
            stalled = best <= kEps ? stalled + 1 : 0;
            pivot(r, s);
        }
    }

    int n_;
    std::size_t stride_;
    const simd::KernelTable& k_;
    std::vector<int> B_, N_;
    std::vector<double> D_, obj_, aux_;
    std::size_t ray_col_ = 0;
    long iterations_ = 0;
};

std::vector<std::pair<std::vector<LinearTerm>, double>> as_le(const Constraint& c) {
    std::vector<std::pair<std::vector<LinearTerm>, double>> out;
    auto negated = [&] {
        auto t = c.terms;
        for (auto& x : t) x.coef = -x.coef;
        return std::pair{std::move(t), -c.rhs};
    };
    if (c.sense != Sense::ge) out.emplace_back(c.terms, c.rhs);
    if (c.sense != Sense::le) out.push_back(negated());
    return out;
}

double activity(const Constraint& c, std::span<const double> x) {
    double s = 0.0;
    for (const auto& t : c.terms) s += t.coef * x[t.var];
    return s;
}

// Positive when the row is violated by the point, by the amount of violation.
double violation(const Constraint& c, std::span<const double> x) {
    const double lhs = activity(c, x);
    switch (c.sense) {
        case Sense::le: return lhs - c.rhs;
        case Sense::ge: return c.rhs - lhs;
        case Sense::eq: return std::abs(lhs - c.rhs);
    }
    return 0.0;
}

// Positive when moving along the ray eventually violates the row.
double ray_violation(const Constraint& c, std::span<const double> d) {
    const double lhs = activity(c, d);
    switch (c.sense) {
        case Sense::le: return lhs;
        case Sense::ge: return -lhs;
        case Sense::eq: return std::abs(lhs);
    }
    return 0.0;
}

double norm_inf(std::span<const double> x) {
    double s = 1.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& options) {
    if (static_cast<int>(lp.objective.size()) != lp.num_vars) throw SolverError("objective length differs from variable count");
    for (const auto& c : lp.constraints)
        for (const auto& t : c.terms)
            if (t.var < 0 || t.var >= lp.num_vars) throw SolverError("constraint references an undeclared variable");

    LpOutcome out;
    const std::size_t total = lp.constraints.size();
    const std::size_t eager = std::min(options.lazy_from, total);
    std::vector<std::size_t> loaded;
    std::vector<char> is_loaded(total, 0);
    for (std::size_t i = 0; i < eager; ++i) {
        loaded.push_back(i);
        is_loaded[i] = 1;
    }
    const auto rows_of = [&](std::span<const std::size_t> ids) {
        std::vector<std::pair<std::vector<LinearTerm>, double>> rows;
        for (std::size_t i : ids)
            for (auto& r : as_le(lp.constraints[i])) rows.push_back(std::move(r));
        return rows;
    };

    long spent = 0;
    auto t = std::make_unique<Tableau>(lp.num_vars, lp.objective, simd::active());
    t->add_rows(rows_of(loaded));
    bool infeasible = false;
    Result res = t->run(options.max_iterations, infeasible);
    for (;;) {
        out.iterations = spent + t->iterations();
        out.active_rows = t->rows();
        if (res == Result::limit) return out;
        if (infeasible) {
            out.status = LpStatus::infeasible;
            return out;
        }
        const auto x = t->point();
        const auto d = res == Result::unbounded ? t->ray() : std::vector<double>{};
        const double xs = norm_inf(x);
        const double ds = d.empty() ? 1.0 : norm_inf(d);

        std::vector<std::pair<double, std::size_t>> cuts;
        for (std::size_t i = eager; i < total; ++i) {
            if (is_loaded[i]) continue;
            double v = violation(lp.constraints[i], x) / xs;
            if (!d.empty()) v = std::max(v, ray_violation(lp.constraints[i], d) / ds);
            if (v > kEps) cuts.emplace_back(v, i);
        }
        if (cuts.empty()) {
            out.solution = x;
            out.ray = d;
            break;
        }
        std::stable_sort(cuts.begin(), cuts.end(), [](const auto& p, const auto& q) { return p.first > q.first; });
        if (options.batch && cuts.size() > options.batch) cuts.resize(options.batch);
        std::vector<std::size_t> fresh;
        for (const auto& cut : cuts) {
            fresh.push_back(cut.second);
            is_loaded[cut.second] = 1;
        }
        loaded.insert(loaded.end(), fresh.begin(), fresh.end());
        if (res == Result::optimal) {
            t->add_rows(rows_of(fresh));
            res = t->reoptimize(options.max_iterations - spent, infeasible);
        } else {
            // No dual-feasible basis to continue from: rebuild.
            spent += t->iterations();
            t = std::make_unique<Tableau>(lp.num_vars, lp.objective, simd::active());
            t->add_rows(rows_of(loaded));
            res = t->run(options.max_iterations - spent, infeasible);
        }
    }

    // Independent re-check against the original rows.
    const double tol = options.tolerance;
    const double xs = norm_inf(out.solution);
    for (const auto& c : lp.constraints)
        if (violation(c, out.solution) > tol * xs) return out;
    if (!out.ray.empty()) {
        const double ds = norm_inf(out.ray);
        for (const auto& c : lp.constraints)
            if (ray_violation(c, out.ray) > tol * ds) return out;
        for (double v : out.ray)
            if (v < -tol * ds) return out;
        double gain = 0.0;
        for (int j = 0; j < lp.num_vars; ++j) gain += lp.objective[j] * out.ray[j];
        if (gain <= tol * ds) return out;
        out.status = LpStatus::unbounded;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    for (double v : out.solution)
        if (v < -tol * xs) return out;
    out.status = LpStatus::optimal;
    out.value = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) out.value += lp.objective[j] * out.solution[j];
    return out;
}

}  // namespace mdist
