#include "paretokit/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "paretokit/random.hpp"

namespace paretokit {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void require_m(const Problem& problem, const Eigen::VectorXd& v, const char* what)
{
    if (static_cast<std::size_t>(v.size()) != problem.m()) {
        throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) + ", problem has " +
                                std::to_string(problem.m()) + " objectives");
    }
}

FeasibilityPredicate base_feasibility(const Problem& problem)
{
    return [&problem](const DecisionVector& x) { return problem.feasible(x); };
}

} // namespace

WeightVector::WeightVector(Eigen::VectorXd w) : w_(std::move(w))
{
    if (w_.size() == 0) throw InvalidWeights("empty weight vector");
    for (Eigen::Index i = 0; i < w_.size(); ++i) {
        if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
            throw InvalidWeights("weight " + std::to_string(i + 1) + " must be positive");
        }
    }
    if (std::abs(w_.sum() - 1.0) > 1e-12) throw InvalidWeights("weights must sum to 1");
}

WeightVector WeightVector::uniform(std::size_t m)
{
    return WeightVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)));
}

std::string_view to_string(ScalarizationKind kind) noexcept
{
    switch (kind) {
    case ScalarizationKind::weighted_sum: return "weighted-sum";
    case ScalarizationKind::weighted_exp_sum: return "weighted-exp-sum";
    case ScalarizationKind::weighted_metric: return "weighted-metric";
    case ScalarizationKind::chebyshev: return "chebyshev";
    case ScalarizationKind::exp_weighted_criterion: return "exp-weighted-criterion";
    case ScalarizationKind::weighted_product: return "weighted-product";
    }
    return "?";
}

ScalarizationKind parse_scalarization_kind(std::string_view name)
{
    for (auto k : {ScalarizationKind::weighted_sum, ScalarizationKind::weighted_exp_sum,
                   ScalarizationKind::weighted_metric, ScalarizationKind::chebyshev,
                   ScalarizationKind::exp_weighted_criterion, ScalarizationKind::weighted_product}) {
        if (to_string(k) == name) return k;
    }
    throw InvalidConfig("unknown scalarization method '" + std::string(name) + "'");
}

IdealMode parse_ideal_mode(std::string_view name)
{
    if (name == "utopia") return IdealMode::utopia;
    if (name == "goal") return IdealMode::goal;
    if (name == "origin") return IdealMode::origin;
    throw InvalidConfig("unknown ideal point mode '" + std::string(name) + "'");
}

ScalarFunction scalar_objective(const Problem& problem, const ScalarizationMethod& method)
{
    require_m(problem, method.weights.values(), "weight vector");
    const double p = method.p;
    if (method.kind != ScalarizationKind::weighted_sum && method.kind != ScalarizationKind::chebyshev &&
        method.kind != ScalarizationKind::weighted_product && !(p >= 1.0)) {
        throw InvalidConfig("exponent p must be >= 1");
    }

    ObjectiveVector ideal = ObjectiveVector::Zero(static_cast<Eigen::Index>(problem.m()));
    if (method.uses_ideal()) {
        switch (method.ideal_mode) {
        case IdealMode::utopia:
            if (!method.ideal) throw InvalidConfig("UTOPIA ideal point has not been computed");
            ideal = *method.ideal;
            break;
        case IdealMode::goal:
            if (!method.goal) throw InvalidConfig("GOAL ideal mode requires a goal vector");
            ideal = *method.goal;
            break;
        case IdealMode::origin: break;
        }
        require_m(problem, ideal, "ideal point");
    }

    const Eigen::VectorXd w = method.weights.values();
    const auto kind = method.kind;
    return [&problem, w, p, ideal, kind](const DecisionVector& x) {
        const ObjectiveVector f = problem.objectives_at(x);
        double value = 0.0;
        switch (kind) {
        case ScalarizationKind::weighted_sum: value = w.dot(f); break;
        case ScalarizationKind::weighted_exp_sum:
            for (Eigen::Index i = 0; i < f.size(); ++i) value += w[i] * std::pow(f[i], p);
            break;
        case ScalarizationKind::weighted_metric: {
            double s = 0.0;
            for (Eigen::Index i = 0; i < f.size(); ++i) s += std::pow(w[i], p) * std::pow(std::abs(f[i] - ideal[i]), p);
            value = std::pow(s, 1.0 / p);
            break;
        }
        case ScalarizationKind::chebyshev:
            value = (w.array() * (f - ideal).array().abs()).maxCoeff();
            break;
        case ScalarizationKind::exp_weighted_criterion:
            for (Eigen::Index i = 0; i < f.size(); ++i) value += (std::exp(p * w[i]) - 1.0) * std::exp(p * f[i]);
            break;
        case ScalarizationKind::weighted_product:
            value = 1.0;
            for (Eigen::Index i = 0; i < f.size(); ++i) value *= std::pow(std::abs(f[i]), w[i]);
            break;
        }
        if (!std::isfinite(value)) {
            throw OverflowGuard(std::string(to_string(kind)) + " value is not representable");
        }
        return value;
    };
}

ObjectiveVector utopia_point(const Problem& problem, const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    ObjectiveVector utopia(static_cast<Eigen::Index>(problem.m()));
    for (std::size_t i = 0; i < problem.m(); ++i) {
        const auto& fi = problem.objective(i);
        auto x = optimizer.minimize(fi, problem.bounds(), base_feasibility(problem), derive_seed(seed, i));
        if (!x) throw OptimizerFailure("no feasible point while minimizing f_" + std::to_string(i + 1));
        utopia[static_cast<Eigen::Index>(i)] = fi(*x);
    }
    return utopia;
}

ScalarizationMethod resolve_ideal(const Problem& problem, ScalarizationMethod method,
                                  const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    if (method.uses_ideal() && method.ideal_mode == IdealMode::utopia && !method.ideal) {
        method.ideal = utopia_point(problem, optimizer, seed);
    }
    return method;
}

Solution solve_scalarized(const Problem& problem, const ScalarizationMethod& method,
                          const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    const auto resolved = resolve_ideal(problem, method, optimizer, derive_seed(seed, 1000));
    const auto fn = scalar_objective(problem, resolved);
    auto x = optimizer.minimize(fn, problem.bounds(), base_feasibility(problem), seed);
    if (!x) throw OptimizerFailure("no feasible point found for " + std::string(to_string(method.kind)));
    return evaluate(problem, *x);
}

std::vector<WeightVector> simplex_weights(std::size_t m, std::size_t grid_size, double delta)
{
    if (m < 2) throw InvalidConfig("weights need at least two objectives");
    if (grid_size < 2) throw InvalidConfig("grid_size must be >= 2");
    if (!(delta > 0.0) || delta * static_cast<double>(m) >= 1.0) throw InvalidConfig("weight offset out of range");
    const std::size_t divisions = grid_size - 1;

    std::vector<WeightVector> out;
    std::vector<std::size_t> parts(m, 0);
    // Enumerate compositions of `divisions` into m non-negative parts,
    // first component descending.
    auto emit = [&] {
        Eigen::VectorXd w(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            const double lattice = static_cast<double>(parts[i]) / static_cast<double>(divisions);
            w[static_cast<Eigen::Index>(i)] = delta + (1.0 - static_cast<double>(m) * delta) * lattice;
        }
        w /= w.sum();
        out.emplace_back(std::move(w));
    };
    auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
        if (pos == m - 1) {
            parts[pos] = remaining;
            emit();
            return;
        }
        for (std::size_t k = remaining + 1; k-- > 0;) {
            parts[pos] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    recurse(recurse, 0, divisions);
    return out;
}

Front SweepResult::front() const
{
    Front out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.solution);
    return out;
}

FrontTable SweepResult::table() const
{
    FrontTable t;
    t.with_method = true;
    if (!points.empty()) {
        t.n = points.front().solution.x.size();
        t.m = points.front().solution.f.size();
    }
    for (const auto& p : points) t.rows.push_back(FrontRecord{method, p.param_json, std::to_string(p.index), p.solution});
    return t;
}

namespace {

// Runs `solve(i)` for every parameter index, records failures and returns the
// non-dominated successes in parameter order.
template <typename Solve>
SweepResult run_sweep(std::string method, const std::vector<std::string>& params, Solve&& solve)
{
    SweepResult result;
    result.method = std::move(method);
    std::vector<SweepPoint> all;
    for (std::size_t i = 0; i < params.size(); ++i) {
        try {
            all.push_back(SweepPoint{i, params[i], solve(i)});
        } catch (const runtime_failure& e) {
            result.failures.push_back(SweepFailure{i, params[i], e.what()});
        }
    }
    if (all.empty()) {
        throw OptimizerFailure("every parameter of the " + result.method + " sweep failed");
    }
    Front candidates;
    for (const auto& p : all) candidates.push_back(p.solution);
    for (auto idx : nondominated_indices(objective_matrix(candidates))) result.points.push_back(all[idx]);
    return result;
}

} // namespace

SweepResult weight_sweep(const Problem& problem, const ScalarizationMethod& method, std::size_t grid_size,
                         const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    const auto weights = simplex_weights(problem.m(), grid_size);
    const auto base = resolve_ideal(problem, method, optimizer, derive_seed(seed, 1000));
    std::vector<std::string> params;
    for (const auto& w : weights) params.push_back(nlohmann::json{{"weights", to_std(w.values())}}.dump());

    return run_sweep(std::string(to_string(method.kind)), params, [&](std::size_t i) {
        ScalarizationMethod m = base;
        m.weights = weights[i];
        auto x = optimizer.minimize(scalar_objective(problem, m), problem.bounds(), base_feasibility(problem),
                                    derive_seed(seed, i));
        if (!x) throw OptimizerFailure("no feasible point");
        return evaluate(problem, *x);
    });
}

Solution epsilon_constraint(const Problem& problem, const EpsilonBounds& bounds,
                            const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    if (bounds.kept >= problem.m()) throw InvalidConfig("kept objective index out of range");
    require_m(problem, bounds.eps, "epsilon vector");
    for (Eigen::Index i = 0; i < bounds.eps.size(); ++i) {
        if (static_cast<std::size_t>(i) != bounds.kept && std::isnan(bounds.eps[i])) {
            throw InvalidConfig("epsilon bound is NaN");
        }
    }
    const auto kept = bounds.kept;
    const Eigen::VectorXd eps = bounds.eps;
    auto feasible = [&problem, kept, eps](const DecisionVector& x) {
        if (!problem.feasible(x)) return false;
        for (std::size_t i = 0; i < problem.m(); ++i) {
            if (i != kept && !(problem.objective(i)(x) <= eps[static_cast<Eigen::Index>(i)])) return false;
        }
        return true;
    };
    auto x = optimizer.minimize(problem.objective(kept), problem.bounds(), feasible, seed);
    if (!x) throw Infeasible("no sampled point satisfies the epsilon bounds");
    return evaluate(problem, *x);
}

SweepResult epsilon_schedule(const Problem& problem, std::size_t kept, std::size_t grid_size,
                             const SingleObjectiveOptimizer& optimizer, std::uint64_t seed)
{
    if (problem.m() != 2) throw Unsupported("epsilon schedule is bi-objective only");
    if (kept > 1) throw InvalidConfig("kept objective index out of range");
    if (grid_size < 2) throw InvalidConfig("grid_size must be >= 2");
    const std::size_t other = 1 - kept;
    // Anchors bound the useful range of the constrained objective.
    const auto lo_sol = lexicographic(problem, {other, kept}, optimizer, 0.0, derive_seed(seed, 2000));
    const auto hi_sol = lexicographic(problem, {kept, other}, optimizer, 0.0, derive_seed(seed, 2001));
    const double lo = lo_sol.f[static_cast<Eigen::Index>(other)];
    const double hi = hi_sol.f[static_cast<Eigen::Index>(other)];

    std::vector<double> eps_values;
    std::vector<std::string> params;
    for (std::size_t j = 0; j < grid_size; ++j) {
        const double e = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid_size - 1);
        eps_values.push_back(e);
        params.push_back(nlohmann::json{{"kept", kept + 1}, {"epsilon", e}}.dump());
    }
    return run_sweep("epsilon-constraint", params, [&](std::size_t j) {
        EpsilonBounds b{kept, Eigen::VectorXd::Constant(2, std::numeric_limits<double>::infinity())};
        b.eps[static_cast<Eigen::Index>(other)] = eps_values[j];
        return epsilon_constraint(problem, b, optimizer, derive_seed(seed, j));
    });
}

NbiGeometry nbi_geometry(const Problem& problem, std::size_t n_base_points, const SingleObjectiveOptimizer& optimizer,
                         std::uint64_t seed)
{
    if (problem.m() != 2) throw Unsupported("NBI/NC is implemented for two objectives only");
    if (n_base_points < 2) throw InvalidConfig("need at least two base points");

    NbiGeometry g;
    // argmin f_i may be a set; the lexicographic second stage picks its
    // non-dominated member. Zero slack is safe because each stage carries the
    // previous minimizer as an incumbent.
    for (std::size_t i = 0; i < 2; ++i) {
        auto s = lexicographic(problem, {i, 1 - i}, optimizer, 0.0, derive_seed(seed, 3000 + i));
        g.anchors.push_back(s.f);
        g.anchor_x.push_back(s.x);
    }
    g.utopia_line = g.anchors[0] - g.anchors[1];
    for (std::size_t j = 0; j < n_base_points; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(n_base_points - 1);
        g.base_weights.push_back(w);
        g.base_points.push_back(w * g.anchors[0] + (1.0 - w) * g.anchors[1]);
    }
    return g;
}

SweepResult nbi_nc_front(const Problem& problem, std::size_t n_base_points, const SingleObjectiveOptimizer& optimizer,
                         std::uint64_t seed)
{
    const auto g = nbi_geometry(problem, n_base_points, optimizer, seed);
    std::vector<std::string> params;
    for (std::size_t j = 0; j < n_base_points; ++j) {
        params.push_back(
            nlohmann::json{{"base_point", j}, {"omega", {g.base_weights[j], 1.0 - g.base_weights[j]}}}.dump());
    }
    return run_sweep("nbi-nc", params, [&](std::size_t j) {
        const Eigen::VectorXd u = g.utopia_line;
        const ObjectiveVector base = g.base_points[j];
        // Keep the half-plane on the A_1 side of the normal through the base
        // point, then push f_2 down to the normal line.
        auto feasible = [&problem, u, base](const DecisionVector& x) {
            return problem.feasible(x) && u.dot(problem.objectives_at(x) - base) >= 0.0;
        };
        std::vector<DecisionVector> incumbents;
        if (j == 0) incumbents.push_back(g.anchor_x[0]);
        if (j + 1 == n_base_points) incumbents.push_back(g.anchor_x[1]);
        auto x = optimizer.minimize(problem.objective(1), problem.bounds(), feasible, derive_seed(seed, j), incumbents);
        if (!x) throw OptimizerFailure("no feasible point above base point " + std::to_string(j));
        return evaluate(problem, *x);
    });
}

double goal_deviation(const ObjectiveVector& f, const ObjectiveVector& goals)
{
    if (f.size() != goals.size()) throw DimensionMismatch("goal vector length");
    return (f - goals).cwiseMax(0.0).sum();
}

Solution goal_attainment(const Problem& problem, const ObjectiveVector& goals, const SingleObjectiveOptimizer& optimizer,
                         std::uint64_t seed)
{
    require_m(problem, goals, "goal vector");
    if (!goals.allFinite()) throw InvalidConfig("goals must be finite");
    auto fn = [&problem, goals](const DecisionVector& x) { return goal_deviation(problem.objectives_at(x), goals); };
    auto x = optimizer.minimize(fn, problem.bounds(), base_feasibility(problem), seed);
    if (!x) throw OptimizerFailure("no feasible point found for goal programming");
    return evaluate(problem, *x);
}

Eigen::VectorXd estimate_objective_ranges(const Problem& problem, std::uint64_t seed, std::size_t samples)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto m = static_cast<Eigen::Index>(problem.m());
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = -lo;
    const auto& b = problem.bounds();
    for (std::size_t s = 0; s < samples; ++s) {
        DecisionVector x(b.size());
        for (Eigen::Index d = 0; d < b.size(); ++d) x[d] = b.lower[d] + unit(rng) * (b.upper[d] - b.lower[d]);
        const auto f = problem.objectives_at(x);
        lo = lo.cwiseMin(f);
        hi = hi.cwiseMax(f);
    }
    return hi - lo;
}

Solution lexicographic(const Problem& problem, const std::vector<std::size_t>& order,
                       const SingleObjectiveOptimizer& optimizer, std::optional<double> slack, std::uint64_t seed)
{
    const auto m = problem.m();
    if (order.size() != m) throw InvalidConfig("lexicographic order must list every objective once");
    std::vector<bool> seen(m, false);
    for (auto k : order) {
        if (k >= m || seen[k]) throw InvalidConfig("lexicographic order is not a permutation");
        seen[k] = true;
    }
    if (slack && !(*slack >= 0.0)) throw InvalidConfig("slack must be non-negative");

    Eigen::VectorXd slacks(static_cast<Eigen::Index>(m));
    if (slack) {
        slacks.setConstant(*slack);
    } else {
        slacks = 1e-6 * estimate_objective_ranges(problem, derive_seed(seed, 4000));
    }

    std::vector<std::size_t> fixed;
    std::vector<double> caps;
    std::vector<DecisionVector> incumbent;
    for (std::size_t stage = 0; stage < m; ++stage) {
        auto feasible = [&problem, fixed, caps](const DecisionVector& x) {
            if (!problem.feasible(x)) return false;
            for (std::size_t j = 0; j < fixed.size(); ++j) {
                if (!(problem.objective(fixed[j])(x) <= caps[j])) return false;
            }
            return true;
        };
        const auto k = order[stage];
        auto x = optimizer.minimize(problem.objective(k), problem.bounds(), feasible, derive_seed(seed, stage), incumbent);
        if (!x) {
            throw Infeasible("lexicographic stage " + std::to_string(stage + 1) + " (f_" + std::to_string(k + 1) +
                             ") has no feasible point");
        }
        fixed.push_back(k);
        caps.push_back(problem.objective(k)(*x) + slacks[static_cast<Eigen::Index>(k)]);
        incumbent.assign(1, *x);
    }
    return evaluate(problem, incumbent.front());
}

} // namespace paretokit
