#include "paretokit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace paretokit {

namespace {

struct Incumbent {
    std::optional<DecisionVector> x;
    double value = std::numeric_limits<double>::infinity();

    void offer(const DecisionVector& candidate, double v)
    {
        if (!x || v < value) {
            x = candidate;
            value = v;
        }
    }
};

// Visits every point of a regular grid with `res[i]` points on [lo_i, hi_i].
template <typename Visit>
void for_each_grid_point(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, const std::vector<int>& res, Visit&& visit)
{
    const auto n = lo.size();
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    DecisionVector x(n);
    auto coord = [&](Eigen::Index d) {
        const int r = res[static_cast<std::size_t>(d)];
        if (r <= 1) return lo[d];
        const int k = idx[static_cast<std::size_t>(d)];
        if (k == r - 1) return hi[d];
        return lo[d] + (hi[d] - lo[d]) * static_cast<double>(k) / static_cast<double>(r - 1);
    };
    while (true) {
        for (Eigen::Index d = 0; d < n; ++d) x[d] = coord(d);
        visit(x);
        Eigen::Index d = n - 1;
        while (d >= 0) {
            auto& k = idx[static_cast<std::size_t>(d)];
            if (++k < res[static_cast<std::size_t>(d)]) break;
            k = 0;
            --d;
        }
        if (d < 0) return;
    }
}

} // namespace

int GridSearch::coarse_resolution(Eigen::Index n) const
{
    if (n <= 0) return 1;
    const double cap = std::floor(std::pow(static_cast<double>(options_.max_coarse_points), 1.0 / static_cast<double>(n)) + 1e-9);
    return std::max(2, std::min(options_.points_per_dim, static_cast<int>(cap)));
}

std::optional<DecisionVector> GridSearch::minimize(const ScalarFunction& objective, const BoxBounds& bounds,
                                                   const FeasibilityPredicate& feasible, std::uint64_t /*seed*/,
                                                   std::span<const DecisionVector> incumbents) const
{
    const auto n = bounds.size();
    Incumbent best;
    auto consider = [&](const DecisionVector& x) {
        if (feasible(x)) best.offer(x, objective(x));
    };
    for (const auto& x : incumbents) {
        if (bounds.contains(x)) consider(x);
    }

    const int res = coarse_resolution(n);
    std::vector<int> coarse(static_cast<std::size_t>(n), res);
    for (Eigen::Index d = 0; d < n; ++d) {
        if (bounds.lower[d] == bounds.upper[d]) coarse[static_cast<std::size_t>(d)] = 1;
    }
    for_each_grid_point(bounds.lower, bounds.upper, coarse, consider);
    if (!best.x) return std::nullopt;

    Eigen::VectorXd step = bounds.range() / static_cast<double>(res - 1);
    const double floor_step = 1e-13 * (1.0 + bounds.range().cwiseAbs().maxCoeff());
    std::vector<int> fine(static_cast<std::size_t>(n), options_.refine_points);
    for (int level = 0; level < options_.refine_levels; ++level) {
        if (step.maxCoeff() < floor_step) break;
        const DecisionVector center = *best.x;
        const Eigen::VectorXd lo = (center - 2.0 * step).cwiseMax(bounds.lower);
        const Eigen::VectorXd hi = (center + 2.0 * step).cwiseMin(bounds.upper);
        for (Eigen::Index d = 0; d < n; ++d) {
            fine[static_cast<std::size_t>(d)] = lo[d] < hi[d] ? options_.refine_points : 1;
        }
        for_each_grid_point(lo, hi, fine, consider);
        step = (hi - lo) / static_cast<double>(options_.refine_points - 1);
    }
    return best.x;
}

std::optional<DecisionVector> PatternSearch::minimize(const ScalarFunction& objective, const BoxBounds& bounds,
                                                      const FeasibilityPredicate& feasible, std::uint64_t seed,
                                                      std::span<const DecisionVector> incumbents) const
{
    const auto n = bounds.size();
    const std::size_t budget =
        options_.max_evaluations > 0 ? options_.max_evaluations : 20000 * static_cast<std::size_t>(std::max<Eigen::Index>(1, n));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t evaluations = 0;

    Incumbent best;
    std::vector<std::pair<DecisionVector, double>> starts;
    for (const auto& x : incumbents) {
        if (bounds.contains(x) && feasible(x)) {
            const double v = objective(x);
            ++evaluations;
            best.offer(x, v);
            starts.emplace_back(x, v);
        }
    }
    // Random feasible starting points; sampling uses at most a quarter of the budget.
    std::size_t sampled = 0;
    while (starts.size() < static_cast<std::size_t>(options_.restarts) && sampled < budget / 4) {
        DecisionVector x(n);
        for (Eigen::Index d = 0; d < n; ++d) x[d] = bounds.lower[d] + unit(rng) * (bounds.upper[d] - bounds.lower[d]);
        ++sampled;
        if (!feasible(x)) continue;
        const double v = objective(x);
        ++evaluations;
        best.offer(x, v);
        starts.emplace_back(std::move(x), v);
    }
    evaluations += sampled;

    for (auto& [x, value] : starts) {
        Eigen::VectorXd step = options_.initial_step * bounds.range();
        while (evaluations < budget && step.maxCoeff() > options_.min_step) {
            bool moved = false;
            for (Eigen::Index d = 0; d < n && !moved; ++d) {
                for (double sign : {1.0, -1.0}) {
                    DecisionVector trial = x;
                    trial[d] = std::clamp(trial[d] + sign * step[d], bounds.lower[d], bounds.upper[d]);
                    if (trial[d] == x[d] || !feasible(trial)) continue;
                    const double v = objective(trial);
                    ++evaluations;
                    if (v < value) {
                        x = trial;
                        value = v;
                        moved = true;
                        break;
                    }
                }
            }
            if (!moved) step *= 0.5;
        }
        best.offer(x, value);
    }
    return best.x;
}

std::unique_ptr<SingleObjectiveOptimizer> default_optimizer(Eigen::Index n)
{
    if (n <= 3) return std::make_unique<GridSearch>();
    return std::make_unique<PatternSearch>();
}

} // namespace paretokit
