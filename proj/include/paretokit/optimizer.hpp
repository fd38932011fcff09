#ifndef PARETOKIT_OPTIMIZER_HPP
#define PARETOKIT_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "paretokit/core.hpp"

namespace paretokit {

using ScalarFunction = std::function<double(const DecisionVector&)>;
using FeasibilityPredicate = std::function<bool(const DecisionVector&)>;

/// Minimizes a scalar function over a box, rejecting infeasible points.
/// Implementations are deterministic for a fixed seed and never return a
/// point outside the bounds. `incumbents` are extra candidates evaluated
/// before the search proper (used to carry a known feasible point across
/// constrained stages).
class SingleObjectiveOptimizer {
public:
    virtual ~SingleObjectiveOptimizer() = default;

    /// std::nullopt when the budget ran out before any feasible point was seen.
    [[nodiscard]] virtual std::optional<DecisionVector> minimize(const ScalarFunction& objective,
                                                                 const BoxBounds& bounds,
                                                                 const FeasibilityPredicate& feasible,
                                                                 std::uint64_t seed,
                                                                 std::span<const DecisionVector> incumbents = {}) const = 0;
};

struct GridSearchOptions {
    int points_per_dim = 2048;
    std::size_t max_coarse_points = std::size_t{1} << 18; // caps points_per_dim^n
    int refine_points = 41;
    int refine_levels = 12;
};

// Exhaustive grid followed by successive zoomed grids around the incumbent.
class GridSearch final : public SingleObjectiveOptimizer {
public:
    explicit GridSearch(GridSearchOptions options = {}) : options_(options) {}

    [[nodiscard]] std::optional<DecisionVector> minimize(const ScalarFunction& objective, const BoxBounds& bounds,
                                                         const FeasibilityPredicate& feasible, std::uint64_t seed,
                                                         std::span<const DecisionVector> incumbents = {}) const override;

    [[nodiscard]] int coarse_resolution(Eigen::Index n) const;
    [[nodiscard]] const GridSearchOptions& options() const noexcept { return options_; }

private:
    GridSearchOptions options_;
};

struct PatternSearchOptions {
    int restarts = 8;
    std::size_t max_evaluations = 0; // 0: 20000 * n
    double initial_step = 0.25;      // fraction of each bound's range
    double min_step = 1e-10;
};

// Seeded random-restart compass search.
class PatternSearch final : public SingleObjectiveOptimizer {
public:
    explicit PatternSearch(PatternSearchOptions options = {}) : options_(options) {}

    [[nodiscard]] std::optional<DecisionVector> minimize(const ScalarFunction& objective, const BoxBounds& bounds,
                                                         const FeasibilityPredicate& feasible, std::uint64_t seed,
                                                         std::span<const DecisionVector> incumbents = {}) const override;

private:
    PatternSearchOptions options_;
};

/// GridSearch for n <= 3, PatternSearch above.
[[nodiscard]] std::unique_ptr<SingleObjectiveOptimizer> default_optimizer(Eigen::Index n);

} // namespace paretokit

#endif
