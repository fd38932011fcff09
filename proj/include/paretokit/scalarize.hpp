#ifndef PARETOKIT_SCALARIZE_HPP
#define PARETOKIT_SCALARIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paretokit/core.hpp"
#include "paretokit/front_io.hpp"
#include "paretokit/optimizer.hpp"

namespace paretokit {

/// Strictly positive weights summing to one (within 1e-12).
class WeightVector {
public:
    explicit WeightVector(Eigen::VectorXd w);

    [[nodiscard]] static WeightVector uniform(std::size_t m);

    [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return w_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(w_.size()); }
    [[nodiscard]] double operator[](Eigen::Index i) const { return w_[i]; }

private:
    Eigen::VectorXd w_;
};

enum class ScalarizationKind {
    weighted_sum,           // sum w_i f_i
    weighted_exp_sum,       // sum w_i f_i^p
    weighted_metric,        // (sum w_i^p |f_i - f*_i|^p)^(1/p)
    chebyshev,              // max w_i |f_i - f*_i|
    exp_weighted_criterion, // sum (e^(p w_i) - 1) e^(p f_i)
    weighted_product,       // prod |f_i|^w_i
};

enum class IdealMode { utopia, goal, origin };

[[nodiscard]] std::string_view to_string(ScalarizationKind kind) noexcept;
[[nodiscard]] ScalarizationKind parse_scalarization_kind(std::string_view name);
[[nodiscard]] IdealMode parse_ideal_mode(std::string_view name);

struct ScalarizationMethod {
    ScalarizationMethod(ScalarizationKind k, WeightVector w) : kind(k), weights(std::move(w)) {}

    ScalarizationKind kind;
    WeightVector weights;
    double p = 2.0;
    IdealMode ideal_mode = IdealMode::utopia;
    std::optional<ObjectiveVector> goal;  // GOAL mode
    std::optional<ObjectiveVector> ideal; // UTOPIA mode; computed by solve_scalarized when absent

    [[nodiscard]] bool uses_ideal() const noexcept
    {
        return kind == ScalarizationKind::weighted_metric || kind == ScalarizationKind::chebyshev;
    }
};

/// The scalar function of `method` over decision vectors. Throws
/// OverflowGuard at evaluation time if the value is not finite.
[[nodiscard]] ScalarFunction scalar_objective(const Problem& problem, const ScalarizationMethod& method);

/// Componentwise minimum of each objective, each minimized on its own.
[[nodiscard]] ObjectiveVector utopia_point(const Problem& problem, const SingleObjectiveOptimizer& optimizer,
                                           std::uint64_t seed);

/// Fills `ideal` for UTOPIA mode if it is missing.
[[nodiscard]] ScalarizationMethod resolve_ideal(const Problem& problem, ScalarizationMethod method,
                                                const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

[[nodiscard]] Solution solve_scalarized(const Problem& problem, const ScalarizationMethod& method,
                                        const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

/// Simplex-lattice weights with grid_size - 1 divisions, shifted inward by
/// delta so every component is at least delta.
[[nodiscard]] std::vector<WeightVector> simplex_weights(std::size_t m, std::size_t grid_size, double delta = 1e-3);

struct SweepPoint {
    std::size_t index = 0;
    std::string param_json;
    Solution solution;
};

struct SweepFailure {
    std::size_t index = 0;
    std::string param_json;
    std::string message;
};

struct SweepResult {
    std::string method;
    std::vector<SweepPoint> points; // non-dominated, in parameter order
    std::vector<SweepFailure> failures;

    [[nodiscard]] Front front() const;
    [[nodiscard]] FrontTable table() const;
};

[[nodiscard]] SweepResult weight_sweep(const Problem& problem, const ScalarizationMethod& method, std::size_t grid_size,
                                       const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

struct EpsilonBounds {
    std::size_t kept = 0;   // index of the minimized objective
    Eigen::VectorXd eps;    // upper bounds; the entry at `kept` is ignored
};

[[nodiscard]] Solution epsilon_constraint(const Problem& problem, const EpsilonBounds& bounds,
                                          const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

/// Bi-objective only: grid_size epsilon values spread evenly over the anchor
/// range of the constrained objective.
[[nodiscard]] SweepResult epsilon_schedule(const Problem& problem, std::size_t kept, std::size_t grid_size,
                                           const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

struct NbiGeometry {
    std::vector<ObjectiveVector> anchors;      // A_i = F(argmin f_i)
    std::vector<DecisionVector> anchor_x;
    Eigen::VectorXd utopia_line;               // A_1 - A_2
    std::vector<ObjectiveVector> base_points;  // w A_1 + (1 - w) A_2, w from 1 to 0
    std::vector<double> base_weights;
};

[[nodiscard]] NbiGeometry nbi_geometry(const Problem& problem, std::size_t n_base_points,
                                       const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

/// Normal-constraint front for M = 2: per base point, minimize f_2 on the
/// side of the normal line towards A_1, then drop non-Pareto solutions.
[[nodiscard]] SweepResult nbi_nc_front(const Problem& problem, std::size_t n_base_points,
                                       const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

/// Sum of one-sided deviations max(0, f_i - goal_i).
[[nodiscard]] double goal_deviation(const ObjectiveVector& f, const ObjectiveVector& goals);

/// Minimizes goal_deviation. The result is not post-filtered and need not be
/// Pareto optimal.
[[nodiscard]] Solution goal_attainment(const Problem& problem, const ObjectiveVector& goals,
                                       const SingleObjectiveOptimizer& optimizer, std::uint64_t seed);

/// Per-objective max - min over a seeded uniform sample of the box.
[[nodiscard]] Eigen::VectorXd estimate_objective_ranges(const Problem& problem, std::uint64_t seed,
                                                        std::size_t samples = 256);

/// Minimizes objectives in `order` (0-based), each stage constrained to stay
/// within `slack` of the earlier optima. Without an explicit slack each
/// objective gets 1e-6 times its estimated range.
[[nodiscard]] Solution lexicographic(const Problem& problem, const std::vector<std::size_t>& order,
                                     const SingleObjectiveOptimizer& optimizer, std::optional<double> slack,
                                     std::uint64_t seed);

} // namespace paretokit

#endif
