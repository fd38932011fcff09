#ifndef PARETOKIT_CORE_HPP
#define PARETOKIT_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "paretokit/errors.hpp"

namespace paretokit {

using DecisionVector = Eigen::VectorXd;
using ObjectiveVector = Eigen::VectorXd;

// Objective values of a point set, one point per row.
using ObjectiveMatrix = Eigen::MatrixXd;

using Evaluator = std::function<double(const DecisionVector&)>;

enum class Dominance { dominates, dominated_by, incomparable, equal };

[[nodiscard]] const char* to_string(Dominance d) noexcept;

/// Pareto dominance for minimization. Works on any pair of Eigen vector
/// expressions (rows of an ObjectiveMatrix, VectorXd, fixed-size vectors).
/// Comparisons are exact; there is no epsilon-dominance.
template <typename DerivedA, typename DerivedB>
[[nodiscard]] Dominance compare_dominance(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b)
{
    if (a.size() != b.size()) {
        throw DimensionMismatch("objective vectors of length " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    bool a_better = false;
    bool b_better = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const auto ai = a.derived().coeff(i);
        const auto bi = b.derived().coeff(i);
        if (ai < bi) {
            a_better = true;
        } else if (bi < ai) {
            b_better = true;
        }
        if (a_better && b_better) return Dominance::incomparable;
    }
    if (a_better) return Dominance::dominates;
    if (b_better) return Dominance::dominated_by;
    return Dominance::equal;
}

template <typename DerivedA, typename DerivedB>
[[nodiscard]] bool dominates(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    return compare_dominance(a, b) == Dominance::dominates;
}

/// Indices of the rows of `points` that no other row dominates, in row order.
/// Rows with identical objective values are all kept.
template <typename Derived>
[[nodiscard]] std::vector<std::size_t> nondominated_indices(const Eigen::MatrixBase<Derived>& points)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw EmptyInput("cannot filter an empty point set");
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < n; ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j) {
            if (j != i && dominates(points.row(static_cast<Eigen::Index>(j)),
                                    points.row(static_cast<Eigen::Index>(i)))) {
                dominated = true;
            }
        }
        if (!dominated) kept.push_back(i);
    }
    return kept;
}

/// Fronts obtained by repeatedly removing the non-dominated subset.
/// Every index appears in exactly one front; no front is empty.
template <typename Derived>
[[nodiscard]] std::vector<std::vector<std::size_t>> nondominated_sort_iterative(
    const Eigen::MatrixBase<Derived>& points)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) throw EmptyInput("cannot sort an empty point set");
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;

    std::vector<std::vector<std::size_t>> fronts;
    while (!remaining.empty()) {
        std::vector<std::size_t> front;
        std::vector<std::size_t> rest;
        for (auto i : remaining) {
            bool dominated = false;
            for (auto j : remaining) {
                if (j != i && dominates(points.row(static_cast<Eigen::Index>(j)),
                                        points.row(static_cast<Eigen::Index>(i)))) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : front).push_back(i);
        }
        fronts.push_back(std::move(front));
        remaining = std::move(rest);
    }
    return fronts;
}

/// Number of rows dominating each row.
template <typename Derived>
[[nodiscard]] std::vector<std::size_t> dominator_counts(const Eigen::MatrixBase<Derived>& points)
{
    const auto n = static_cast<std::size_t>(points.rows());
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            switch (compare_dominance(points.row(static_cast<Eigen::Index>(i)),
                                      points.row(static_cast<Eigen::Index>(j)))) {
            case Dominance::dominates: ++counts[j]; break;
            case Dominance::dominated_by: ++counts[i]; break;
            default: break;
            }
        }
    }
    return counts;
}

/// Group k holds the rows dominated by exactly k other rows. Empty groups
/// between occupied ones are kept, so the result has max_count + 1 groups.
template <typename Derived>
[[nodiscard]] std::vector<std::vector<std::size_t>> dominator_count_partition(
    const Eigen::MatrixBase<Derived>& points)
{
    if (points.rows() == 0) throw EmptyInput("cannot partition an empty point set");
    const auto counts = dominator_counts(points);
    std::size_t max_count = 0;
    for (auto c : counts) max_count = std::max(max_count, c);
    std::vector<std::vector<std::size_t>> groups(max_count + 1);
    for (std::size_t i = 0; i < counts.size(); ++i) groups[counts[i]].push_back(i);
    return groups;
}

/// Componentwise minimum (utopia) and maximum (nadir) over the rows.
template <typename Derived>
[[nodiscard]] std::pair<ObjectiveVector, ObjectiveVector> utopia_and_nadir(const Eigen::MatrixBase<Derived>& points)
{
    if (points.rows() == 0) throw EmptyInput("utopia/nadir of an empty front");
    return {points.colwise().minCoeff().transpose(), points.colwise().maxCoeff().transpose()};
}

/// Rescales every column to [0, 1] over the rows. Constant columns map to 0.
template <typename Derived>
[[nodiscard]] ObjectiveMatrix minmax_normalize(const Eigen::MatrixBase<Derived>& points)
{
    ObjectiveMatrix out(points.rows(), points.cols());
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
        const double lo = points.col(c).minCoeff();
        const double range = points.col(c).maxCoeff() - lo;
        if (range > 0.0) {
            out.col(c) = (points.col(c).array() - lo) / range;
        } else {
            out.col(c).setZero();
        }
    }
    return out;
}

struct BoxBounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    BoxBounds() = default;
    BoxBounds(Eigen::VectorXd lo, Eigen::VectorXd hi);

    [[nodiscard]] Eigen::Index size() const noexcept { return lower.size(); }
    [[nodiscard]] bool contains(const DecisionVector& x) const;
    [[nodiscard]] DecisionVector clamp(const DecisionVector& x) const;
    [[nodiscard]] Eigen::VectorXd range() const { return upper - lower; }
};

struct ConstraintSet {
    std::vector<Evaluator> inequalities; // feasible when g(x) >= 0
    std::vector<Evaluator> equalities;   // feasible when |h(x)| <= eq_tolerance
    double eq_tolerance = 1e-8;
};

/// min F(x) = (f_1(x), ..., f_M(x)) over box bounds and constraints.
/// Every objective is minimized and must be deterministic.
class Problem {
public:
    Problem(std::vector<Evaluator> objectives, BoxBounds bounds, ConstraintSet constraints = {});

    [[nodiscard]] Eigen::Index n() const noexcept { return bounds_.size(); }
    [[nodiscard]] std::size_t m() const noexcept { return objectives_.size(); }
    [[nodiscard]] const BoxBounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] const ConstraintSet& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const Evaluator& objective(std::size_t i) const { return objectives_.at(i); }

    /// Objective vector at x; throws NonFiniteObjective on NaN or infinity.
    [[nodiscard]] ObjectiveVector objectives_at(const DecisionVector& x) const;
    [[nodiscard]] bool feasible(const DecisionVector& x) const;

private:
    std::vector<Evaluator> objectives_;
    BoxBounds bounds_;
    ConstraintSet constraints_;
};

struct Solution {
    DecisionVector x;
    ObjectiveVector f;
    bool feasible = true;
};

using Front = std::vector<Solution>;

[[nodiscard]] Solution evaluate(const Problem& problem, const DecisionVector& x);

/// Stacks the objective vectors of a front as rows.
[[nodiscard]] ObjectiveMatrix objective_matrix(const Front& front);

/// Non-dominated subset, preserving input order; EQUAL vectors are all kept.
[[nodiscard]] Front pareto_filter(const Front& solutions);

[[nodiscard]] std::vector<Front> nondominated_sort_iterative(const Front& solutions);
[[nodiscard]] std::vector<Front> dominator_count_partition(const Front& solutions);
[[nodiscard]] std::pair<ObjectiveVector, ObjectiveVector> utopia_and_nadir(const Front& front);

} // namespace paretokit

#endif
