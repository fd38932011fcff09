#include "paretokit/core.hpp"

#include <algorithm>

namespace paretokit {

const char* to_string(Dominance d) noexcept
{
    switch (d) {
    case Dominance::dominates: return "DOMINATES";
    case Dominance::dominated_by: return "DOMINATED_BY";
    case Dominance::incomparable: return "INCOMPARABLE";
    case Dominance::equal: return "EQUAL";
    }
    return "?";
}

BoxBounds::BoxBounds(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi))
{
    if (lower.size() != upper.size()) throw DimensionMismatch("bounds have different lengths");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
            throw InvalidConfig("bound " + std::to_string(i) + " is not a finite interval");
        }
    }
}

bool BoxBounds::contains(const DecisionVector& x) const
{
    if (x.size() != size()) return false;
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

DecisionVector BoxBounds::clamp(const DecisionVector& x) const
{
    return x.cwiseMax(lower).cwiseMin(upper);
}

Problem::Problem(std::vector<Evaluator> objectives, BoxBounds bounds, ConstraintSet constraints)
    : objectives_(std::move(objectives)), bounds_(std::move(bounds)), constraints_(std::move(constraints))
{
    if (objectives_.size() < 2) throw InvalidConfig("a problem needs at least two objectives");
    if (!(constraints_.eq_tolerance > 0.0)) throw InvalidConfig("eq_tolerance must be positive");
}

ObjectiveVector Problem::objectives_at(const DecisionVector& x) const
{
    if (x.size() != n()) {
        throw DimensionMismatch("decision vector has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(n()));
    }
    ObjectiveVector f(static_cast<Eigen::Index>(objectives_.size()));
    for (std::size_t i = 0; i < objectives_.size(); ++i) {
        const double v = objectives_[i](x);
        if (!std::isfinite(v)) throw NonFiniteObjective("f_" + std::to_string(i + 1) + " is not finite");
        f[static_cast<Eigen::Index>(i)] = v;
    }
    return f;
}

bool Problem::feasible(const DecisionVector& x) const
{
    if (!bounds_.contains(x)) return false;
    for (const auto& g : constraints_.inequalities) {
        if (!(g(x) >= 0.0)) return false;
    }
    for (const auto& h : constraints_.equalities) {
        if (!(std::abs(h(x)) <= constraints_.eq_tolerance)) return false;
    }
    return true;
}

Solution evaluate(const Problem& problem, const DecisionVector& x)
{
    return Solution{x, problem.objectives_at(x), problem.feasible(x)};
}

ObjectiveMatrix objective_matrix(const Front& front)
{
    if (front.empty()) return {};
    const auto m = front.front().f.size();
    ObjectiveMatrix out(static_cast<Eigen::Index>(front.size()), m);
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (front[i].f.size() != m) throw DimensionMismatch("front mixes objective counts");
        out.row(static_cast<Eigen::Index>(i)) = front[i].f.transpose();
    }
    return out;
}

namespace {

Front pick(const Front& solutions, const std::vector<std::size_t>& idx)
{
    Front out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(solutions[i]);
    return out;
}

std::vector<Front> pick_groups(const Front& solutions, const std::vector<std::vector<std::size_t>>& groups)
{
    std::vector<Front> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(pick(solutions, g));
    return out;
}

} // namespace

Front pareto_filter(const Front& solutions)
{
    if (solutions.empty()) throw EmptyInput("pareto_filter on an empty set");
    return pick(solutions, nondominated_indices(objective_matrix(solutions)));
}

std::vector<Front> nondominated_sort_iterative(const Front& solutions)
{
    if (solutions.empty()) throw EmptyInput("nondominated sort on an empty set");
    return pick_groups(solutions, nondominated_sort_iterative(objective_matrix(solutions)));
}

std::vector<Front> dominator_count_partition(const Front& solutions)
{
    if (solutions.empty()) throw EmptyInput("partition of an empty set");
    return pick_groups(solutions, dominator_count_partition(objective_matrix(solutions)));
}

std::pair<ObjectiveVector, ObjectiveVector> utopia_and_nadir(const Front& front)
{
    if (front.empty()) throw EmptyInput("utopia/nadir of an empty front");
    return utopia_and_nadir(objective_matrix(front));
}

} // namespace paretokit
