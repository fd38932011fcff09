#include "paretokit/problems.hpp"

#include <numbers>
#include <string>

namespace paretokit::problems {

Problem example2()
{
    std::vector<Evaluator> f{
        [](const DecisionVector& x) { return 2.0 * (x[0] - 1.0) + 1.0; },
        [](const DecisionVector& x) { return 2.0 * (x[0] - 3.0) * (x[0] - 3.0) + 1.0; },
    };
    return Problem(std::move(f), BoxBounds(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 6.0)));
}

Problem example3()
{
    std::vector<Evaluator> f{
        [](const DecisionVector& x) { return x[0]; },
        [](const DecisionVector& x) {
            return 1.0 + x[1] * x[1] - x[0] - 0.1 * std::sin(3.0 * std::numbers::pi * x[0]);
        },
    };
    return Problem(std::move(f), BoxBounds(Eigen::Vector2d(0.0, -2.0), Eigen::Vector2d(1.0, 2.0)));
}

Problem by_name(std::string_view name)
{
    if (name == "example2") return example2();
    if (name == "example3") return example3();
    throw InvalidConfig("unknown problem '" + std::string(name) + "' (expected example2 or example3)");
}

std::vector<std::string_view> names() { return {"example2", "example3"}; }

} // namespace paretokit::problems
