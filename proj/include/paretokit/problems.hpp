#ifndef PARETOKIT_PROBLEMS_HPP
#define PARETOKIT_PROBLEMS_HPP

#include <string_view>
#include <vector>

#include "paretokit/core.hpp"

namespace paretokit::problems {

// f1 = 2(x-1)+1, f2 = 2(x-3)^2+1 on [0, 6]. Pareto set is [0, 3].
[[nodiscard]] Problem example2();

// f1 = x1, f2 = 1 + x2^2 - x1 - 0.1 sin(3 pi x1) on [0,1] x [-2,2].
// The front is concave for x1 in (1/3, 2/3).
[[nodiscard]] Problem example3();

[[nodiscard]] Problem by_name(std::string_view name);
[[nodiscard]] std::vector<std::string_view> names();

} // namespace paretokit::problems

#endif
