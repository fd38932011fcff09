#ifndef PARETOKIT_BENCH_HPP
#define PARETOKIT_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paretokit/core.hpp"

namespace paretokit {

// Reference front of a bi-objective problem from a dense decision grid.
// Points are sorted by f1 and normalized with the front's own utopia/nadir.
struct GridFront {
    ObjectiveMatrix points;     // raw objective values, one row per front point
    ObjectiveMatrix normalized; // same rows mapped to [0, 1]^2
    ObjectiveVector lo;
    ObjectiveVector hi;
    double spacing = 0.0; // largest distance between neighbouring normalized points

    [[nodiscard]] ObjectiveMatrix normalize(Eigen::Ref<const ObjectiveMatrix> f) const;
};

/// `per_axis[k]` evenly spaced values along decision axis k, bounds included.
/// Only bi-objective problems are supported.
[[nodiscard]] GridFront dense_grid_front(const Problem& problem, const std::vector<std::size_t>& per_axis);

/// Largest distance from a reference-front point to the nearest found point,
/// both normalized by the reference front. Infinite when nothing was found.
[[nodiscard]] double coverage_gap(const GridFront& reference, Eigen::Ref<const ObjectiveMatrix> found);

struct BenchRow {
    std::string problem;
    std::string method;
    std::size_t points = 0;
    double gap = 0.0;         // coverage_gap against the grid front
    double hypervolume = 0.0; // normalized, reference (1.1, 1.1)
};

struct BenchCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct BenchReport {
    std::uint64_t seed = 0;
    std::vector<BenchRow> rows;
    std::vector<std::pair<std::string, double>> grid_spacing; // per problem
    std::vector<BenchCheck> checks;

    [[nodiscard]] bool passed() const;
};

/// Weighted sum and Chebyshev sweeps (101 weights) and NSGA-II (100 x 100)
/// on both built-in problems, plus the non-convex coverage checks on example3.
[[nodiscard]] BenchReport run_bench(std::uint64_t seed);

void write_bench_table(std::ostream& out, const BenchReport& report);
void write_bench_json(std::ostream& out, const BenchReport& report);

} // namespace paretokit

#endif
