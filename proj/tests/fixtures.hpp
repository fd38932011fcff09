#ifndef PARETOKIT_TESTS_FIXTURES_HPP
#define PARETOKIT_TESTS_FIXTURES_HPP

// Shared test data. The five-point set reproduces the dominance structure
// of the textbook NSGA / MOGA / NPGA walkthrough: A and B non-dominated,
// C dominated only by A, D only by B, E by A, B and C. Coordinates are
// chosen so that B sits in a more crowded region than D.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "paretokit/core.hpp"

namespace fixtures {

enum Point : std::size_t { A = 0, B, C, D, E };

inline paretokit::ObjectiveMatrix five_points()
{
    paretokit::ObjectiveMatrix m(5, 2);
    m << 1.0, 3.0,  // A
        1.5, 2.5,   // B
        1.2, 3.5,   // C
        4.0, 2.6,   // D
        3.0, 4.0;   // E
    return m;
}

inline paretokit::Front as_front(const paretokit::ObjectiveMatrix& f)
{
    paretokit::Front out;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        out.push_back(paretokit::Solution{Eigen::VectorXd::Constant(1, static_cast<double>(i)), f.row(i).transpose(), true});
    }
    return out;
}

// Integer-valued coordinates in [0, levels) so that ties and equal vectors occur.
inline paretokit::ObjectiveMatrix random_points(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int levels)
{
    std::uniform_int_distribution<int> d(0, levels - 1);
    paretokit::ObjectiveMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = d(rng);
    return m;
}

// Independent O(n^2) oracle written against plain vectors.
inline bool oracle_dominates(const std::vector<double>& a, const std::vector<double>& b)
{
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

inline std::vector<std::size_t> oracle_nondominated(const paretokit::ObjectiveMatrix& m)
{
    std::vector<std::vector<double>> pts;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        pts.emplace_back();
        for (Eigen::Index j = 0; j < m.cols(); ++j) pts.back().push_back(m(i, j));
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size(); ++j) dominated = dominated || oracle_dominates(pts[j], pts[i]);
        if (!dominated) out.push_back(i);
    }
    return out;
}

// Every size-n subset of `candidates` (kept in candidate order), filtered
// by the oracle above.
inline std::set<std::vector<std::size_t>> brute_force_pareto_lists(
    const std::function<paretokit::ObjectiveVector(const std::vector<std::size_t>&)>& objectives,
    const std::vector<std::size_t>& candidates, std::size_t n)
{
    std::vector<std::vector<std::size_t>> lists;
    std::vector<bool> pick(candidates.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    do {
        std::vector<std::size_t> l;
        for (std::size_t k = 0; k < candidates.size(); ++k)
            if (pick[k]) l.push_back(candidates[k]);
        lists.push_back(l);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    paretokit::ObjectiveMatrix f(static_cast<Eigen::Index>(lists.size()), 0);
    for (std::size_t k = 0; k < lists.size(); ++k) {
        const auto v = objectives(lists[k]);
        if (k == 0) f.resize(f.rows(), v.size());
        f.row(static_cast<Eigen::Index>(k)) = v.transpose();
    }
    std::set<std::vector<std::size_t>> out;
    for (auto k : oracle_nondominated(f)) out.insert(lists[k]);
    return out;
}

} // namespace fixtures

#endif
