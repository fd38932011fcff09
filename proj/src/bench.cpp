#include "paretokit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "paretokit/moea.hpp"
#include "paretokit/optimizer.hpp"
#include "paretokit/problems.hpp"
#include "paretokit/random.hpp"
#include "paretokit/scalarize.hpp"
#include "paretokit/select.hpp"

namespace paretokit {

ObjectiveMatrix GridFront::normalize(Eigen::Ref<const ObjectiveMatrix> f) const
{
    const Eigen::RowVectorXd range = (hi - lo).transpose().cwiseMax(std::numeric_limits<double>::min());
    return (f.rowwise() - lo.transpose()).array().rowwise() / range.array();
}

GridFront dense_grid_front(const Problem& problem, const std::vector<std::size_t>& per_axis)
{
    if (problem.m() != 2) throw Unsupported("grid fronts are bi-objective only");
    const auto n = problem.n();
    if (per_axis.size() != static_cast<std::size_t>(n)) throw DimensionMismatch("one grid size per decision axis");
    for (auto c : per_axis) {
        if (c < 2) throw InvalidConfig("grid needs at least two values per axis");
    }
    const auto& b = problem.bounds();

    // f1, f2 of every feasible grid point
    std::vector<std::pair<double, double>> all;
    std::vector<std::size_t> idx(per_axis.size(), 0);
    DecisionVector x(n);
    for (;;) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t = static_cast<double>(idx[static_cast<std::size_t>(k)]) /
                             static_cast<double>(per_axis[static_cast<std::size_t>(k)] - 1);
            x[k] = b.lower[k] + t * (b.upper[k] - b.lower[k]);
        }
        if (problem.feasible(x)) {
            const auto f = problem.objectives_at(x);
            all.emplace_back(f[0], f[1]);
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == per_axis[k]) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    if (all.empty()) throw Infeasible("no feasible grid point");

    std::sort(all.begin(), all.end());
    std::vector<std::pair<double, double>> front;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& p : all) {
        if (p.second < best_f2) {
            front.push_back(p);
            best_f2 = p.second;
        }
    }

    GridFront g;
    g.points.resize(static_cast<Eigen::Index>(front.size()), 2);
    for (std::size_t i = 0; i < front.size(); ++i) {
        g.points(static_cast<Eigen::Index>(i), 0) = front[i].first;
        g.points(static_cast<Eigen::Index>(i), 1) = front[i].second;
    }
    std::tie(g.lo, g.hi) = utopia_and_nadir(g.points);
    g.normalized = g.normalize(g.points);
    for (Eigen::Index i = 1; i < g.normalized.rows(); ++i) {
        g.spacing = std::max(g.spacing, (g.normalized.row(i) - g.normalized.row(i - 1)).norm());
    }
    return g;
}

double coverage_gap(const GridFront& reference, Eigen::Ref<const ObjectiveMatrix> found)
{
    if (found.rows() == 0) return std::numeric_limits<double>::infinity();
    if (found.cols() != reference.points.cols()) throw DimensionMismatch("found points have the wrong width");
    const ObjectiveMatrix f = reference.normalize(found);
    double gap = 0.0;
    for (Eigen::Index i = 0; i < reference.normalized.rows(); ++i) {
        const double d = (f.rowwise() - reference.normalized.row(i)).rowwise().norm().minCoeff();
        gap = std::max(gap, d);
    }
    return gap;
}

bool BenchReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const BenchCheck& c) { return c.passed; });
}

namespace {

BenchRow measure(const std::string& problem, const std::string& method, const GridFront& grid, const Front& front)
{
    BenchRow row{problem, method, front.size(), std::numeric_limits<double>::infinity(), 0.0};
    if (front.empty()) return row;
    const auto f = objective_matrix(front);
    row.gap = coverage_gap(grid, f);
    row.hypervolume = hypervolume_set(grid.normalize(f), HypervolumeRef::nadir(Eigen::Vector2d(1.1, 1.1)));
    return row;
}

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

} // namespace

BenchReport run_bench(std::uint64_t seed)
{
    BenchReport report;
    report.seed = seed;
    struct Case {
        const char* name;
        std::vector<std::size_t> grid;
    };
    const Case cases[] = {{"example2", {6001}}, {"example3", {2001, 401}}};

    for (std::size_t c = 0; c < 2; ++c) {
        const auto& cs = cases[c];
        const Problem p = problems::by_name(cs.name);
        const auto grid = dense_grid_front(p, cs.grid);
        report.grid_spacing.emplace_back(cs.name, grid.spacing);
        const auto opt = default_optimizer(p.n());
        const std::uint64_t s = derive_seed(seed, c);

        const WeightVector w = WeightVector::uniform(2);
        const auto ws = weight_sweep(p, ScalarizationMethod(ScalarizationKind::weighted_sum, w), 101, *opt, s);
        const auto cheb = weight_sweep(p, ScalarizationMethod(ScalarizationKind::chebyshev, w), 101, *opt, s);
        EvolutionConfig cfg;
        cfg.algorithm = Algorithm::nsga2;
        cfg.seed = s;
        const auto moea = evolve(encode_real(p), cfg);

        report.rows.push_back(measure(cs.name, "weighted-sum", grid, ws.front()));
        report.rows.push_back(measure(cs.name, "chebyshev", grid, cheb.front()));
        report.rows.push_back(measure(cs.name, "nsga2", grid, moea.archive.members()));
    }

    // The concave stretch of example3 is invisible to weighted sums.
    const auto& ws = report.rows[3];
    const auto& cheb = report.rows[4];
    const auto& nsga = report.rows[5];
    const double spacing = report.grid_spacing[1].second;
    report.checks.push_back({"example3 weighted-sum gap exceeds 3x grid spacing", ws.gap > 3.0 * spacing,
                             "gap " + fmt("%.6g", ws.gap) + " vs 3 x " + fmt("%.6g", spacing)});
    report.checks.push_back({"example3 chebyshev halves the weighted-sum gap", 2.0 * cheb.gap <= ws.gap,
                             "gap " + fmt("%.6g", cheb.gap) + " vs " + fmt("%.6g", ws.gap)});
    report.checks.push_back({"example3 nsga2 halves the weighted-sum gap", 2.0 * nsga.gap <= ws.gap,
                             "gap " + fmt("%.6g", nsga.gap) + " vs " + fmt("%.6g", ws.gap)});
    return report;
}

void write_bench_table(std::ostream& out, const BenchReport& report)
{
    char line[160];
    std::snprintf(line, sizeof line, "%-9s %-13s %6s %12s %12s\n", "problem", "method", "points", "gap",
                  "hypervolume");
    out << line;
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%-9s %-13s %6zu %12.6f %12.6f\n", r.problem.c_str(), r.method.c_str(),
                      r.points, r.gap, r.hypervolume);
        out << line;
    }
    for (const auto& [name, spacing] : report.grid_spacing) {
        out << "grid spacing " << name << ' ' << fmt("%.6g", spacing) << '\n';
    }
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    }
}

void write_bench_json(std::ostream& out, const BenchReport& report)
{
    nlohmann::ordered_json j;
    j["seed"] = report.seed;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        j["rows"].push_back({{"problem", r.problem},
                             {"method", r.method},
                             {"points", r.points},
                             {"gap", r.gap},
                             {"hypervolume", r.hypervolume}});
    }
    for (const auto& [name, spacing] : report.grid_spacing) j["grid_spacing"][name] = spacing;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["passed"] = report.passed();
    out << j.dump(2) << '\n';
}

} // namespace paretokit
