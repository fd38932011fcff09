#include "paretokit/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace paretokit {

namespace {

void require_points(Eigen::Ref<const ObjectiveMatrix> points)
{
    if (points.rows() == 0) throw EmptyInput("empty front");
    if (!points.allFinite()) throw NonFiniteObjective("front contains non-finite objective values");
}

void require_ref(Eigen::Index m, const HypervolumeRef& ref)
{
    if (ref.reference.size() != m) throw DimensionMismatch("hypervolume reference has the wrong length");
    if (!ref.reference.allFinite()) throw InvalidConfig("hypervolume reference must be finite");
}

Eigen::VectorXd resolved_weights(const McdmConfig& config, Eigen::Index m)
{
    if (!config.weights) return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    if (static_cast<Eigen::Index>(config.weights->size()) != m) throw DimensionMismatch("weight vector length");
    return config.weights->values();
}

// Indices sorted by f_1, then f_2, then input index.
std::vector<std::size_t> order_by_f1(Eigen::Ref<const ObjectiveMatrix> p)
{
    std::vector<std::size_t> idx(static_cast<std::size_t>(p.rows()));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
        if (p(ia, 0) != p(ib, 0)) return p(ia, 0) < p(ib, 0);
        return p(ia, 1) < p(ib, 1);
    });
    return idx;
}

template <typename Vec>
std::size_t argmax_lowest(const Vec& v)
{
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v[i] > v[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
    }
    return best;
}

} // namespace

double hypervolume_point(Eigen::Ref<const ObjectiveVector> f, const HypervolumeRef& ref)
{
    require_ref(f.size(), ref);
    if (!f.allFinite()) throw NonFiniteObjective("hypervolume of a non-finite point");
    if (ref.orientation == HypervolumeOrientation::origin_boxes) {
        if ((f - ref.reference).minCoeff() < 0.0) {
            throw NegativeObjective("origin-anchored hypervolume needs every objective >= the reference");
        }
        return (f - ref.reference).prod();
    }
    return (ref.reference - f).cwiseMax(0.0).prod();
}

double hypervolume_set(Eigen::Ref<const ObjectiveMatrix> points, const HypervolumeRef& ref)
{
    require_points(points);
    if (points.cols() != 2) throw Unsupported("exact hypervolume is implemented for two objectives only");
    require_ref(2, ref);
    const double r1 = ref.reference[0];
    const double r2 = ref.reference[1];
    const auto idx = order_by_f1(points);

    double area = 0.0;
    if (ref.orientation == HypervolumeOrientation::origin_boxes) {
        if ((points.rowwise() - ref.reference.transpose()).minCoeff() < 0.0) {
            throw NegativeObjective("origin-anchored hypervolume needs every objective >= the reference");
        }
        // Sweep from the largest f_1 down, tracking the tallest box so far.
        double tallest = r2;
        for (std::size_t k = idx.size(); k-- > 0;) {
            const auto i = static_cast<Eigen::Index>(idx[k]);
            const double next = k == 0 ? r1 : points(static_cast<Eigen::Index>(idx[k - 1]), 0);
            tallest = std::max(tallest, points(i, 1));
            area += (points(i, 0) - next) * (tallest - r2);
        }
        return area;
    }
    // Sweep from the smallest f_1 up, tracking the lowest f_2 so far.
    double lowest = r2;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(idx[k]);
        if (points(i, 0) >= r1) break;
        lowest = std::min(lowest, points(i, 1));
        const double next = k + 1 < idx.size() ? std::min(r1, points(static_cast<Eigen::Index>(idx[k + 1]), 0)) : r1;
        area += (next - points(i, 0)) * (r2 - lowest);
    }
    return area;
}

MonteCarloEstimate hypervolume_monte_carlo(Eigen::Ref<const ObjectiveMatrix> points, const HypervolumeRef& ref,
                                           std::size_t samples, std::uint64_t seed)
{
    require_points(points);
    const Eigen::Index m = points.cols();
    require_ref(m, ref);
    if (samples == 0) throw InvalidConfig("Monte-Carlo hypervolume needs at least one sample");
    const bool origin = ref.orientation == HypervolumeOrientation::origin_boxes;
    if (origin && (points.rowwise() - ref.reference.transpose()).minCoeff() < 0.0) {
        throw NegativeObjective("origin-anchored hypervolume needs every objective >= the reference");
    }

    ObjectiveVector lo, hi;
    if (origin) {
        lo = ref.reference;
        hi = points.colwise().maxCoeff().transpose();
    } else {
        lo = points.colwise().minCoeff().transpose().cwiseMin(ref.reference);
        hi = ref.reference;
    }
    const double box = (hi - lo).prod();
    MonteCarloEstimate est;
    est.samples = samples;
    if (!(box > 0.0)) return est;

    // For two objectives a sorted suffix/prefix table makes coverage O(log n).
    std::vector<double> xs, cover;
    if (m == 2) {
        const auto idx = order_by_f1(points);
        for (auto i : idx) xs.push_back(points(static_cast<Eigen::Index>(i), 0));
        cover.resize(idx.size());
        if (origin) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = idx.size(); k-- > 0;) {
                best = std::max(best, points(static_cast<Eigen::Index>(idx[k]), 1));
                cover[k] = best;
            }
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < idx.size(); ++k) {
                best = std::min(best, points(static_cast<Eigen::Index>(idx[k]), 1));
                cover[k] = best;
            }
        }
    }
    auto covered = [&](const Eigen::VectorXd& s) {
        if (m == 2) {
            if (origin) {
                // Some point with f_1 >= s_1 and f_2 >= s_2.
                const auto it = std::lower_bound(xs.begin(), xs.end(), s[0]);
                return it != xs.end() && cover[static_cast<std::size_t>(it - xs.begin())] >= s[1];
            }
            const auto it = std::upper_bound(xs.begin(), xs.end(), s[0]);
            return it != xs.begin() && cover[static_cast<std::size_t>(it - xs.begin()) - 1] <= s[1];
        }
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            const bool in = origin ? (points.row(i).transpose().array() >= s.array()).all()
                                   : (points.row(i).transpose().array() <= s.array()).all();
            if (in) return true;
        }
        return false;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd s(m);
    std::size_t hits = 0;
    for (std::size_t n = 0; n < samples; ++n) {
        for (Eigen::Index d = 0; d < m; ++d) s[d] = lo[d] + unit(rng) * (hi[d] - lo[d]);
        hits += covered(s) ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    est.value = box * p;
    est.standard_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return est;
}

Eigen::VectorXd knee_angles(Eigen::Ref<const ObjectiveMatrix> points)
{
    require_points(points);
    if (points.cols() != 2) throw Unsupported("angle-based knee needs exactly two objectives");
    if (points.rows() < 3) throw TooFewPoints("angle-based knee needs at least three points");
    const ObjectiveMatrix p = minmax_normalize(points);
    const auto idx = order_by_f1(p);

    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(points.rows(), std::numeric_limits<double>::quiet_NaN());
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        const Eigen::Vector2d prev = p.row(static_cast<Eigen::Index>(idx[k - 1])).transpose();
        const Eigen::Vector2d cur = p.row(static_cast<Eigen::Index>(idx[k])).transpose();
        const Eigen::Vector2d next = p.row(static_cast<Eigen::Index>(idx[k + 1])).transpose();
        const Eigen::Vector2d u = prev - cur;
        const Eigen::Vector2d v = next - cur;
        double theta = pi;
        if (u.norm() > 0.0 && v.norm() > 0.0) {
            theta = std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
        }
        const Eigen::Vector2d chord = next - prev;
        const Eigen::Vector2d offset = cur - prev;
        const double cross = chord.x() * offset.y() - chord.y() * offset.x();
        alpha[static_cast<Eigen::Index>(idx[k])] = cross < 0.0 ? 2.0 * pi - theta : theta;
    }
    return alpha;
}

std::size_t knee_by_angle(Eigen::Ref<const ObjectiveMatrix> points)
{
    const auto alpha = knee_angles(points);
    std::size_t best = static_cast<std::size_t>(points.rows());
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (std::isnan(alpha[i])) continue;
        if (best == static_cast<std::size_t>(points.rows()) || alpha[i] > alpha[static_cast<Eigen::Index>(best)]) {
            best = static_cast<std::size_t>(i);
        }
    }
    return best;
}

TopsisResult topsis_select(Eigen::Ref<const ObjectiveMatrix> points, const McdmConfig& config)
{
    require_points(points);
    const Eigen::Index m = points.cols();
    const Eigen::VectorXd w = resolved_weights(config, m);
    TopsisResult r;
    for (Eigen::Index c = 0; c < m; ++c) {
        if (points.col(c).maxCoeff() == points.col(c).minCoeff()) r.dropped_objectives.push_back(static_cast<std::size_t>(c));
    }
    // After normalization the utopia is 0 and the nadir is 1 in every kept
    // objective; dropped objectives are 0 everywhere and contribute nothing.
    const ObjectiveMatrix p = minmax_normalize(points);
    Eigen::VectorXd keep = Eigen::VectorXd::Ones(m);
    for (auto c : r.dropped_objectives) keep[static_cast<Eigen::Index>(c)] = 0.0;
    const Eigen::VectorXd wk = w.cwiseProduct(keep);

    r.closeness.resize(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Eigen::ArrayXd row = p.row(i).transpose().array();
        const double d_plus = std::sqrt((wk.array() * row.square()).sum());
        const double d_minus = std::sqrt((wk.array() * (1.0 - row).square()).sum());
        r.closeness[i] = d_plus + d_minus > 0.0 ? d_minus / (d_plus + d_minus) : 0.0;
    }
    r.index = argmax_lowest(r.closeness);
    return r;
}

PrometheeResult promethee_select(Eigen::Ref<const ObjectiveMatrix> points, const McdmConfig& config)
{
    require_points(points);
    if (points.rows() < 2) throw TooFewPoints("PROMETHEE needs at least two candidates");
    if (config.preference == PreferenceFunction::linear && !(config.linear_delta > 0.0)) {
        throw InvalidConfig("linear preference threshold must be positive");
    }
    const Eigen::Index n = points.rows();
    const Eigen::Index m = points.cols();
    const Eigen::VectorXd w = resolved_weights(config, m);
    const ObjectiveMatrix p = minmax_normalize(points);

    auto pref = [&](double d) {
        if (d <= 0.0) return 0.0;
        if (config.preference == PreferenceFunction::usual) return 1.0;
        return std::min(1.0, d / config.linear_delta);
    };
    // pi(a, x): how much a is preferred to x; smaller objectives are better.
    Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index x = 0; x < n; ++x) {
            if (a == x) continue;
            double s = 0.0;
            for (Eigen::Index c = 0; c < m; ++c) s += w[c] * pref(p(x, c) - p(a, c));
            pi(a, x) = s;
        }
    }
    PrometheeResult r;
    const double scale = 1.0 / static_cast<double>(n - 1);
    r.positive_flow = pi.rowwise().sum() * scale;
    r.negative_flow = pi.colwise().sum().transpose() * scale;
    r.net_flow = r.positive_flow - r.negative_flow;
    r.index = argmax_lowest(r.net_flow);
    return r;
}

std::string_view to_string(SelectionMethod m) noexcept
{
    switch (m) {
    case SelectionMethod::knee: return "knee";
    case SelectionMethod::hypervolume: return "hypervolume";
    case SelectionMethod::topsis: return "topsis";
    case SelectionMethod::promethee: return "promethee";
    }
    return "?";
}

SelectionMethod parse_selection_method(std::string_view name)
{
    for (auto m : {SelectionMethod::knee, SelectionMethod::hypervolume, SelectionMethod::topsis,
                   SelectionMethod::promethee}) {
        if (to_string(m) == name) return m;
    }
    throw InvalidConfig("unknown selection method '" + std::string(name) + "'");
}

Selection select_best(Eigen::Ref<const ObjectiveMatrix> points, SelectionMethod method, const McdmConfig& config,
                      const std::optional<HypervolumeRef>& hv_ref)
{
    require_points(points);
    Selection s;
    s.method = method;
    switch (method) {
    case SelectionMethod::knee:
        s.scores = knee_angles(points);
        s.index = knee_by_angle(points);
        break;
    case SelectionMethod::hypervolume: {
        const auto ref = hv_ref.value_or(HypervolumeRef::origin(points.cols()));
        s.scores.resize(points.rows());
        for (Eigen::Index i = 0; i < points.rows(); ++i) s.scores[i] = hypervolume_point(points.row(i).transpose(), ref);
        s.index = argmax_lowest(s.scores);
        break;
    }
    case SelectionMethod::topsis: {
        auto r = topsis_select(points, config);
        s.scores = std::move(r.closeness);
        s.index = r.index;
        break;
    }
    case SelectionMethod::promethee: {
        if (points.rows() == 1) {
            s.scores = Eigen::VectorXd::Zero(1);
            s.index = 0;
            break;
        }
        auto r = promethee_select(points, config);
        s.scores = std::move(r.net_flow);
        s.index = r.index;
        break;
    }
    }
    return s;
}

} // namespace paretokit
