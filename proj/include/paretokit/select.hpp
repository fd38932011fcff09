#ifndef PARETOKIT_SELECT_HPP
#define PARETOKIT_SELECT_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "paretokit/core.hpp"
#include "paretokit/scalarize.hpp"

namespace paretokit {

enum class HypervolumeOrientation {
    origin_boxes,   // boxes between the reference (origin) and each point
    standard_nadir, // boxes between each point and a reference beyond the nadir
};

struct HypervolumeRef {
    ObjectiveVector reference;
    HypervolumeOrientation orientation = HypervolumeOrientation::origin_boxes;

    [[nodiscard]] static HypervolumeRef origin(Eigen::Index m)
    {
        return {ObjectiveVector::Zero(m), HypervolumeOrientation::origin_boxes};
    }
    [[nodiscard]] static HypervolumeRef nadir(ObjectiveVector ref)
    {
        return {std::move(ref), HypervolumeOrientation::standard_nadir};
    }
};

/// Volume of the single box spanned by f and the reference.
/// Origin orientation throws NegativeObjective when f lies below the reference.
[[nodiscard]] double hypervolume_point(Eigen::Ref<const ObjectiveVector> f, const HypervolumeRef& ref);

/// Exact area of the union of boxes, M = 2 only (Unsupported otherwise).
[[nodiscard]] double hypervolume_set(Eigen::Ref<const ObjectiveMatrix> points, const HypervolumeRef& ref);

struct MonteCarloEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Uniform sampling of the bounding box of the union; any M.
[[nodiscard]] MonteCarloEstimate hypervolume_monte_carlo(Eigen::Ref<const ObjectiveMatrix> points,
                                                         const HypervolumeRef& ref, std::size_t samples,
                                                         std::uint64_t seed);

/// Index of the knee: the interior point with the largest reflex angle after
/// min-max normalization and sorting by f_1. Points bulging towards the
/// utopia get 2 pi minus their interior angle.
[[nodiscard]] std::size_t knee_by_angle(Eigen::Ref<const ObjectiveMatrix> points);

/// Reflex angle per input row (radians); endpoints get NaN.
[[nodiscard]] Eigen::VectorXd knee_angles(Eigen::Ref<const ObjectiveMatrix> points);

enum class PreferenceFunction { usual, linear };

struct McdmConfig {
    std::optional<WeightVector> weights; // uniform when empty
    PreferenceFunction preference = PreferenceFunction::linear;
    double linear_delta = 1.0; // on normalized differences
};

struct TopsisResult {
    std::size_t index = 0;
    Eigen::VectorXd closeness;
    std::vector<std::size_t> dropped_objectives; // constant over the front
};

[[nodiscard]] TopsisResult topsis_select(Eigen::Ref<const ObjectiveMatrix> points, const McdmConfig& config = {});

struct PrometheeResult {
    std::size_t index = 0;
    Eigen::VectorXd net_flow; // phi = phi+ - phi-
    Eigen::VectorXd positive_flow;
    Eigen::VectorXd negative_flow;
};

[[nodiscard]] PrometheeResult promethee_select(Eigen::Ref<const ObjectiveMatrix> points, const McdmConfig& config = {});

enum class SelectionMethod { knee, hypervolume, topsis, promethee };

[[nodiscard]] std::string_view to_string(SelectionMethod m) noexcept;
[[nodiscard]] SelectionMethod parse_selection_method(std::string_view name);

struct Selection {
    SelectionMethod method = SelectionMethod::promethee;
    std::size_t index = 0;
    Eigen::VectorXd scores; // per candidate; higher is better
};

/// Uniform entry point used by the CLI and the recommender. Hypervolume
/// selection maximizes the single-point volume against `hv_ref`, defaulting
/// to the origin.
[[nodiscard]] Selection select_best(Eigen::Ref<const ObjectiveMatrix> points, SelectionMethod method,
                                    const McdmConfig& config = {},
                                    const std::optional<HypervolumeRef>& hv_ref = std::nullopt);

} // namespace paretokit

#endif
