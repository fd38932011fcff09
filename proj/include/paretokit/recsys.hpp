#ifndef PARETOKIT_RECSYS_HPP
#define PARETOKIT_RECSYS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paretokit/core.hpp"
#include "paretokit/moea.hpp"
#include "paretokit/select.hpp"

namespace paretokit {

struct Rating {
    std::size_t user = 0;
    std::size_t item = 0;
    double value = 0.0;
    bool heldout = false;
};

/// Orders ids numerically when both are plain non-negative integers,
/// lexicographically otherwise. Users and items are indexed in this order.
[[nodiscard]] bool id_less(const std::string& a, const std::string& b);

// Sparse user x item ratings with a train / held-out tag per rating.
// Immutable once constructed.
class RatingsMatrix {
public:
    /// Ids must be unique and sorted by id_less. Throws InvalidConfig on
    /// duplicate (user, item) pairs or ratings outside [r_min, r_max].
    RatingsMatrix(std::vector<std::string> users, std::vector<std::string> items, std::vector<Rating> ratings,
                  double r_min, double r_max, double like_threshold);

    [[nodiscard]] std::size_t user_count() const noexcept { return users_.size(); }
    [[nodiscard]] std::size_t item_count() const noexcept { return items_.size(); }
    [[nodiscard]] const std::string& user_id(std::size_t u) const { return users_.at(u); }
    [[nodiscard]] const std::string& item_id(std::size_t i) const { return items_.at(i); }
    [[nodiscard]] std::optional<std::size_t> find_user(const std::string& id) const;

    [[nodiscard]] const std::vector<Rating>& ratings() const noexcept { return ratings_; }
    [[nodiscard]] double r_min() const noexcept { return r_min_; }
    [[nodiscard]] double r_max() const noexcept { return r_max_; }
    [[nodiscard]] double like_threshold() const noexcept { return like_threshold_; }

    /// Positions in ratings() of the user's TRAIN ratings, by item index.
    [[nodiscard]] const std::vector<std::size_t>& train_of(std::size_t u) const { return train_.at(u); }
    /// Items the user rated at or above the like threshold in the held-out part.
    [[nodiscard]] const std::vector<std::size_t>& heldout_likes(std::size_t u) const { return likes_.at(u); }
    /// TRAIN rating count per item.
    [[nodiscard]] const Eigen::VectorXd& popularity() const noexcept { return popularity_; }

    /// Copy with a fresh per-user split: floor(fraction * n_u) of each user's
    /// ratings are held out, chosen by a generator seeded from (seed, user).
    [[nodiscard]] RatingsMatrix with_split(double heldout_fraction, std::uint64_t seed) const;

private:
    void index();

    std::vector<std::string> users_;
    std::vector<std::string> items_;
    std::vector<Rating> ratings_;
    double r_min_;
    double r_max_;
    double like_threshold_;
    std::vector<std::vector<std::size_t>> train_;
    std::vector<std::vector<std::size_t>> likes_;
    Eigen::VectorXd popularity_;
};

struct RatingsOptions {
    std::optional<double> like_threshold; // default: midpoint of the rating scale
    std::optional<double> r_min;          // default: smallest rating in the file
    std::optional<double> r_max;          // default: largest rating in the file
    double heldout_fraction = 0.2;
    std::uint64_t seed = 0;
};

/// CSV with header user_id,item_id,rating. Throws ParseError with the 1-based
/// row number (header is row 1) and EmptyDataset when no rating is present.
[[nodiscard]] RatingsMatrix load_ratings(std::istream& in, const RatingsOptions& options = {});
[[nodiscard]] RatingsMatrix load_ratings(const std::string& path, const RatingsOptions& options = {});

void write_ratings_csv(std::ostream& out, const RatingsMatrix& matrix);

/// Latent-cluster ratings: 5 user clusters, 5 item genres, integer ratings
/// 1..5 from a cluster/genre affinity plus noise. Every user rates at least
/// one item and the overall density is `density` (rounded to whole ratings).
[[nodiscard]] RatingsMatrix synth_dataset(std::size_t users, std::size_t items, std::uint64_t seed,
                                          double density = 0.05, double heldout_fraction = 0.2);

// Item x item cosine similarity of the TRAIN rating columns. Symmetric,
// unit diagonal, zero for items without common raters.
using ItemSimilarity = Eigen::MatrixXd;

[[nodiscard]] ItemSimilarity item_similarity(const RatingsMatrix& matrix);

struct CandidateList {
    std::vector<std::size_t> items; // best first
    std::vector<double> scores;
    bool cold_user = false; // no TRAIN ratings; ranked by popularity instead
};

/// Scores every item the user has not rated in TRAIN by the similarity-weighted
/// average of the user's TRAIN ratings and keeps the best K (ties by item order).
[[nodiscard]] CandidateList cf_topk(const RatingsMatrix& matrix, const ItemSimilarity& sim, std::size_t user,
                                    std::size_t k);

// The three list objectives for one user, all minimized and all in [0, 1]:
//   f_acc = 1 - precision@N against the user's held-out likes
//   f_div = 1 - mean pairwise (1 - s(i, j)), negative similarity counted as 0
//   f_nov = 1 - mean (1 - pop(i) / max_pop)
class RecListObjectives {
public:
    RecListObjectives(const RatingsMatrix& matrix, const ItemSimilarity& sim, std::size_t user);

    [[nodiscard]] double precision(const std::vector<std::size_t>& items) const;
    [[nodiscard]] double diversity(const std::vector<std::size_t>& items) const;
    [[nodiscard]] double novelty(const std::vector<std::size_t>& items) const;
    [[nodiscard]] ObjectiveVector operator()(const std::vector<std::size_t>& items) const;

    [[nodiscard]] std::size_t user() const noexcept { return user_; }

private:
    const ItemSimilarity* sim_;
    std::size_t user_;
    std::vector<bool> liked_;
    Eigen::VectorXd popularity_share_;
};

struct RerankConfig {
    std::size_t n = 10;
    EvolutionConfig evolution;
    SelectionMethod selection = SelectionMethod::promethee;
    McdmConfig mcdm;
};

struct RerankResult {
    std::vector<std::vector<std::size_t>> lists; // archive, item indices in candidate order
    ObjectiveMatrix objectives;                  // one row per list
    std::size_t selected = 0;
    std::size_t evaluations = 0;

    [[nodiscard]] const std::vector<std::size_t>& selected_list() const { return lists.at(selected); }
};

/// Evolves N-item subsets of the candidates under binary encoding and picks
/// one archive member with the configured selector. Throws InvalidN unless
/// 1 <= N <= K.
[[nodiscard]] RerankResult rerank(const RecListObjectives& objectives, const std::vector<std::size_t>& candidates,
                                  const RerankConfig& config);

} // namespace paretokit

#endif
