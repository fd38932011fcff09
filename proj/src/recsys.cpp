#include "paretokit/recsys.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <utility>

#include "paretokit/front_io.hpp"
#include "paretokit/random.hpp"

namespace paretokit {

namespace {

bool all_digits(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_rating(const std::string& raw, std::size_t row)
{
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc{} || ptr != last) throw ParseError(row, "rating '" + s + "' is not a number");
    if (!std::isfinite(v)) throw ParseError(row, "rating is not finite");
    return v;
}

} // namespace

bool id_less(const std::string& a, const std::string& b)
{
    if (all_digits(a) && all_digits(b)) {
        const auto za = a.find_first_not_of('0');
        const auto zb = b.find_first_not_of('0');
        const std::string ta = za == std::string::npos ? "0" : a.substr(za);
        const std::string tb = zb == std::string::npos ? "0" : b.substr(zb);
        if (ta.size() != tb.size()) return ta.size() < tb.size();
        if (ta != tb) return ta < tb;
    }
    return a < b;
}

// ---- ratings ----------------------------------------------------------------

RatingsMatrix::RatingsMatrix(std::vector<std::string> users, std::vector<std::string> items,
                             std::vector<Rating> ratings, double r_min, double r_max, double like_threshold)
    : users_(std::move(users)),
      items_(std::move(items)),
      ratings_(std::move(ratings)),
      r_min_(r_min),
      r_max_(r_max),
      like_threshold_(like_threshold)
{
    if (!(r_min_ <= r_max_)) throw InvalidConfig("rating scale has r_min > r_max");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : ratings_) {
        if (r.user >= users_.size() || r.item >= items_.size()) throw InvalidConfig("rating refers to an unknown id");
        if (r.value < r_min_ || r.value > r_max_) throw InvalidConfig("rating outside the rating scale");
        if (!seen.emplace(r.user, r.item).second) {
            throw InvalidConfig("duplicate rating for user " + users_[r.user] + ", item " + items_[r.item]);
        }
    }
    index();
}

void RatingsMatrix::index()
{
    train_.assign(users_.size(), {});
    likes_.assign(users_.size(), {});
    popularity_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(items_.size()));
    for (std::size_t k = 0; k < ratings_.size(); ++k) {
        const auto& r = ratings_[k];
        if (r.heldout) {
            if (r.value >= like_threshold_) likes_[r.user].push_back(r.item);
        } else {
            train_[r.user].push_back(k);
            popularity_[static_cast<Eigen::Index>(r.item)] += 1.0;
        }
    }
    for (auto& t : train_) {
        std::sort(t.begin(), t.end(), [&](std::size_t a, std::size_t b) { return ratings_[a].item < ratings_[b].item; });
    }
    for (auto& l : likes_) std::sort(l.begin(), l.end());
}

std::optional<std::size_t> RatingsMatrix::find_user(const std::string& id) const
{
    const auto it = std::lower_bound(users_.begin(), users_.end(), id, id_less);
    if (it == users_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - users_.begin());
}

RatingsMatrix RatingsMatrix::with_split(double heldout_fraction, std::uint64_t seed) const
{
    if (!(heldout_fraction >= 0.0 && heldout_fraction < 1.0)) {
        throw InvalidConfig("held-out fraction must lie in [0, 1)");
    }
    std::vector<std::vector<std::size_t>> per_user(users_.size());
    for (std::size_t k = 0; k < ratings_.size(); ++k) per_user[ratings_[k].user].push_back(k);

    RatingsMatrix out = *this;
    for (std::size_t u = 0; u < per_user.size(); ++u) {
        auto& pos = per_user[u];
        std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return ratings_[a].item < ratings_[b].item; });
        std::mt19937_64 rng(derive_seed(seed, u));
        std::shuffle(pos.begin(), pos.end(), rng);
        const auto held = static_cast<std::size_t>(std::floor(heldout_fraction * static_cast<double>(pos.size())));
        for (std::size_t k = 0; k < pos.size(); ++k) out.ratings_[pos[k]].heldout = k < held;
    }
    out.index();
    return out;
}

RatingsMatrix load_ratings(std::istream& in, const RatingsOptions& options)
{
    std::string line;
    if (!std::getline(in, line)) throw EmptyDataset("ratings file is empty");
    const auto header = split_csv_line(line);
    if (header.size() != 3 || trim(header[0]) != "user_id" || trim(header[1]) != "item_id" ||
        trim(header[2]) != "rating") {
        throw ParseError(1, "expected header user_id,item_id,rating");
    }

    struct Raw {
        std::string user, item;
        double value;
        std::size_t row;
    };
    std::vector<Raw> raw;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty() || trim(line) == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != 3) throw ParseError(row, "expected 3 fields, got " + std::to_string(f.size()));
        Raw r{trim(f[0]), trim(f[1]), parse_rating(f[2], row), row};
        if (r.user.empty() || r.item.empty()) throw ParseError(row, "empty id");
        raw.push_back(std::move(r));
    }
    if (raw.empty()) throw EmptyDataset("no ratings in file");

    double lo = raw.front().value;
    double hi = lo;
    for (const auto& r : raw) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    const double r_min = options.r_min.value_or(lo);
    const double r_max = options.r_max.value_or(hi);
    if (!(r_min <= r_max)) throw InvalidConfig("rating scale has r_min > r_max");

    std::vector<std::string> users, items;
    for (const auto& r : raw) {
        users.push_back(r.user);
        items.push_back(r.item);
    }
    for (auto* ids : {&users, &items}) {
        std::sort(ids->begin(), ids->end(), id_less);
        ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
    }
    const auto position = [](const std::vector<std::string>& ids, const std::string& id) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id, id_less) - ids.begin());
    };

    std::vector<Rating> ratings;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : raw) {
        if (r.value < r_min || r.value > r_max) throw ParseError(r.row, "rating outside the rating scale");
        Rating rt{position(users, r.user), position(items, r.item), r.value, false};
        if (!seen.emplace(rt.user, rt.item).second) throw ParseError(r.row, "duplicate (user_id, item_id) pair");
        ratings.push_back(rt);
    }
    const double like = options.like_threshold.value_or(0.5 * (r_min + r_max));
    RatingsMatrix m(std::move(users), std::move(items), std::move(ratings), r_min, r_max, like);
    return m.with_split(options.heldout_fraction, options.seed);
}

RatingsMatrix load_ratings(const std::string& path, const RatingsOptions& options)
{
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open ratings file '" + path + "'");
    return load_ratings(in, options);
}

void write_ratings_csv(std::ostream& out, const RatingsMatrix& matrix)
{
    out << "user_id,item_id,rating\n";
    std::vector<std::size_t> order(matrix.ratings().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& rs = matrix.ratings();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(rs[a].user, rs[a].item) < std::pair(rs[b].user, rs[b].item);
    });
    for (auto k : order) {
        out << csv_field(matrix.user_id(rs[k].user)) << ',' << csv_field(matrix.item_id(rs[k].item)) << ','
            << format_real(rs[k].value) << '\n';
    }
}

RatingsMatrix synth_dataset(std::size_t users, std::size_t items, std::uint64_t seed, double density,
                            double heldout_fraction)
{
    if (users < 2 || items < 2) throw InvalidConfig("synthetic dataset needs at least 2 users and 2 items");
    if (!(density > 0.0 && density <= 1.0)) throw InvalidConfig("density must lie in (0, 1]");
    constexpr int clusters = 5;
    std::mt19937_64 rng(seed);

    std::uniform_int_distribution<int> pick(0, clusters - 1);
    std::vector<int> cluster(users), genre(items);
    for (auto& c : cluster) c = pick(rng);
    for (auto& g : genre) g = pick(rng);

    double affinity[clusters][clusters];
    std::uniform_real_distribution<double> off(1.5, 3.2);
    for (int c = 0; c < clusters; ++c) {
        for (int g = 0; g < clusters; ++g) affinity[c][g] = c == g ? 4.3 : off(rng);
    }

    // Long-tailed item popularity so novelty has something to trade against.
    std::vector<std::size_t> rank(items);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::shuffle(rank.begin(), rank.end(), rng);
    std::vector<double> pop_weight(items);
    for (std::size_t i = 0; i < items; ++i) pop_weight[i] = std::pow(1.0 + static_cast<double>(rank[i]), -0.8);

    const auto cells = static_cast<double>(users) * static_cast<double>(items);
    auto total = static_cast<std::size_t>(std::llround(density * cells));
    total = std::clamp(total, users, users * items);
    std::vector<std::size_t> per_user(users, total / users);
    std::vector<std::size_t> order(users);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < total % users; ++k) ++per_user[order[k]];

    std::normal_distribution<double> noise(0.0, 0.7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Rating> ratings;
    ratings.reserve(total);
    std::vector<std::pair<double, std::size_t>> keys(items);
    for (std::size_t u = 0; u < users; ++u) {
        // Weighted sampling without replacement: largest log(U)/w keys win.
        for (std::size_t i = 0; i < items; ++i) {
            const double w = pop_weight[i] * (genre[i] == cluster[u] ? 4.0 : 1.0);
            double r = unit(rng);
            while (r <= 0.0) r = unit(rng);
            keys[i] = {std::log(r) / w, i};
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(per_user[u]), keys.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
        std::vector<std::size_t> chosen;
        for (std::size_t k = 0; k < per_user[u]; ++k) chosen.push_back(keys[k].second);
        std::sort(chosen.begin(), chosen.end());
        for (auto i : chosen) {
            const double v = std::clamp(std::round(affinity[cluster[u]][genre[i]] + noise(rng)), 1.0, 5.0);
            ratings.push_back(Rating{u, i, v, false});
        }
    }

    std::vector<std::string> user_ids(users), item_ids(items);
    for (std::size_t u = 0; u < users; ++u) user_ids[u] = std::to_string(u + 1);
    for (std::size_t i = 0; i < items; ++i) item_ids[i] = std::to_string(i + 1);
    RatingsMatrix m(std::move(user_ids), std::move(item_ids), std::move(ratings), 1.0, 5.0, 3.0);
    return m.with_split(heldout_fraction, derive_seed(seed, 0x5b17));
}

// ---- similarity and candidates ---------------------------------------------

ItemSimilarity item_similarity(const RatingsMatrix& matrix)
{
    const auto n = static_cast<Eigen::Index>(matrix.item_count());
    Eigen::MatrixXd dot = Eigen::MatrixXd::Zero(n, n);
    const auto& rs = matrix.ratings();
    for (std::size_t u = 0; u < matrix.user_count(); ++u) {
        const auto& train = matrix.train_of(u);
        for (std::size_t a = 0; a < train.size(); ++a) {
            const auto& ra = rs[train[a]];
            const auto ia = static_cast<Eigen::Index>(ra.item);
            dot(ia, ia) += ra.value * ra.value;
            for (std::size_t b = a + 1; b < train.size(); ++b) {
                const auto& rb = rs[train[b]];
                dot(ia, static_cast<Eigen::Index>(rb.item)) += ra.value * rb.value;
            }
        }
    }
    ItemSimilarity s = Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd norm = dot.diagonal().cwiseSqrt();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // train_of is sorted by item, so only the upper triangle was filled
            const double d = dot(i, j);
            if (d == 0.0 || norm[i] == 0.0 || norm[j] == 0.0) continue;
            const double v = std::clamp(d / (norm[i] * norm[j]), -1.0, 1.0);
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

CandidateList cf_topk(const RatingsMatrix& matrix, const ItemSimilarity& sim, std::size_t user, std::size_t k)
{
    if (user >= matrix.user_count()) throw InvalidConfig("unknown user index " + std::to_string(user));
    if (k == 0) throw InvalidConfig("K must be at least 1");
    const auto n = matrix.item_count();
    const auto& train = matrix.train_of(user);
    const auto& rs = matrix.ratings();

    CandidateList out;
    struct Scored {
        std::size_t item;
        bool evidence;
        double score;
    };
    std::vector<Scored> scored;
    if (train.empty()) {
        out.cold_user = true;
        for (std::size_t i = 0; i < n; ++i) scored.push_back({i, true, matrix.popularity()[static_cast<Eigen::Index>(i)]});
    } else {
        std::vector<bool> rated(n, false);
        for (auto p : train) rated[rs[p].item] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (rated[j]) continue;
            double num = 0.0;
            double den = 0.0;
            for (auto p : train) {
                const double s = sim(static_cast<Eigen::Index>(rs[p].item), static_cast<Eigen::Index>(j));
                num += s * rs[p].value;
                den += std::abs(s);
            }
            scored.push_back(den > 0.0 ? Scored{j, true, num / den} : Scored{j, false, 0.0});
        }
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.evidence != b.evidence) return a.evidence;
        return a.score > b.score;
    });
    if (scored.size() > k) scored.resize(k);
    for (const auto& s : scored) {
        out.items.push_back(s.item);
        out.scores.push_back(s.score);
    }
    return out;
}

// ---- list objectives ---------------------------------------------------------

RecListObjectives::RecListObjectives(const RatingsMatrix& matrix, const ItemSimilarity& sim, std::size_t user)
    : sim_(&sim), user_(user), liked_(matrix.item_count(), false)
{
    if (user >= matrix.user_count()) throw InvalidConfig("unknown user index " + std::to_string(user));
    const auto n = static_cast<Eigen::Index>(matrix.item_count());
    if (sim.rows() != n || sim.cols() != n) throw DimensionMismatch("similarity matrix does not match the catalogue");
    for (auto i : matrix.heldout_likes(user)) liked_[i] = true;
    const double max_pop = matrix.popularity().size() > 0 ? matrix.popularity().maxCoeff() : 0.0;
    popularity_share_ = max_pop > 0.0 ? Eigen::VectorXd(matrix.popularity() / max_pop) : Eigen::VectorXd::Zero(n);
}

double RecListObjectives::precision(const std::vector<std::size_t>& items) const
{
    if (items.empty()) throw InvalidN("empty recommendation list");
    std::size_t hits = 0;
    for (auto i : items) hits += liked_.at(i) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(items.size());
}

double RecListObjectives::diversity(const std::vector<std::size_t>& items) const
{
    if (items.size() < 2) return 0.0;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            const double s = (*sim_)(static_cast<Eigen::Index>(items[a]), static_cast<Eigen::Index>(items[b]));
            sum += 1.0 - std::clamp(s, 0.0, 1.0);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

double RecListObjectives::novelty(const std::vector<std::size_t>& items) const
{
    if (items.empty()) throw InvalidN("empty recommendation list");
    double sum = 0.0;
    for (auto i : items) sum += 1.0 - popularity_share_[static_cast<Eigen::Index>(i)];
    return sum / static_cast<double>(items.size());
}

ObjectiveVector RecListObjectives::operator()(const std::vector<std::size_t>& items) const
{
    ObjectiveVector f(3);
    f << 1.0 - precision(items), 1.0 - diversity(items), 1.0 - novelty(items);
    return f;
}

// ---- re-ranking --------------------------------------------------------------

RerankResult rerank(const RecListObjectives& objectives, const std::vector<std::size_t>& candidates,
                    const RerankConfig& config)
{
    const auto k = candidates.size();
    if (config.n == 0 || config.n > k) {
        throw InvalidN("N = " + std::to_string(config.n) + " with " + std::to_string(k) + " candidates");
    }
    const auto to_items = [candidates](const std::vector<std::size_t>& positions) {
        std::vector<std::size_t> items;
        items.reserve(positions.size());
        for (auto p : positions) items.push_back(candidates[p]);
        return items;
    };
    const auto problem = encode_subset(k, config.n, 3, [&objectives, to_items](const std::vector<std::size_t>& pos) {
        return objectives(to_items(pos));
    });
    const auto run = evolve(problem, config.evolution);

    RerankResult out;
    out.evaluations = run.evaluations;
    const auto& members = run.archive.members();
    out.objectives.resize(static_cast<Eigen::Index>(members.size()), 3);
    for (std::size_t r = 0; r < members.size(); ++r) {
        const auto pos = std::get<std::vector<std::size_t>>(decode(genome_from_vector(members[r].x, problem.spec), problem.spec));
        out.lists.push_back(to_items(pos));
        out.objectives.row(static_cast<Eigen::Index>(r)) = members[r].f.transpose();
    }
    out.selected = select_best(out.objectives, config.selection, config.mcdm).index;
    return out;
}

} // namespace paretokit
