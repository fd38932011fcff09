#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "paretokit/recsys.hpp"

using namespace paretokit;

namespace {

RatingsMatrix parse(const std::string& text, RatingsOptions opt = {})
{
    std::istringstream in(text);
    return load_ratings(in, opt);
}

std::string to_csv(const RatingsMatrix& m)
{
    std::ostringstream out;
    write_ratings_csv(out, m);
    return out.str();
}

// Small hand-made matrix: users u, v, w over items a, b, c, d (all TRAIN).
//   u: a=5 b=1     v: a=4 b=1 c=4     w: a=1 b=5 d=5
RatingsMatrix toy()
{
    std::vector<Rating> r = {{0, 0, 5}, {0, 1, 1}, {1, 0, 4}, {1, 1, 1}, {1, 2, 4}, {2, 0, 1}, {2, 1, 5}, {2, 3, 5}};
    return RatingsMatrix({"u", "v", "w"}, {"a", "b", "c", "d"}, r, 1.0, 5.0, 3.0);
}

double cosine(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    return d / std::sqrt(na * nb);
}

} // namespace

TEST(LoadRatings, Examples)
{
    const auto m = parse("user_id,item_id,rating\nu1,i1,4\nu1,i2,2\nu2,i1,5\n");
    EXPECT_EQ(m.ratings().size(), 3u);
    EXPECT_EQ(m.user_count(), 2u);
    EXPECT_EQ(m.item_count(), 2u);
    EXPECT_DOUBLE_EQ(m.like_threshold(), 3.5); // midpoint of the observed 2..5 scale

    EXPECT_THROW((void)parse("user_id,item_id,rating\n"), EmptyDataset);
    EXPECT_THROW((void)parse(""), EmptyDataset);
    try {
        (void)parse("user_id,item_id,rating\nu1,i1,notanumber\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
    try {
        (void)parse("user_id,item_id,rating\nu1,i1,3\nu2,i1,3\nu1,i1,4\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 4u);
    }
    EXPECT_THROW((void)parse("user,item,score\nu1,i1,3\n"), ParseError);
    EXPECT_THROW((void)parse("user_id,item_id,rating\nu1,i1\n"), ParseError);

    RatingsOptions scale;
    scale.r_min = 1.0;
    scale.r_max = 5.0;
    EXPECT_THROW((void)parse("user_id,item_id,rating\nu1,i1,6\n", scale), ParseError);
    EXPECT_DOUBLE_EQ(parse("user_id,item_id,rating\nu1,i1,5\n", scale).like_threshold(), 3.0);
}

TEST(LoadRatings, IdsSortNumericallyWhenNumeric)
{
    const auto m = parse("user_id,item_id,rating\n10,b,1\n9,a,2\n100,c,3\n");
    EXPECT_EQ(m.user_id(0), "9");
    EXPECT_EQ(m.user_id(1), "10");
    EXPECT_EQ(m.user_id(2), "100");
    EXPECT_EQ(*m.find_user("10"), 1u);
    EXPECT_FALSE(m.find_user("11").has_value());
    EXPECT_TRUE(id_less("a", "b"));
    EXPECT_TRUE(id_less("2", "10"));
    EXPECT_FALSE(id_less("10", "2"));
}

TEST(LoadRatings, HeldOutSplitIsPerUserAndSeeded)
{
    std::ostringstream csv;
    csv << "user_id,item_id,rating\n";
    for (int u = 0; u < 6; ++u)
        for (int i = 0; i < 3 + 4 * u; ++i) csv << u << ',' << i << ',' << 1 + (u + i) % 5 << '\n';
    RatingsOptions opt;
    opt.seed = 3;
    const auto a = parse(csv.str(), opt);
    const auto b = parse(csv.str(), opt);
    for (std::size_t u = 0; u < a.user_count(); ++u) {
        std::size_t total = 0, held = 0;
        for (const auto& r : a.ratings()) {
            if (r.user != u) continue;
            ++total;
            held += r.heldout ? 1 : 0;
        }
        EXPECT_EQ(held, static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(total))));
        EXPECT_EQ(a.train_of(u).size(), total - held);
    }
    for (std::size_t k = 0; k < a.ratings().size(); ++k) EXPECT_EQ(a.ratings()[k].heldout, b.ratings()[k].heldout);

    opt.seed = 4;
    const auto c = parse(csv.str(), opt);
    bool differs = false;
    for (std::size_t k = 0; k < a.ratings().size(); ++k) differs = differs || a.ratings()[k].heldout != c.ratings()[k].heldout;
    EXPECT_TRUE(differs);
}

TEST(Similarity, Examples)
{
    // Two items rated (5,5) and (4,5) by the same two users.
    std::vector<Rating> r = {{0, 0, 5}, {1, 0, 5}, {0, 1, 4}, {1, 1, 5}, {2, 2, 3}, {0, 3, 2}, {1, 3, 2}};
    const RatingsMatrix m({"1", "2", "3"}, {"1", "2", "3", "4"}, r, 1.0, 5.0, 3.0);
    const auto s = item_similarity(m);
    EXPECT_NEAR(s(0, 1), 45.0 / std::sqrt(50.0 * 41.0), 1e-12);
    EXPECT_NEAR(s(0, 1), 0.9939, 1e-4);
    EXPECT_NEAR(s(0, 3), 1.0, 1e-12); // identical direction
    EXPECT_EQ(s(0, 2), 0.0);          // no common rater
    EXPECT_EQ(s(2, 2), 1.0);
}

TEST(Similarity, SymmetricBoundedUnitDiagonal)
{
    const auto m = synth_dataset(40, 60, 5, 0.15);
    const auto s = item_similarity(m);
    EXPECT_TRUE(s.isApprox(s.transpose(), 0.0));
    EXPECT_LE(s.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_TRUE((s.diagonal().array() == 1.0).all());
}

TEST(Similarity, HeldOutRatingsAreIgnored)
{
    std::vector<Rating> r = {{0, 0, 5}, {0, 1, 5, true}, {1, 1, 4}};
    const RatingsMatrix m({"1", "2"}, {"1", "2"}, r, 1.0, 5.0, 3.0);
    EXPECT_EQ(item_similarity(m)(0, 1), 0.0);
}

TEST(CfTopK, HandComputedOrdering)
{
    const auto m = toy();
    const auto s = item_similarity(m);
    // Column vectors over (u, v, w).
    const std::vector<double> a{5, 4, 1}, b{1, 1, 5}, c{0, 4, 0}, d{0, 0, 5};
    const double sac = cosine(a, c), sbc = cosine(b, c), sad = cosine(a, d), sbd = cosine(b, d);
    const double score_c = (sac * 5 + sbc * 1) / (sac + sbc);
    const double score_d = (sad * 5 + sbd * 1) / (sad + sbd);
    ASSERT_GT(score_c, score_d);

    const auto top = cf_topk(m, s, 0, 10);
    EXPECT_FALSE(top.cold_user);
    ASSERT_EQ(top.items, (std::vector<std::size_t>{2, 3}));
    EXPECT_NEAR(top.scores[0], score_c, 1e-12);
    EXPECT_NEAR(top.scores[1], score_d, 1e-12);

    const auto one = cf_topk(m, s, 0, 1);
    EXPECT_EQ(one.items, (std::vector<std::size_t>{2}));
    EXPECT_THROW((void)cf_topk(m, s, 0, 0), InvalidConfig);
    EXPECT_THROW((void)cf_topk(m, s, 9, 1), InvalidConfig);
}

TEST(CfTopK, EdgeCases)
{
    // user 0 rated every item
    std::vector<Rating> r = {{0, 0, 5}, {0, 1, 3}, {0, 2, 4}, {1, 0, 2}};
    const RatingsMatrix full({"1", "2"}, {"1", "2", "3"}, r, 1.0, 5.0, 3.0);
    const auto s = item_similarity(full);
    EXPECT_TRUE(cf_topk(full, s, 0, 5).items.empty());
    // K beyond the catalogue: every unrated item
    EXPECT_EQ(cf_topk(full, s, 1, 50).items.size(), 2u);

    // cold user: popularity order, ties by item
    std::vector<Rating> c = {{0, 1, 5}, {1, 1, 3}, {1, 2, 4}, {2, 0, 4, true}};
    const RatingsMatrix cold({"1", "2", "3"}, {"1", "2", "3"}, c, 1.0, 5.0, 3.0);
    const auto top = cf_topk(cold, item_similarity(cold), 2, 3);
    EXPECT_TRUE(top.cold_user);
    EXPECT_EQ(top.items, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Objectives, HandValues)
{
    // user 2 holds out a liked item 0 and a disliked item 3
    std::vector<Rating> r = {{0, 0, 5}, {0, 1, 5}, {1, 1, 4}, {1, 2, 4}, {2, 4, 4}, {2, 0, 5, true}, {2, 3, 1, true}};
    const RatingsMatrix m({"1", "2", "3"}, {"1", "2", "3", "4", "5"}, r, 1.0, 5.0, 3.0);
    const auto s = item_similarity(m);
    const RecListObjectives obj(m, s, 2);
    EXPECT_DOUBLE_EQ(obj.precision({0, 3}), 0.5);
    EXPECT_DOUBLE_EQ(obj.precision({1, 2}), 0.0);
    // popularity: item 1 rated twice in TRAIN, items 0, 2, 4 once, item 3 never
    EXPECT_DOUBLE_EQ(obj.novelty({1, 3}), 0.5 * ((1 - 1.0) + (1 - 0.0)));
    EXPECT_DOUBLE_EQ(obj.novelty({0, 2}), 0.5);
    EXPECT_DOUBLE_EQ(obj.diversity({0, 2}), 1.0);
    EXPECT_NEAR(obj.diversity({0, 1, 2}), (3.0 - s(0, 1) - s(0, 2) - s(1, 2)) / 3.0, 1e-15);
    const auto f = obj({0, 3});
    EXPECT_DOUBLE_EQ(f[0], 0.5);
    EXPECT_THROW((void)obj({}), InvalidN);
}

TEST(Objectives, AlwaysInUnitInterval)
{
    const auto m = synth_dataset(50, 80, 9, 0.1);
    const auto s = item_similarity(m);
    std::mt19937_64 rng(1);
    std::vector<std::size_t> all(m.item_count());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int t = 0; t < 2000; ++t) {
        const RecListObjectives obj(m, s, static_cast<std::size_t>(t) % m.user_count());
        std::shuffle(all.begin(), all.end(), rng);
        const std::vector<std::size_t> list(all.begin(), all.begin() + 1 + t % 15);
        const auto f = obj(list);
        for (Eigen::Index k = 0; k < 3; ++k) {
            ASSERT_GE(f[k], 0.0);
            ASSERT_LE(f[k], 1.0);
        }
    }
}

TEST(Synthetic, DeterministicDensityCoverage)
{
    const auto a = synth_dataset(200, 500, 42);
    const auto b = synth_dataset(200, 500, 42);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_NE(to_csv(a), to_csv(synth_dataset(200, 500, 43)));

    const double density = static_cast<double>(a.ratings().size()) / (200.0 * 500.0);
    EXPECT_NEAR(density, 0.05, 0.01);
    std::vector<int> per_user(200, 0);
    for (const auto& r : a.ratings()) {
        ++per_user[r.user];
        EXPECT_GE(r.value, 1.0);
        EXPECT_LE(r.value, 5.0);
    }
    for (auto c : per_user) EXPECT_GE(c, 1);

    // tiny catalogue still gives every user a rating
    const auto small = synth_dataset(30, 2, 1, 0.01);
    std::set<std::size_t> users;
    for (const auto& r : small.ratings()) users.insert(r.user);
    EXPECT_EQ(users.size(), 30u);
    EXPECT_THROW((void)synth_dataset(1, 5, 0), InvalidConfig);
}

TEST(Synthetic, CsvRoundTrip)
{
    const auto a = synth_dataset(20, 30, 7, 0.2);
    RatingsOptions opt;
    opt.r_min = 1.0;
    opt.r_max = 5.0;
    const auto b = parse(to_csv(a), opt);
    EXPECT_EQ(to_csv(a), to_csv(b));
}

TEST(Rerank, BruteForceEquivalenceAllAlgorithms)
{
    const auto m = synth_dataset(40, 60, 21, 0.2);
    const auto s = item_similarity(m);
    std::size_t checked = 0;
    for (std::size_t u = 0; u < m.user_count() && checked < 3; ++u) {
        if (m.heldout_likes(u).empty()) continue;
        ++checked;
        const RecListObjectives obj(m, s, u);
        const auto cand = cf_topk(m, s, u, 5).items;
        ASSERT_EQ(cand.size(), 5u);
        const auto expected = fixtures::brute_force_pareto_lists(std::cref(obj), cand, 2);
        for (auto algo : {Algorithm::vega, Algorithm::moga, Algorithm::nsga, Algorithm::nsga2, Algorithm::npga,
                          Algorithm::paes}) {
            RerankConfig cfg;
            cfg.n = 2;
            cfg.evolution.algorithm = algo;
            cfg.evolution.population_size = 20;
            cfg.evolution.generations = 30;
            cfg.evolution.seed = 5;
            const auto r = rerank(obj, cand, cfg);
            std::set<std::vector<std::size_t>> got(r.lists.begin(), r.lists.end());
            EXPECT_EQ(got, expected) << to_string(algo) << " user " << u;
            for (Eigen::Index i = 0; i < r.objectives.rows(); ++i)
                for (Eigen::Index j = 0; j < r.objectives.rows(); ++j)
                    if (i != j) EXPECT_FALSE(dominates(r.objectives.row(i), r.objectives.row(j)));
            EXPECT_LT(r.selected, r.lists.size());
        }
    }
    EXPECT_EQ(checked, 3u);
}

TEST(Rerank, IdenticalItemsCollapseToAccuracy)
{
    // users 0 and 1 rate items 0..4 identically; user 2 holds out likes on 1 and 3
    std::vector<Rating> r;
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t i = 0; i < 5; ++i) r.push_back({u, i, 4});
    r.push_back({2, 5, 4});
    r.push_back({2, 1, 5, true});
    r.push_back({2, 3, 5, true});
    const RatingsMatrix m({"1", "2", "3"}, {"1", "2", "3", "4", "5", "6"}, r, 1.0, 5.0, 3.0);
    const auto s = item_similarity(m);
    const RecListObjectives obj(m, s, 2);
    RerankConfig cfg;
    cfg.n = 2;
    cfg.evolution.population_size = 20;
    cfg.evolution.generations = 20;
    const auto res = rerank(obj, {0, 1, 2, 3, 4}, cfg);
    ASSERT_EQ(res.lists.size(), 1u);
    EXPECT_EQ(res.lists[0], (std::vector<std::size_t>{1, 3}));
    EXPECT_EQ(res.selected_list(), (std::vector<std::size_t>{1, 3}));
}

TEST(Rerank, InvalidNAndDeterminism)
{
    const auto m = synth_dataset(30, 50, 3, 0.2);
    const auto s = item_similarity(m);
    const RecListObjectives obj(m, s, 0);
    const auto cand = cf_topk(m, s, 0, 8).items;
    RerankConfig cfg;
    cfg.n = 9;
    EXPECT_THROW((void)rerank(obj, cand, cfg), InvalidN);
    cfg.n = 0;
    EXPECT_THROW((void)rerank(obj, cand, cfg), InvalidN);

    cfg.n = 3;
    cfg.evolution.population_size = 20;
    cfg.evolution.generations = 15;
    cfg.evolution.seed = 77;
    const auto a = rerank(obj, cand, cfg);
    const auto b = rerank(obj, cand, cfg);
    EXPECT_EQ(a.lists, b.lists);
    EXPECT_EQ(a.selected, b.selected);
    for (const auto& l : a.lists) {
        EXPECT_EQ(l.size(), 3u);
        // items come back in candidate order
        std::vector<std::size_t> rank;
        for (auto i : l) rank.push_back(static_cast<std::size_t>(std::find(cand.begin(), cand.end(), i) - cand.begin()));
        EXPECT_TRUE(std::is_sorted(rank.begin(), rank.end()));
    }
}
