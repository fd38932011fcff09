#include "paretokit/moea.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "paretokit/front_io.hpp"
#include "paretokit/random.hpp"
#include "paretokit/select.hpp"

namespace paretokit {

// ---- encodings ------------------------------------------------------------

EncodingSpec EncodingSpec::binary(std::size_t length, std::size_t selected)
{
    if (length == 0 || selected == 0 || selected > length) {
        throw InvalidConfig("binary encoding needs 0 < selected <= length");
    }
    EncodingSpec s;
    s.kind = Encoding::binary;
    s.length = length;
    s.selected = selected;
    return s;
}

EncodingSpec EncodingSpec::permutation(std::size_t length, std::size_t catalogue)
{
    if (length == 0 || length > catalogue) throw InvalidConfig("permutation encoding needs 0 < length <= catalogue");
    EncodingSpec s;
    s.kind = Encoding::permutation;
    s.length = length;
    s.catalogue = catalogue;
    return s;
}

EncodingSpec EncodingSpec::real(BoxBounds bounds)
{
    if (bounds.size() == 0) throw InvalidConfig("real encoding needs at least one gene");
    EncodingSpec s;
    s.kind = Encoding::real;
    s.length = static_cast<std::size_t>(bounds.size());
    s.bounds = std::move(bounds);
    return s;
}

namespace {

Encoding kind_of(const Genome& g)
{
    return static_cast<Encoding>(g.index());
}

template <typename T>
const T& as(const Genome& g, const EncodingSpec& spec)
{
    if (kind_of(g) != spec.kind) throw InvalidGenome("genome does not match its encoding");
    return std::get<T>(g);
}

template <typename T>
T& as(Genome& g, const EncodingSpec& spec)
{
    if (kind_of(g) != spec.kind) throw InvalidGenome("genome does not match its encoding");
    return std::get<T>(g);
}

std::vector<std::size_t> selected_indices(const BinaryGenome& g)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.bits.size(); ++i) {
        if (g.bits[i]) out.push_back(i);
    }
    return out;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937_64& rng, double p)
{
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

} // namespace

void validate(const Genome& genome, const EncodingSpec& spec)
{
    switch (spec.kind) {
    case Encoding::binary: {
        const auto& g = as<BinaryGenome>(genome, spec);
        if (g.bits.size() != spec.length) throw InvalidGenome("binary genome has the wrong length");
        std::size_t ones = 0;
        for (auto b : g.bits) {
            if (b > 1) throw InvalidGenome("binary genes must be 0 or 1");
            ones += b;
        }
        if (ones != spec.selected) {
            throw InvalidGenome("popcount " + std::to_string(ones) + " != " + std::to_string(spec.selected));
        }
        break;
    }
    case Encoding::permutation: {
        const auto& g = as<PermutationGenome>(genome, spec);
        if (g.items.size() != spec.length) throw InvalidGenome("permutation genome has the wrong length");
        std::vector<bool> seen(spec.catalogue, false);
        for (auto i : g.items) {
            if (i >= spec.catalogue) throw InvalidGenome("item index out of range");
            if (seen[i]) throw InvalidGenome("duplicate item " + std::to_string(i));
            seen[i] = true;
        }
        break;
    }
    case Encoding::real: {
        const auto& g = as<RealGenome>(genome, spec);
        if (g.values.size() != spec.bounds.size()) throw InvalidGenome("real genome has the wrong length");
        if (!g.values.allFinite() || !spec.bounds.contains(g.values)) throw InvalidGenome("real genome outside its bounds");
        break;
    }
    }
}

Decoded decode(const Genome& genome, const EncodingSpec& spec)
{
    validate(genome, spec);
    switch (spec.kind) {
    case Encoding::binary: return selected_indices(std::get<BinaryGenome>(genome));
    case Encoding::permutation: return std::get<PermutationGenome>(genome).items;
    case Encoding::real: break;
    }
    return std::get<RealGenome>(genome).values;
}

DecisionVector genome_vector(const Genome& genome)
{
    return std::visit(
        [](const auto& g) -> DecisionVector {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, BinaryGenome>) {
                DecisionVector x(static_cast<Eigen::Index>(g.bits.size()));
                for (std::size_t i = 0; i < g.bits.size(); ++i) x[static_cast<Eigen::Index>(i)] = g.bits[i];
                return x;
            } else if constexpr (std::is_same_v<T, PermutationGenome>) {
                DecisionVector x(static_cast<Eigen::Index>(g.items.size()));
                for (std::size_t i = 0; i < g.items.size(); ++i) {
                    x[static_cast<Eigen::Index>(i)] = static_cast<double>(g.items[i]);
                }
                return x;
            } else {
                return g.values;
            }
        },
        genome);
}

Genome genome_from_vector(const DecisionVector& x, const EncodingSpec& spec)
{
    Genome g;
    switch (spec.kind) {
    case Encoding::binary: {
        BinaryGenome b;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] != 0.0 && x[i] != 1.0) throw InvalidGenome("binary genes must be 0 or 1");
            b.bits.push_back(static_cast<std::uint8_t>(x[i]));
        }
        g = std::move(b);
        break;
    }
    case Encoding::permutation: {
        PermutationGenome p;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (!(x[i] >= 0.0) || x[i] != std::floor(x[i])) throw InvalidGenome("item indices must be non-negative integers");
            p.items.push_back(static_cast<std::size_t>(x[i]));
        }
        g = std::move(p);
        break;
    }
    case Encoding::real: g = RealGenome{x}; break;
    }
    validate(g, spec);
    return g;
}

Genome random_genome(const EncodingSpec& spec, std::mt19937_64& rng)
{
    switch (spec.kind) {
    case Encoding::binary: {
        std::vector<std::size_t> pos(spec.length);
        std::iota(pos.begin(), pos.end(), std::size_t{0});
        std::shuffle(pos.begin(), pos.end(), rng);
        BinaryGenome g{std::vector<std::uint8_t>(spec.length, 0)};
        for (std::size_t i = 0; i < spec.selected; ++i) g.bits[pos[i]] = 1;
        return g;
    }
    case Encoding::permutation: {
        std::vector<std::size_t> items(spec.catalogue);
        std::iota(items.begin(), items.end(), std::size_t{0});
        std::shuffle(items.begin(), items.end(), rng);
        items.resize(spec.length);
        return PermutationGenome{std::move(items)};
    }
    case Encoding::real: break;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd v(spec.bounds.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = spec.bounds.lower[i] + unit(rng) * (spec.bounds.upper[i] - spec.bounds.lower[i]);
    }
    return RealGenome{spec.bounds.clamp(v)};
}

void mutate(Genome& genome, const EncodingSpec& spec, std::mt19937_64& rng)
{
    switch (spec.kind) {
    case Encoding::binary: {
        auto& g = as<BinaryGenome>(genome, spec);
        if (spec.selected == 0 || spec.selected == spec.length) return;
        // Swap k selected items for k unselected ones, k >= 1 and geometric
        // with p = 1/2, so every subset is reachable in one mutation.
        std::vector<std::size_t> on, off;
        for (std::size_t i = 0; i < g.bits.size(); ++i) (g.bits[i] ? on : off).push_back(i);
        const auto max_k = std::min(on.size(), off.size());
        std::size_t k = 1;
        while (k < max_k && coin(rng, 0.5)) ++k;
        std::shuffle(on.begin(), on.end(), rng);
        std::shuffle(off.begin(), off.end(), rng);
        for (std::size_t s = 0; s < k; ++s) {
            g.bits[on[s]] = 0;
            g.bits[off[s]] = 1;
        }
        return;
    }
    case Encoding::permutation: {
        auto& g = as<PermutationGenome>(genome, spec);
        const bool can_replace = spec.catalogue > spec.length;
        if (g.items.size() >= 2 && (!can_replace || coin(rng, 0.5))) {
            const auto i = uniform_index(rng, g.items.size());
            auto j = uniform_index(rng, g.items.size() - 1);
            if (j >= i) ++j;
            std::swap(g.items[i], g.items[j]);
        } else if (can_replace) {
            std::vector<bool> used(spec.catalogue, false);
            for (auto it : g.items) used[it] = true;
            std::vector<std::size_t> free;
            for (std::size_t it = 0; it < spec.catalogue; ++it) {
                if (!used[it]) free.push_back(it);
            }
            g.items[uniform_index(rng, g.items.size())] = free[uniform_index(rng, free.size())];
        }
        return;
    }
    case Encoding::real: {
        auto& g = as<RealGenome>(genome, spec);
        const auto n = static_cast<std::size_t>(g.values.size());
        const auto always = uniform_index(rng, n);
        const double per_gene = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (i != always && !coin(rng, per_gene)) continue;
            const auto d = static_cast<Eigen::Index>(i);
            const double sigma = 0.05 * (spec.bounds.upper[d] - spec.bounds.lower[d]);
            if (sigma > 0.0) g.values[d] += std::normal_distribution<double>(0.0, sigma)(rng);
        }
        g.values = spec.bounds.clamp(g.values);
        return;
    }
    }
}

Genome crossover(const Genome& a, const Genome& b, const EncodingSpec& spec, std::mt19937_64& rng)
{
    switch (spec.kind) {
    case Encoding::binary: {
        const auto& ga = as<BinaryGenome>(a, spec);
        const auto& gb = as<BinaryGenome>(b, spec);
        BinaryGenome child{std::vector<std::uint8_t>(spec.length, 0)};
        std::vector<std::size_t> either;
        std::size_t ones = 0;
        for (std::size_t i = 0; i < spec.length; ++i) {
            if (ga.bits[i] && gb.bits[i]) {
                child.bits[i] = 1;
                ++ones;
            } else if (ga.bits[i] || gb.bits[i]) {
                either.push_back(i);
            }
        }
        std::shuffle(either.begin(), either.end(), rng);
        for (std::size_t k = 0; ones < spec.selected; ++k, ++ones) child.bits[either[k]] = 1;
        return child;
    }
    case Encoding::permutation: {
        const auto& pa = as<PermutationGenome>(a, spec).items;
        const auto& pb = as<PermutationGenome>(b, spec).items;
        const std::size_t n = pa.size();
        auto i = uniform_index(rng, n);
        auto j = uniform_index(rng, n);
        if (i > j) std::swap(i, j);
        std::vector<std::size_t> child(n);
        std::vector<bool> used(spec.catalogue, false);
        std::vector<bool> filled(n, false);
        for (std::size_t k = i; k <= j; ++k) {
            child[k] = pa[k];
            used[pa[k]] = true;
            filled[k] = true;
        }
        // Fill the rest in b's order starting after the slice, then from a
        // when b runs out of unused items.
        std::vector<std::size_t> donors;
        for (std::size_t k = 0; k < n; ++k) donors.push_back(pb[(j + 1 + k) % n]);
        for (std::size_t k = 0; k < n; ++k) donors.push_back(pa[(j + 1 + k) % n]);
        std::size_t open = n - (j - i + 1);
        std::size_t pos = (j + 1) % n;
        for (auto item : donors) {
            if (open == 0) break;
            if (used[item]) continue;
            while (filled[pos]) pos = (pos + 1) % n;
            child[pos] = item;
            used[item] = true;
            filled[pos] = true;
            --open;
        }
        return PermutationGenome{std::move(child)};
    }
    case Encoding::real: break;
    }
    const auto& ra = as<RealGenome>(a, spec).values;
    const auto& rb = as<RealGenome>(b, spec).values;
    Eigen::VectorXd child(ra.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index i = 0; i < ra.size(); ++i) {
        const double lo = std::min(ra[i], rb[i]);
        const double hi = std::max(ra[i], rb[i]);
        const double ext = 0.5 * (hi - lo);
        child[i] = (lo - ext) + unit(rng) * (hi - lo + 2.0 * ext);
    }
    return RealGenome{spec.bounds.clamp(child)};
}

EncodedProblem encode_real(const Problem& problem)
{
    auto shared = std::make_shared<const Problem>(problem);
    EncodedProblem ep;
    ep.spec = EncodingSpec::real(problem.bounds());
    ep.m = problem.m();
    ep.evaluate = [shared](const Genome& g) { return evaluate(*shared, std::get<RealGenome>(g).values); };
    return ep;
}

EncodedProblem encode_subset(std::size_t catalogue, std::size_t selected, std::size_t m,
                             std::function<ObjectiveVector(const std::vector<std::size_t>&)> objectives)
{
    if (m < 2) throw InvalidConfig("need at least two objectives");
    EncodedProblem ep;
    ep.spec = EncodingSpec::binary(catalogue, selected);
    ep.m = m;
    ep.evaluate = [spec = ep.spec, m, objectives = std::move(objectives)](const Genome& g) {
        const auto items = std::get<std::vector<std::size_t>>(decode(g, spec));
        Solution s{genome_vector(g), objectives(items), true};
        if (s.f.size() != static_cast<Eigen::Index>(m)) throw DimensionMismatch("objective vector length");
        if (!s.f.allFinite()) throw NonFiniteObjective("list objective is not finite");
        return s;
    };
    return ep;
}

// ---- fitness and niching ----------------------------------------------------

Eigen::VectorXd niche_counts(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share)
{
    if (!(sigma_share > 0.0)) throw InvalidConfig("sigma_share must be positive");
    const Eigen::Index n = points.rows();
    Eigen::VectorXd nc = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double sh = std::max(0.0, 1.0 - (points.row(i) - points.row(j)).norm() / sigma_share);
            nc[i] += sh;
            nc[j] += sh;
        }
    }
    return nc;
}

double niche_count(Eigen::Ref<const ObjectiveVector> f, Eigen::Ref<const ObjectiveMatrix> population, double sigma_share)
{
    if (!(sigma_share > 0.0)) throw InvalidConfig("sigma_share must be positive");
    if (population.cols() != f.size()) throw DimensionMismatch("objective vector length");
    double nc = 0.0;
    for (Eigen::Index j = 0; j < population.rows(); ++j) {
        nc += std::max(0.0, 1.0 - (population.row(j).transpose() - f).norm() / sigma_share);
    }
    return nc;
}

Eigen::VectorXd population_niche_counts(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share)
{
    return niche_counts(minmax_normalize(points), sigma_share);
}

double fitness_sharing(double fitness, double niche_count)
{
    if (!(niche_count >= 1.0)) throw InvalidNicheCount("niche count " + std::to_string(niche_count) + " < 1");
    return fitness / niche_count;
}

Eigen::VectorXd moga_fitness(Eigen::Ref<const ObjectiveMatrix> points)
{
    if (points.rows() == 0) throw EmptyInput("empty population");
    const auto counts = dominator_counts(points);
    const auto n = static_cast<double>(points.rows());
    // n_k by rank r = 1 + count, so index count directly.
    std::vector<double> per_rank(static_cast<std::size_t>(points.rows()), 0.0);
    for (auto c : counts) per_rank[c] += 1.0;
    std::vector<double> before(per_rank.size(), 0.0);
    for (std::size_t k = 1; k < per_rank.size(); ++k) before[k] = before[k - 1] + per_rank[k - 1];

    Eigen::VectorXd z(points.rows());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        z[static_cast<Eigen::Index>(i)] = n - before[counts[i]] - 0.5 * (per_rank[counts[i]] - 1.0);
    }
    return z;
}

namespace {

ObjectiveMatrix rows_of(Eigen::Ref<const ObjectiveMatrix> points, const std::vector<std::size_t>& idx)
{
    ObjectiveMatrix out(static_cast<Eigen::Index>(idx.size()), points.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = points.row(static_cast<Eigen::Index>(idx[k]));
    return out;
}

} // namespace

Eigen::VectorXd nsga_fitness(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share)
{
    const auto fronts = nondominated_sort_iterative(points);
    const ObjectiveMatrix normalized = minmax_normalize(points);
    const auto count = static_cast<double>(fronts.size());
    Eigen::VectorXd z(points.rows());
    double dummy = count;
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto nc = niche_counts(rows_of(normalized, fronts[f]), sigma_share);
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            const double shared = fitness_sharing(dummy, nc[static_cast<Eigen::Index>(k)]);
            z[static_cast<Eigen::Index>(fronts[f][k])] = shared;
            lowest = std::min(lowest, shared);
        }
        const double remaining = count - static_cast<double>(f);
        dummy = lowest * (remaining - 1.0) / remaining;
    }
    return z;
}

std::vector<double> vega_probabilities(const std::vector<double>& fitness)
{
    if (fitness.empty()) throw EmptyInput("empty sub-population");
    if (fitness.size() == 1) return {1.0};
    std::vector<double> z = fitness;
    const double lo = *std::min_element(z.begin(), z.end());
    if (lo <= 0.0) {
        for (auto& v : z) v = v - lo + 1.0;
    }
    const double total = std::accumulate(z.begin(), z.end(), 0.0);
    const double norm = static_cast<double>(z.size()) - 1.0;
    std::vector<double> p;
    for (double v : z) p.push_back((1.0 - v / total) / norm);
    return p;
}

std::vector<std::size_t> vega_assign_and_select(Eigen::Ref<const ObjectiveMatrix> points, std::uint64_t seed)
{
    const auto n = static_cast<std::size_t>(points.rows());
    const auto m = static_cast<std::size_t>(points.cols());
    if (n < m) throw PopulationTooSmall("VEGA needs at least one individual per objective");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> parents;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t begin = i * n / m;
        const std::size_t end = (i + 1) * n / m;
        std::vector<double> fitness;
        for (std::size_t k = begin; k < end; ++k) {
            fitness.push_back(points(static_cast<Eigen::Index>(order[k]), static_cast<Eigen::Index>(i)));
        }
        const auto p = vega_probabilities(fitness);
        std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
        for (std::size_t k = begin; k < end; ++k) parents.push_back(order[begin + pick(rng)]);
    }
    return parents;
}

std::size_t npga_tournament(Eigen::Ref<const ObjectiveMatrix> points, std::size_t a, std::size_t b,
                            std::span<const std::size_t> g, const Eigen::VectorXd& niche)
{
    if (a == b) return a;
    auto dominated = [&](std::size_t i) {
        for (auto j : g) {
            if (dominates(points.row(static_cast<Eigen::Index>(j)), points.row(static_cast<Eigen::Index>(i)))) return true;
        }
        return false;
    };
    const bool da = dominated(a);
    const bool db = dominated(b);
    if (da != db) return da ? b : a;
    const double na = niche[static_cast<Eigen::Index>(a)];
    const double nb = niche[static_cast<Eigen::Index>(b)];
    if (na != nb) return na < nb ? a : b;
    return std::min(a, b);
}

std::size_t npga_tournament(Eigen::Ref<const ObjectiveMatrix> points, std::size_t a, std::size_t b,
                            std::span<const std::size_t> g, double sigma_share)
{
    return npga_tournament(points, a, b, g, population_niche_counts(points, sigma_share));
}

std::vector<std::size_t> elitist_survivors(Eigen::Ref<const ObjectiveMatrix> points, std::size_t count,
                                           double sigma_share)
{
    std::vector<std::size_t> kept;
    if (count >= static_cast<std::size_t>(points.rows())) {
        kept.resize(static_cast<std::size_t>(points.rows()));
        std::iota(kept.begin(), kept.end(), std::size_t{0});
        return kept;
    }
    const ObjectiveMatrix normalized = minmax_normalize(points);
    for (auto group : dominator_count_partition(points)) {
        if (kept.size() + group.size() <= count) {
            kept.insert(kept.end(), group.begin(), group.end());
            if (kept.size() == count) break;
            continue;
        }
        // Thin the boundary group; crowding counts the survivors so far too.
        std::vector<std::size_t> pool = kept;
        pool.insert(pool.end(), group.begin(), group.end());
        const ObjectiveMatrix sub = rows_of(normalized, pool);
        Eigen::VectorXd nc = niche_counts(sub, sigma_share);
        std::vector<bool> alive(pool.size(), true);
        std::size_t excess = kept.size() + group.size() - count;
        while (excess-- > 0) {
            std::size_t worst = pool.size();
            for (std::size_t k = kept.size(); k < pool.size(); ++k) {
                if (alive[k] && (worst == pool.size() || nc[static_cast<Eigen::Index>(k)] >= nc[static_cast<Eigen::Index>(worst)])) {
                    worst = k;
                }
            }
            alive[worst] = false;
            for (std::size_t k = 0; k < pool.size(); ++k) {
                if (!alive[k]) continue;
                const double d = (sub.row(static_cast<Eigen::Index>(k)) - sub.row(static_cast<Eigen::Index>(worst))).norm();
                nc[static_cast<Eigen::Index>(k)] -= std::max(0.0, 1.0 - d / sigma_share);
            }
        }
        for (std::size_t k = kept.size(); k < pool.size(); ++k) {
            if (alive[k]) kept.push_back(pool[k]);
        }
        break;
    }
    return kept;
}

// ---- archive ----------------------------------------------------------------

ParetoArchive::ParetoArchive(std::size_t capacity, double sigma_share) : capacity_(capacity), sigma_(sigma_share)
{
    if (capacity == 0) throw InvalidConfig("archive capacity must be at least 1");
    if (!(sigma_share > 0.0)) throw InvalidConfig("sigma_share must be positive");
}

bool ParetoArchive::dominated_by_member(const ObjectiveVector& f) const
{
    return std::any_of(members_.begin(), members_.end(), [&](const Solution& s) { return dominates(s.f, f); });
}

bool ParetoArchive::dominates_any_member(const ObjectiveVector& f) const
{
    return std::any_of(members_.begin(), members_.end(), [&](const Solution& s) { return dominates(f, s.f); });
}

bool ParetoArchive::insert(const Solution& candidate)
{
    if (!candidate.feasible) return false;
    for (const auto& s : members_) {
        if (s.f.size() != candidate.f.size()) throw DimensionMismatch("archive objective length");
        if (dominates(s.f, candidate.f)) return false;
        if (s.x.size() == candidate.x.size() && s.x == candidate.x) return false;
    }
    std::erase_if(members_, [&](const Solution& s) { return dominates(candidate.f, s.f); });
    members_.push_back(candidate);
    if (members_.size() <= capacity_) return true;

    const auto nc = population_niche_counts(objective_matrix(members_), sigma_);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < members_.size(); ++i) {
        if (nc[static_cast<Eigen::Index>(i)] >= nc[static_cast<Eigen::Index>(worst)]) worst = i;
    }
    const bool evicted_candidate = worst + 1 == members_.size();
    members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
    return !evicted_candidate;
}

PaesAction paes_step(Solution& parent, const Solution& child, ParetoArchive& archive)
{
    if (dominates(parent.f, child.f) || archive.dominated_by_member(child.f)) return PaesAction::discarded;
    if (dominates(child.f, parent.f)) {
        parent = child;
        archive.insert(child);
        return PaesAction::child_dominates;
    }
    if (archive.dominates_any_member(child.f)) {
        archive.insert(child);
        parent = child;
        return PaesAction::archive_replaced;
    }
    archive.insert(child);

    // Crowding of parent and child against the archive.
    Front pool;
    for (const auto& s : archive.members()) {
        if (s.x != parent.x && s.x != child.x) pool.push_back(s);
    }
    pool.push_back(parent);
    pool.push_back(child);
    const auto nc = population_niche_counts(objective_matrix(pool), archive.sigma_share());
    const auto last = static_cast<Eigen::Index>(pool.size()) - 1;
    if (nc[last] < nc[last - 1]) {
        parent = child;
        return PaesAction::moved_to_child;
    }
    return PaesAction::kept_parent;
}

// ---- driver -------------------------------------------------------------------

std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::vega: return "vega";
    case Algorithm::moga: return "moga";
    case Algorithm::nsga: return "nsga";
    case Algorithm::nsga2: return "nsga2";
    case Algorithm::npga: return "npga";
    case Algorithm::paes: return "paes";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    for (auto a : {Algorithm::vega, Algorithm::moga, Algorithm::nsga, Algorithm::nsga2, Algorithm::npga, Algorithm::paes}) {
        if (to_string(a) == name) return a;
    }
    throw InvalidConfig("unknown algorithm '" + std::string(name) + "'");
}

void EvolutionConfig::validate() const
{
    if (population_size < 2) throw PopulationTooSmall("population_size must be at least 2");
    if (generations < 1) throw InvalidConfig("generations must be at least 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw InvalidConfig("crossover_rate must lie in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw InvalidConfig("mutation_rate must lie in [0, 1]");
    if (!(sigma_share > 0.0)) throw InvalidConfig("sigma_share must be positive");
    if (tournament_comparison_size < 1) throw InvalidConfig("tournament_comparison_size must be at least 1");
    if (archive_capacity < 1) throw InvalidConfig("archive_capacity must be at least 1");
}

namespace {

struct Individual {
    Genome genome;
    Solution solution;
};

class Run {
public:
    Run(const EncodedProblem& problem, const EvolutionConfig& config)
        : problem_(problem), config_(config), rng_(config.seed),
          result_{ParetoArchive(config.archive_capacity, config.sigma_share), {}, 0, false}
    {
    }

    EvolutionResult execute()
    {
        if (config_.algorithm == Algorithm::paes) {
            paes();
        } else {
            generational();
        }
        return std::move(result_);
    }

private:
    bool out_of_budget()
    {
        if (config_.max_evaluations != 0 && result_.evaluations >= config_.max_evaluations) {
            result_.budget_exceeded = true;
            return true;
        }
        return false;
    }

    Solution evaluate(const Genome& g)
    {
        ++result_.evaluations;
        return problem_.evaluate(g);
    }

    void log(std::size_t generation)
    {
        GenerationLog entry;
        entry.generation = generation;
        entry.archive_size = result_.archive.size();
        const auto& members = result_.archive.members();
        if (members.empty()) {
            entry.best = ObjectiveVector::Constant(static_cast<Eigen::Index>(problem_.m),
                                                   std::numeric_limits<double>::quiet_NaN());
            entry.hypervolume = std::numeric_limits<double>::quiet_NaN();
        } else {
            const auto f = objective_matrix(members);
            entry.best = f.colwise().minCoeff().transpose();
            entry.hypervolume = problem_.m == 2 && reference_
                                    ? hypervolume_set(f, HypervolumeRef::nadir(*reference_))
                                    : std::numeric_limits<double>::quiet_NaN();
        }
        result_.log.push_back(std::move(entry));
    }

    static ObjectiveMatrix matrix_of(const std::vector<Individual>& pop)
    {
        ObjectiveMatrix f(static_cast<Eigen::Index>(pop.size()), pop.front().solution.f.size());
        for (std::size_t i = 0; i < pop.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = pop[i].solution.f.transpose();
        return f;
    }

    std::vector<std::size_t> roulette(const Eigen::VectorXd& fitness, std::size_t count)
    {
        std::discrete_distribution<std::size_t> pick(fitness.data(), fitness.data() + fitness.size());
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < count; ++k) out.push_back(pick(rng_));
        return out;
    }

    std::vector<std::size_t> select_parents(const std::vector<Individual>& pop)
    {
        const ObjectiveMatrix f = matrix_of(pop);
        const std::size_t n = pop.size();
        const double sigma = config_.sigma_share;
        switch (config_.algorithm) {
        case Algorithm::vega: {
            auto parents = vega_assign_and_select(f, rng_());
            std::shuffle(parents.begin(), parents.end(), rng_);
            return parents;
        }
        case Algorithm::moga: {
            Eigen::VectorXd z = moga_fitness(f);
            const auto counts = dominator_counts(f);
            const ObjectiveMatrix normalized = minmax_normalize(f);
            // Share within each rank.
            std::vector<std::vector<std::size_t>> by_rank(n);
            for (std::size_t i = 0; i < n; ++i) by_rank[counts[i]].push_back(i);
            for (const auto& group : by_rank) {
                if (group.empty()) continue;
                const auto nc = niche_counts(rows_of(normalized, group), sigma);
                for (std::size_t k = 0; k < group.size(); ++k) {
                    const auto i = static_cast<Eigen::Index>(group[k]);
                    z[i] = fitness_sharing(z[i], nc[static_cast<Eigen::Index>(k)]);
                }
            }
            return roulette(z, n);
        }
        case Algorithm::nsga: return roulette(nsga_fitness(f, sigma), n);
        case Algorithm::npga: {
            const auto niche = population_niche_counts(f, sigma);
            std::vector<std::size_t> all(n);
            std::iota(all.begin(), all.end(), std::size_t{0});
            std::vector<std::size_t> parents;
            for (std::size_t k = 0; k < n; ++k) {
                const auto a = uniform_index(rng_, n);
                auto b = uniform_index(rng_, n - 1);
                if (b >= a) ++b;
                std::vector<std::size_t> g;
                std::sample(all.begin(), all.end(), std::back_inserter(g), std::min(config_.tournament_comparison_size, n),
                            rng_);
                parents.push_back(npga_tournament(f, a, b, g, niche));
            }
            return parents;
        }
        case Algorithm::nsga2: {
            const auto rank = dominator_counts(f);
            const auto niche = population_niche_counts(f, sigma);
            std::vector<std::size_t> parents;
            for (std::size_t k = 0; k < n; ++k) {
                const auto a = uniform_index(rng_, n);
                const auto b = uniform_index(rng_, n);
                std::size_t w = std::min(a, b);
                const std::size_t other = std::max(a, b);
                if (rank[other] < rank[w] ||
                    (rank[other] == rank[w] && niche[static_cast<Eigen::Index>(other)] < niche[static_cast<Eigen::Index>(w)])) {
                    w = other;
                }
                parents.push_back(w);
            }
            return parents;
        }
        case Algorithm::paes: break;
        }
        return {};
    }

    // Returns false when the budget ran out.
    bool breed(const std::vector<Individual>& pop, const std::vector<std::size_t>& parents,
               std::vector<Individual>& children)
    {
        const auto& spec = problem_.spec;
        const std::size_t n = parents.size();
        for (std::size_t k = 0; k < n; k += 2) {
            const Genome& a = pop[parents[k]].genome;
            const Genome& b = pop[parents[(k + 1) % n]].genome;
            const bool cross = coin(rng_, config_.crossover_rate);
            std::array<Genome, 2> kids{cross ? crossover(a, b, spec, rng_) : a, cross ? crossover(b, a, spec, rng_) : b};
            for (auto& kid : kids) {
                if (children.size() == n) break;
                if (coin(rng_, config_.mutation_rate)) mutate(kid, spec, rng_);
                if (out_of_budget()) return false;
                Solution s = evaluate(kid);
                result_.archive.insert(s);
                children.push_back(Individual{std::move(kid), std::move(s)});
            }
        }
        return true;
    }

    void generational()
    {
        const std::size_t n = config_.population_size;
        if (config_.algorithm == Algorithm::vega && n < problem_.m) {
            throw PopulationTooSmall("VEGA needs at least one individual per objective");
        }
        std::vector<Individual> pop;
        for (std::size_t i = 0; i < n; ++i) {
            if (out_of_budget()) break;
            Genome g = random_genome(problem_.spec, rng_);
            Solution s = evaluate(g);
            result_.archive.insert(s);
            pop.push_back(Individual{std::move(g), std::move(s)});
        }
        if (pop.empty()) return;
        reference_ = matrix_of(pop).colwise().maxCoeff().transpose();
        log(0);
        if (pop.size() < n) return;

        const bool elitist = config_.algorithm == Algorithm::nsga2 || config_.algorithm == Algorithm::vega;
        for (std::size_t gen = 1; gen <= config_.generations; ++gen) {
            const auto parents = select_parents(pop);
            std::vector<Individual> children;
            const bool complete = breed(pop, parents, children);
            if (elitist) {
                std::vector<Individual> merged = std::move(pop);
                for (auto& c : children) merged.push_back(std::move(c));
                pop.clear();
                for (auto i : elitist_survivors(matrix_of(merged), n, config_.sigma_share)) pop.push_back(merged[i]);
            } else if (complete) {
                pop = std::move(children);
            }
            log(gen);
            if (!complete) return;
        }
    }

    void paes()
    {
        if (out_of_budget()) return;
        Genome g = random_genome(problem_.spec, rng_);
        Solution parent = evaluate(g);
        result_.archive.insert(parent);
        reference_ = parent.f;
        log(0);
        for (std::size_t gen = 1; gen <= config_.generations; ++gen) {
            for (std::size_t step = 0; step < config_.population_size; ++step) {
                if (out_of_budget()) {
                    log(gen);
                    return;
                }
                Genome child = genome_from_vector(parent.x, problem_.spec);
                mutate(child, problem_.spec, rng_);
                const Solution c = evaluate(child);
                if (c.feasible) (void)paes_step(parent, c, result_.archive);
                // The log's reference is the worst point seen in the first generation.
                if (gen == 1) *reference_ = reference_->cwiseMax(c.f);
            }
            log(gen);
        }
    }

    const EncodedProblem& problem_;
    const EvolutionConfig& config_;
    std::mt19937_64 rng_;
    EvolutionResult result_;
    std::optional<ObjectiveVector> reference_;
};

} // namespace

EvolutionResult evolve(const EncodedProblem& problem, const EvolutionConfig& config)
{
    config.validate();
    if (!problem.evaluate) throw InvalidConfig("encoded problem has no evaluator");
    return Run(problem, config).execute();
}

void write_run_log(std::ostream& out, const std::vector<GenerationLog>& log)
{
    const Eigen::Index m = log.empty() ? 0 : log.front().best.size();
    out << "generation,archive_size";
    for (Eigen::Index i = 0; i < m; ++i) out << ",best_f" << i + 1;
    out << ",hypervolume\n";
    for (const auto& e : log) {
        out << e.generation << ',' << e.archive_size;
        for (Eigen::Index i = 0; i < m; ++i) out << ',' << format_real(e.best[i]);
        out << ',' << format_real(e.hypervolume) << '\n';
    }
}

} // namespace paretokit
