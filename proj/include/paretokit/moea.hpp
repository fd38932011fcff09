#ifndef PARETOKIT_MOEA_HPP
#define PARETOKIT_MOEA_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "paretokit/core.hpp"

namespace paretokit {

// Genomes. Binary keeps a fixed popcount; a permutation genome is an ordered
// list of distinct item indices drawn from a catalogue; real genes stay in
// their box.
struct BinaryGenome {
    std::vector<std::uint8_t> bits;
};

struct PermutationGenome {
    std::vector<std::size_t> items;
};

struct RealGenome {
    Eigen::VectorXd values;
};

using Genome = std::variant<BinaryGenome, PermutationGenome, RealGenome>;

enum class Encoding { binary, permutation, real };

struct EncodingSpec {
    Encoding kind = Encoding::real;
    std::size_t length = 0;    // binary: L; permutation: list length
    std::size_t selected = 0;  // binary popcount
    std::size_t catalogue = 0; // permutation: items are drawn from [0, catalogue)
    BoxBounds bounds;          // real

    [[nodiscard]] static EncodingSpec binary(std::size_t length, std::size_t selected);
    [[nodiscard]] static EncodingSpec permutation(std::size_t length, std::size_t catalogue);
    [[nodiscard]] static EncodingSpec real(BoxBounds bounds);
};

/// Throws InvalidGenome when the genome breaks its encoding's invariants.
void validate(const Genome& genome, const EncodingSpec& spec);

/// Selected indices (binary, 0-based, ascending), the ordered list
/// (permutation), or the decision vector (real).
using Decoded = std::variant<std::vector<std::size_t>, DecisionVector>;
[[nodiscard]] Decoded decode(const Genome& genome, const EncodingSpec& spec);

/// The genome as a flat real vector; this is what archive Solutions store as x.
[[nodiscard]] DecisionVector genome_vector(const Genome& genome);
[[nodiscard]] Genome genome_from_vector(const DecisionVector& x, const EncodingSpec& spec);

[[nodiscard]] Genome random_genome(const EncodingSpec& spec, std::mt19937_64& rng);

/// Popcount-preserving swap for binary; swap or replacement for permutations;
/// Gaussian (sigma = 5% of range) for reals. The result is clipped to bounds.
void mutate(Genome& genome, const EncodingSpec& spec, std::mt19937_64& rng);

/// Binary keeps the common bits and fills from the rest; permutations use
/// order crossover; reals use BLX-0.5.
[[nodiscard]] Genome crossover(const Genome& a, const Genome& b, const EncodingSpec& spec, std::mt19937_64& rng);

// A problem seen through an encoding. `evaluate` must return x == genome_vector(g).
struct EncodedProblem {
    EncodingSpec spec;
    std::size_t m = 2;
    std::function<Solution(const Genome&)> evaluate;
};

[[nodiscard]] EncodedProblem encode_real(const Problem& problem);

/// Fixed-size subsets of [0, catalogue) under binary encoding.
[[nodiscard]] EncodedProblem encode_subset(std::size_t catalogue, std::size_t selected, std::size_t m,
                                           std::function<ObjectiveVector(const std::vector<std::size_t>&)> objectives);

/// sh(d) = max(0, 1 - d / sigma) summed over all rows, self included.
/// Distances are taken on the coordinates as given.
[[nodiscard]] Eigen::VectorXd niche_counts(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share);
[[nodiscard]] double niche_count(Eigen::Ref<const ObjectiveVector> f, Eigen::Ref<const ObjectiveMatrix> population,
                                 double sigma_share);

/// Niche counts after min-max normalizing the population.
[[nodiscard]] Eigen::VectorXd population_niche_counts(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share);

/// z / nc; throws InvalidNicheCount when nc < 1.
[[nodiscard]] double fitness_sharing(double fitness, double niche_count);

/// MOGA rank fitness, z(x) = N - sum_{k < r} n_k - 0.5 (n_r - 1), no sharing.
[[nodiscard]] Eigen::VectorXd moga_fitness(Eigen::Ref<const ObjectiveMatrix> points);

/// Dummy fitness per front: the first front starts at the number of fronts,
/// each later front starts just below the smallest shared value of the one
/// before (exactly one below it when nothing is shared). Values are shared
/// within each front.
[[nodiscard]] Eigen::VectorXd nsga_fitness(Eigen::Ref<const ObjectiveMatrix> points, double sigma_share);

/// Selection probabilities in one VEGA sub-population, smaller fitness
/// preferred. Non-positive fitness is shifted so the minimum becomes 1.
[[nodiscard]] std::vector<double> vega_probabilities(const std::vector<double>& fitness);

/// Random split into M sub-populations, each selecting its own share of
/// parents by objective i. Returns population_size parent indices.
[[nodiscard]] std::vector<std::size_t> vega_assign_and_select(Eigen::Ref<const ObjectiveMatrix> points,
                                                              std::uint64_t seed);

/// NPGA tournament of a against b using comparison set g; crowding is the
/// normalized niche count over the whole population.
[[nodiscard]] std::size_t npga_tournament(Eigen::Ref<const ObjectiveMatrix> points, std::size_t a, std::size_t b,
                                          std::span<const std::size_t> g, double sigma_share);
[[nodiscard]] std::size_t npga_tournament(Eigen::Ref<const ObjectiveMatrix> points, std::size_t a, std::size_t b,
                                          std::span<const std::size_t> g, const Eigen::VectorXd& niche);

/// Elitist survival: whole dominator-count groups in order, the group that
/// does not fit is thinned by repeatedly dropping its most crowded member.
[[nodiscard]] std::vector<std::size_t> elitist_survivors(Eigen::Ref<const ObjectiveMatrix> points, std::size_t count,
                                                         double sigma_share);

// Bounded set of mutually non-dominated feasible solutions.
class ParetoArchive {
public:
    explicit ParetoArchive(std::size_t capacity, double sigma_share = 0.1);

    /// Rejects dominated, infeasible and duplicate (same x) candidates,
    /// drops members the candidate dominates and, when over capacity, evicts
    /// the most crowded member (the later one on ties). Returns whether the
    /// candidate is a member afterwards.
    bool insert(const Solution& candidate);

    [[nodiscard]] bool dominated_by_member(const ObjectiveVector& f) const;
    [[nodiscard]] bool dominates_any_member(const ObjectiveVector& f) const;

    [[nodiscard]] const Front& members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] double sigma_share() const noexcept { return sigma_; }

private:
    std::size_t capacity_;
    double sigma_;
    Front members_;
};

enum class PaesAction {
    discarded,        // child dominated by the parent or the archive
    child_dominates,  // child replaced the parent
    archive_replaced, // child displaced archive members it dominates
    kept_parent,      // incomparable, parent is less crowded
    moved_to_child,   // incomparable, child is less crowded
};

/// One (1+1) step. `parent` is updated in place.
PaesAction paes_step(Solution& parent, const Solution& child, ParetoArchive& archive);

enum class Algorithm { vega, moga, nsga, nsga2, npga, paes };

[[nodiscard]] std::string_view to_string(Algorithm a) noexcept;
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

struct EvolutionConfig {
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t population_size = 100;
    std::size_t generations = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.3; // probability that a child is mutated
    double sigma_share = 0.1;
    std::size_t tournament_comparison_size = 10;
    std::size_t archive_capacity = 100;
    std::size_t max_evaluations = 0; // 0: no limit
    std::uint64_t seed = 0;

    void validate() const;
};

struct GenerationLog {
    std::size_t generation = 0;
    std::size_t archive_size = 0;
    ObjectiveVector best; // per-objective minimum over the archive
    double hypervolume = 0.0;
};

struct EvolutionResult {
    ParetoArchive archive;
    std::vector<GenerationLog> log;
    std::size_t evaluations = 0;
    bool budget_exceeded = false;
};

/// PAES runs population_size steps per generation. Every evaluated solution
/// is offered to the archive.
[[nodiscard]] EvolutionResult evolve(const EncodedProblem& problem, const EvolutionConfig& config);

/// generation,archive_size,best_f1..,hypervolume. The hypervolume is the
/// nadir-referenced area for two objectives, nan otherwise.
void write_run_log(std::ostream& out, const std::vector<GenerationLog>& log);

} // namespace paretokit

#endif
