#include "paretokit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "paretokit/bench.hpp"
#include "paretokit/errors.hpp"
#include "paretokit/front_io.hpp"
#include "paretokit/moea.hpp"
#include "paretokit/optimizer.hpp"
#include "paretokit/problems.hpp"
#include "paretokit/random.hpp"
#include "paretokit/recsys.hpp"
#include "paretokit/scalarize.hpp"
#include "paretokit/select.hpp"

namespace paretokit {

namespace {

std::string normalize_name(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::tolower(c));
    });
    return s;
}

std::vector<double> parse_list(const std::string& text, const std::string& field)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw InvalidConfig(field + ": empty list entry");
        item = item.substr(b, e - b + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw InvalidConfig(field + ": '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw InvalidConfig(field + ": empty list");
    return out;
}

std::uint64_t parse_seed(const std::string& text, const std::string& source)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidConfig(source + ": '" + text + "' is not an unsigned integer");
    }
    return v;
}

template <typename T>
T json_as(const nlohmann::json& v, const std::string& key)
{
    try {
        if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
            if (!v.is_number_unsigned()) throw InvalidConfig(key + ": expected a non-negative integer");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw InvalidConfig(key + ": expected a number");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw InvalidConfig(key + ": expected a string");
        }
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(key + ": " + e.what());
    }
}

std::vector<double> json_list(const nlohmann::json& v, const std::string& key)
{
    if (v.is_string()) return parse_list(v.get<std::string>(), key);
    if (!v.is_array()) throw InvalidConfig(key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(json_as<double>(e, key));
    return out;
}

template <typename T>
void set_if(std::optional<T>& dst, const std::optional<T>& src)
{
    if (src) dst = src;
}

template <typename Fn>
void with_output(const std::optional<std::string>& path, std::ostream& fallback, Fn&& fn)
{
    if (!path) {
        fn(fallback);
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) throw InvalidConfig("cannot open '" + *path + "' for writing");
    fn(static_cast<std::ostream&>(file));
    if (!file) throw InvalidConfig("failed writing '" + *path + "'");
}

std::uint64_t resolve_seed(const RunConfig& cfg)
{
    if (cfg.seed) return *cfg.seed;
    if (const char* env = std::getenv("PARETO_KIT_SEED"); env != nullptr && *env != '\0') {
        return parse_seed(env, "PARETO_KIT_SEED");
    }
    return 0;
}

template <typename T>
const T& require(const std::optional<T>& v, const char* field, const char* why)
{
    if (!v) throw InvalidConfig(std::string("missing field '") + field + "' (" + why + ")");
    return *v;
}

EvolutionConfig evolution_config(const RunConfig& cfg, std::uint64_t seed)
{
    EvolutionConfig e;
    if (cfg.algorithm) e.algorithm = parse_algorithm(*cfg.algorithm);
    if (cfg.population_size) e.population_size = *cfg.population_size;
    if (cfg.generations) e.generations = *cfg.generations;
    if (cfg.crossover_rate) e.crossover_rate = *cfg.crossover_rate;
    if (cfg.mutation_rate) e.mutation_rate = *cfg.mutation_rate;
    if (cfg.sigma_share) e.sigma_share = *cfg.sigma_share;
    if (cfg.tournament_comparison_size) e.tournament_comparison_size = *cfg.tournament_comparison_size;
    if (cfg.archive_capacity) e.archive_capacity = *cfg.archive_capacity;
    if (cfg.max_evaluations) e.max_evaluations = *cfg.max_evaluations;
    e.seed = seed;
    e.validate();
    return e;
}

McdmConfig mcdm_config(const RunConfig& cfg)
{
    McdmConfig m;
    if (cfg.weights) m.weights = WeightVector(Eigen::Map<const Eigen::VectorXd>(cfg.weights->data(), static_cast<Eigen::Index>(cfg.weights->size())));
    if (cfg.preference) {
        const auto p = normalize_name(*cfg.preference);
        if (p == "usual") {
            m.preference = PreferenceFunction::usual;
        } else if (p == "linear") {
            m.preference = PreferenceFunction::linear;
        } else {
            throw InvalidConfig("preference: expected usual or linear, got '" + *cfg.preference + "'");
        }
    }
    if (cfg.linear_delta) m.linear_delta = *cfg.linear_delta;
    return m;
}

ScalarizationMethod scalarization(const RunConfig& cfg, std::size_t m, bool need_weights)
{
    const auto kind = parse_scalarization_kind(cfg.method.value_or("weighted-sum"));
    std::vector<double> w;
    if (cfg.weights) {
        w = *cfg.weights;
    } else if (need_weights) {
        (void)require(cfg.weights, "weights", "a_priori mode needs a weight vector");
    } else {
        w.assign(m, 1.0 / static_cast<double>(m));
    }
    if (w.size() != m) throw DimensionMismatch("weights has " + std::to_string(w.size()) + " entries for " +
                                               std::to_string(m) + " objectives");
    ScalarizationMethod sm(kind, WeightVector(Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()))));
    if (cfg.p) sm.p = *cfg.p;
    if (cfg.ideal) sm.ideal_mode = parse_ideal_mode(*cfg.ideal);
    if (sm.ideal_mode == IdealMode::goal) {
        const auto& g = require(cfg.goal, "goal", "ideal mode goal needs goal values");
        if (g.size() != m) throw DimensionMismatch("goal has the wrong length");
        sm.goal = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
    }
    return sm;
}

// Normalized area against (1.1, 1.1); nan for more than two objectives.
double front_hypervolume(const ObjectiveMatrix& f)
{
    if (f.rows() == 0 || f.cols() != 2) return std::numeric_limits<double>::quiet_NaN();
    return hypervolume_set(minmax_normalize(f), HypervolumeRef::nadir(Eigen::Vector2d(1.1, 1.1)));
}

void write_selection(std::ostream& out, const Selection& s, const std::string& id)
{
    out << "method,selected_id,score\n"
        << to_string(s.method) << ',' << csv_field(id) << ',' << format_real(s.scores[static_cast<Eigen::Index>(s.index)])
        << '\n';
}

// ---- commands ----------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto mode = parse_dm_mode(cfg.mode.value_or("a_priori"));
    if (mode != DmMode::a_priori) throw InvalidConfig("solve runs in a_priori mode only");
    const Problem problem = problems::by_name(require(cfg.problem, "problem", "solve needs a problem"));
    const auto method = scalarization(cfg, problem.m(), true);
    const auto seed = resolve_seed(cfg);
    const auto opt = default_optimizer(problem.n());
    const auto s = solve_scalarized(problem, method, *opt, seed);

    FrontTable t = FrontTable::from_front({s});
    t.with_method = true;
    nlohmann::json params{{"weights", *cfg.weights}};
    t.rows[0].method = std::string(to_string(method.kind));
    t.rows[0].param_json = params.dump();
    with_output(cfg.output, out, [&](std::ostream& o) { write_front_csv(o, t); });
    if (cfg.output) out << "solution x=" << format_real(s.x[0]) << (s.x.size() > 1 ? ",..." : "") << '\n';
    return 0;
}

int cmd_front(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto mode = parse_dm_mode(cfg.mode.value_or("a_posteriori"));
    if (mode == DmMode::a_priori) throw InvalidConfig("front needs mode a_posteriori or no_dm");
    if (mode == DmMode::no_dm) (void)require(cfg.selection_method, "selection_method", "no_dm mode selects automatically");
    const Problem problem = problems::by_name(require(cfg.problem, "problem", "front needs a problem"));
    const auto seed = resolve_seed(cfg);

    std::string generator = cfg.generator ? normalize_name(*cfg.generator) : (cfg.algorithm ? "moea" : "weight_sweep");
    std::optional<Algorithm> algorithm;
    if (generator != "weight_sweep" && generator != "epsilon_schedule" && generator != "nbi_nc" && generator != "moea") {
        try {
            algorithm = parse_algorithm(generator);
        } catch (const InvalidConfig&) {
            throw InvalidConfig("generator: unknown '" + *cfg.generator +
                                "' (expected weight-sweep, epsilon-schedule, nbi-nc or a MOEA name)");
        }
        generator = "moea";
    }

    FrontTable table;
    if (generator == "moea") {
        auto ecfg = evolution_config(cfg, seed);
        if (algorithm) ecfg.algorithm = *algorithm;
        const auto r = evolve(encode_real(problem), ecfg);
        table = FrontTable::from_front(r.archive.members());
        if (cfg.log_output) with_output(cfg.log_output, out, [&](std::ostream& o) { write_run_log(o, r.log); });
        if (r.budget_exceeded) err << "note: evaluation budget exceeded by the last generation\n";
    } else {
        const auto opt = default_optimizer(problem.n());
        const std::size_t grid = cfg.grid.value_or(11);
        SweepResult sweep;
        if (generator == "weight_sweep") {
            sweep = weight_sweep(problem, scalarization(cfg, problem.m(), false), grid, *opt, seed);
        } else if (generator == "epsilon_schedule") {
            sweep = epsilon_schedule(problem, cfg.kept.value_or(0), grid, *opt, seed);
        } else {
            sweep = nbi_nc_front(problem, grid, *opt, seed);
        }
        for (const auto& f : sweep.failures) err << "skipped " << f.param_json << ": " << f.message << '\n';
        table = sweep.table();
    }
    with_output(cfg.output, out, [&](std::ostream& o) { write_front_csv(o, table); });

    std::ostream& summary = cfg.output ? out : err;
    const auto front = table.front();
    const double hv = front.empty() ? 0.0 : front_hypervolume(objective_matrix(front));
    summary << "front_size=" << front.size() << " hypervolume=" << format_real(hv) << '\n';

    if (mode == DmMode::no_dm) {
        if (front.empty()) throw EmptyInput("no front to select from");
        const auto s = select_best(objective_matrix(front), parse_selection_method(*cfg.selection_method),
                                   mcdm_config(RunConfig{}));
        write_selection(summary, s, table.rows[s.index].id);
    }
    return 0;
}

int cmd_select(const RunConfig& cfg, std::ostream& out, std::ostream&)
{
    const auto& path = require(cfg.front, "front", "select needs a front CSV");
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open front file '" + path + "'");
    const auto table = read_front_csv(in);
    if (table.rows.empty()) throw EmptyInput("front file has no rows");
    const auto method = parse_selection_method(cfg.selection_method.value_or("promethee"));
    const auto s = select_best(objective_matrix(table.front()), method, mcdm_config(cfg));

    with_output(cfg.output, out, [&](std::ostream& o) { write_selection(o, s, table.rows[s.index].id); });
    if (cfg.scores_output) {
        with_output(cfg.scores_output, out, [&](std::ostream& o) {
            o << "id,score\n";
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                o << csv_field(table.rows[i].id) << ',' << format_real(s.scores[static_cast<Eigen::Index>(i)]) << '\n';
            }
        });
    }
    return 0;
}

int cmd_recsys(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const auto seed = resolve_seed(cfg);
    const std::size_t k = cfg.k.value_or(50);
    const std::size_t n = cfg.n.value_or(10);
    if (k == 0) throw InvalidConfig("K must be at least 1");
    if (n == 0 || n > k) throw InvalidN("N = " + std::to_string(n) + " must lie in [1, K = " + std::to_string(k) + "]");
    if (cfg.mode && parse_dm_mode(*cfg.mode) == DmMode::a_priori) throw InvalidConfig("recsys runs without a decision maker");

    std::optional<RatingsMatrix> data;
    const double heldout = cfg.heldout_fraction.value_or(0.2);
    if (cfg.ratings && cfg.synthetic) throw InvalidConfig("give either ratings or synthetic, not both");
    if (cfg.ratings) {
        RatingsOptions opt;
        opt.like_threshold = cfg.like_threshold;
        opt.heldout_fraction = heldout;
        opt.seed = seed;
        data = load_ratings(*cfg.ratings, opt);
    } else if (cfg.synthetic) {
        const auto dims = parse_list(*cfg.synthetic, "synthetic");
        if (dims.size() != 2 || dims[0] < 2 || dims[1] < 2 || dims[0] != std::floor(dims[0]) || dims[1] != std::floor(dims[1])) {
            throw InvalidConfig("synthetic: expected users,items with both at least 2");
        }
        data = synth_dataset(static_cast<std::size_t>(dims[0]), static_cast<std::size_t>(dims[1]), seed, 0.05, heldout);
    } else {
        throw InvalidConfig("missing field 'ratings' or 'synthetic' (recsys needs data)");
    }
    const auto& m = *data;
    const auto sim = item_similarity(m);

    RerankConfig rc;
    rc.n = n;
    rc.evolution = evolution_config(cfg, seed);
    rc.selection = parse_selection_method(cfg.selection_method.value_or("promethee"));
    rc.mcdm = mcdm_config(cfg);
    if (cfg.archive_dir) std::filesystem::create_directories(*cfg.archive_dir);

    std::size_t done = 0;
    std::size_t failed = 0;
    double precision = 0.0, diversity = 0.0, novelty = 0.0;
    with_output(cfg.output, out, [&](std::ostream& o) {
        o << "user_id,rank,item_id,f_acc,f_div,f_nov\n";
        for (std::size_t u = 0; u < m.user_count(); ++u) {
            try {
                const auto cand = cf_topk(m, sim, u, k);
                if (cand.cold_user) err << "user " << m.user_id(u) << ": no training ratings, popularity candidates\n";
                if (cand.items.size() < n) {
                    throw InvalidN("only " + std::to_string(cand.items.size()) + " unrated items");
                }
                const RecListObjectives obj(m, sim, u);
                RerankConfig ucfg = rc;
                ucfg.evolution.seed = derive_seed(seed, u);
                const auto r = rerank(obj, cand.items, ucfg);
                const auto& list = r.selected_list();
                const auto f = obj(list);
                for (std::size_t rank = 0; rank < list.size(); ++rank) {
                    o << csv_field(m.user_id(u)) << ',' << rank + 1 << ',' << csv_field(m.item_id(list[rank])) << ','
                      << format_real(f[0]) << ',' << format_real(f[1]) << ',' << format_real(f[2]) << '\n';
                }
                if (cfg.archive_dir) {
                    const auto path = (std::filesystem::path(*cfg.archive_dir) / ("archive_" + m.user_id(u) + ".csv")).string();
                    with_output(path, out, [&](std::ostream& a) {
                        a << "list,selected,item_ids,f_acc,f_div,f_nov\n";
                        for (std::size_t l = 0; l < r.lists.size(); ++l) {
                            std::string ids;
                            for (auto i : r.lists[l]) ids += (ids.empty() ? "" : " ") + m.item_id(i);
                            const auto row = static_cast<Eigen::Index>(l);
                            a << l << ',' << (l == r.selected ? 1 : 0) << ',' << csv_field(ids) << ','
                              << format_real(r.objectives(row, 0)) << ',' << format_real(r.objectives(row, 1)) << ','
                              << format_real(r.objectives(row, 2)) << '\n';
                        }
                    });
                }
                precision += obj.precision(list);
                diversity += obj.diversity(list);
                novelty += obj.novelty(list);
                ++done;
            } catch (const error& e) {
                ++failed;
                err << "user " << m.user_id(u) << ": " << e.what() << '\n';
            }
        }
    });
    const double d = done > 0 ? static_cast<double>(done) : 1.0;
    std::ostream& summary = cfg.output ? out : err;
    summary << "users=" << done << " failed=" << failed << " precision=" << format_real(precision / d)
            << " diversity=" << format_real(diversity / d) << " novelty=" << format_real(novelty / d) << '\n';
    if (done == 0) throw EmptyDataset("no user could be served");
    return 0;
}

int cmd_bench(const RunConfig& cfg, bool json, std::ostream& out, std::ostream&)
{
    const auto report = run_bench(resolve_seed(cfg));
    with_output(cfg.output, out, [&](std::ostream& o) {
        if (json) {
            write_bench_json(o, report);
        } else {
            write_bench_table(o, report);
        }
    });
    return report.passed() ? 0 : 1;
}

} // namespace

DmMode parse_dm_mode(const std::string& name)
{
    const auto n = normalize_name(name);
    if (n == "a_priori") return DmMode::a_priori;
    if (n == "a_posteriori") return DmMode::a_posteriori;
    if (n == "no_dm") return DmMode::no_dm;
    if (n == "interactive") throw Unsupported("unsupported mode 'interactive': interactive sessions are not implemented");
    throw InvalidConfig("mode: unknown '" + name + "' (expected a_priori, a_posteriori or no_dm)");
}

void RunConfig::overlay(const RunConfig& o)
{
    set_if(problem, o.problem);
    set_if(mode, o.mode);
    set_if(method, o.method);
    set_if(weights, o.weights);
    set_if(p, o.p);
    set_if(ideal, o.ideal);
    set_if(goal, o.goal);
    set_if(generator, o.generator);
    set_if(algorithm, o.algorithm);
    set_if(grid, o.grid);
    set_if(kept, o.kept);
    set_if(population_size, o.population_size);
    set_if(generations, o.generations);
    set_if(crossover_rate, o.crossover_rate);
    set_if(mutation_rate, o.mutation_rate);
    set_if(sigma_share, o.sigma_share);
    set_if(tournament_comparison_size, o.tournament_comparison_size);
    set_if(archive_capacity, o.archive_capacity);
    set_if(max_evaluations, o.max_evaluations);
    set_if(selection_method, o.selection_method);
    set_if(preference, o.preference);
    set_if(linear_delta, o.linear_delta);
    set_if(seed, o.seed);
    set_if(output, o.output);
    set_if(scores_output, o.scores_output);
    set_if(log_output, o.log_output);
    set_if(front, o.front);
    set_if(ratings, o.ratings);
    set_if(synthetic, o.synthetic);
    set_if(k, o.k);
    set_if(n, o.n);
    set_if(like_threshold, o.like_threshold);
    set_if(heldout_fraction, o.heldout_fraction);
    set_if(archive_dir, o.archive_dir);
}

RunConfig parse_run_config(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("config must be a JSON object");

    RunConfig c;
    using Setter = std::function<void(const nlohmann::json&, const std::string&)>;
    auto str = [](std::optional<std::string>& f) -> Setter { return [&f](const auto& v, const auto& k) { f = json_as<std::string>(v, k); }; };
    auto num = [](std::optional<double>& f) -> Setter { return [&f](const auto& v, const auto& k) { f = json_as<double>(v, k); }; };
    auto cnt = [](std::optional<std::size_t>& f) -> Setter { return [&f](const auto& v, const auto& k) { f = json_as<std::size_t>(v, k); }; };
    auto lst = [](std::optional<std::vector<double>>& f) -> Setter { return [&f](const auto& v, const auto& k) { f = json_list(v, k); }; };
    const std::map<std::string, Setter> fields{
        {"problem", str(c.problem)},
        {"mode", str(c.mode)},
        {"method", str(c.method)},
        {"weights", lst(c.weights)},
        {"p", num(c.p)},
        {"ideal", str(c.ideal)},
        {"goal", lst(c.goal)},
        {"generator", str(c.generator)},
        {"algorithm", str(c.algorithm)},
        {"grid", cnt(c.grid)},
        {"kept", cnt(c.kept)},
        {"population_size", cnt(c.population_size)},
        {"generations", cnt(c.generations)},
        {"crossover_rate", num(c.crossover_rate)},
        {"mutation_rate", num(c.mutation_rate)},
        {"sigma_share", num(c.sigma_share)},
        {"tournament_comparison_size", cnt(c.tournament_comparison_size)},
        {"archive_capacity", cnt(c.archive_capacity)},
        {"max_evaluations", cnt(c.max_evaluations)},
        {"selection_method", str(c.selection_method)},
        {"preference", str(c.preference)},
        {"linear_delta", num(c.linear_delta)},
        {"seed", [&c](const auto& v, const auto& k) { c.seed = json_as<std::uint64_t>(v, k); }},
        {"output", str(c.output)},
        {"scores_output", str(c.scores_output)},
        {"log_output", str(c.log_output)},
        {"front", str(c.front)},
        {"ratings", str(c.ratings)},
        {"synthetic", [&c](const auto& v, const auto& k) {
             if (v.is_array()) {
                 std::string s;
                 for (const auto& e : v) s += (s.empty() ? "" : ",") + std::to_string(json_as<std::size_t>(e, k));
                 c.synthetic = s;
             } else {
                 c.synthetic = json_as<std::string>(v, k);
             }
         }},
        {"k", cnt(c.k)},
        {"n", cnt(c.n)},
        {"like_threshold", num(c.like_threshold)},
        {"heldout_fraction", num(c.heldout_fraction)},
        {"archive_dir", str(c.archive_dir)},
    };
    for (const auto& [key, value] : j.items()) {
        const auto it = fields.find(key);
        if (it == fields.end()) throw InvalidConfig("unknown config key '" + key + "'");
        it->second(value, key);
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-objective optimization toolkit: scalarization, evolutionary fronts, "
                 "automated selection and a re-ranking recommender.",
                 "pareto_kit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pareto_kit 0.1.0");

    RunConfig flags;
    std::string config_path;
    std::optional<std::string> weights_text, goal_text;
    bool json = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration; flags override it");
        sub->add_option("--seed", flags.seed, "random seed (falls back to PARETO_KIT_SEED, then 0)");
        sub->add_option("-o,--out", flags.output, "output file (default: standard output)");
    };
    auto scalar_opts = [&](CLI::App* sub) {
        sub->add_option("--problem", flags.problem, "built-in problem: example2 or example3");
        sub->add_option("--mode", flags.mode, "a_priori, a_posteriori or no_dm");
        sub->add_option("--method", flags.method, "weighted-sum, weighted-exp-sum, weighted-metric, chebyshev, "
                                                  "exp-weighted-criterion, weighted-product");
        sub->add_option("--weights", weights_text, "comma separated weights summing to 1");
        sub->add_option("--p", flags.p, "exponent for the exponent-based methods");
        sub->add_option("--ideal", flags.ideal, "utopia, goal or origin");
        sub->add_option("--goal", goal_text, "comma separated goal values");
    };
    auto moea_opts = [&](CLI::App* sub) {
        sub->add_option("--algorithm", flags.algorithm, "vega, moga, nsga, nsga2, npga or paes");
        sub->add_option("--pop", flags.population_size, "population size");
        sub->add_option("--gens", flags.generations, "generations");
        sub->add_option("--crossover-rate", flags.crossover_rate);
        sub->add_option("--mutation-rate", flags.mutation_rate);
        sub->add_option("--sigma-share", flags.sigma_share);
        sub->add_option("--tournament-size", flags.tournament_comparison_size, "NPGA comparison set size");
        sub->add_option("--archive-capacity", flags.archive_capacity);
        sub->add_option("--max-evaluations", flags.max_evaluations, "soft evaluation budget, 0 for none");
    };
    auto mcdm_opts = [&](CLI::App* sub) {
        sub->add_option("--preference", flags.preference, "PROMETHEE preference function: usual or linear");
        sub->add_option("--delta", flags.linear_delta, "PROMETHEE linear threshold on normalized differences");
    };

    auto* solve = app.add_subcommand("solve", "single a-priori solution by scalarization");
    common(solve);
    scalar_opts(solve);

    auto* front = app.add_subcommand("front", "Pareto front by parameter sweep or evolutionary search");
    common(front);
    scalar_opts(front);
    moea_opts(front);
    front->add_option("--generator", flags.generator, "weight-sweep, epsilon-schedule, nbi-nc or a MOEA name");
    front->add_option("--grid", flags.grid, "number of sweep parameters");
    front->add_option("--kept", flags.kept, "objective minimized by the epsilon schedule (0-based)");
    front->add_option("--select", flags.selection_method, "selector used in no_dm mode");
    front->add_option("--log", flags.log_output, "per-generation log CSV for MOEA runs");

    auto* select = app.add_subcommand("select", "pick one solution from a front CSV");
    common(select);
    mcdm_opts(select);
    select->add_option("front", flags.front, "front CSV");
    select->add_option("--method,--select", flags.selection_method, "knee, hypervolume, topsis or promethee");
    select->add_option("--weights", weights_text, "objective weights for TOPSIS / PROMETHEE");
    select->add_option("--scores", flags.scores_output, "per-candidate scores CSV");

    auto* recsys = app.add_subcommand("recsys", "re-rank collaborative filtering candidates per user");
    common(recsys);
    moea_opts(recsys);
    mcdm_opts(recsys);
    recsys->add_option("--mode", flags.mode, "a_posteriori or no_dm");
    recsys->add_option("--ratings", flags.ratings, "CSV with header user_id,item_id,rating");
    recsys->add_option("--synthetic", flags.synthetic, "users,items of a generated dataset");
    recsys->add_option("--K,--k", flags.k, "candidates per user from collaborative filtering");
    recsys->add_option("--N,--n", flags.n, "recommended list length");
    recsys->add_option("--select", flags.selection_method, "selector for the final list");
    recsys->add_option("--weights", weights_text, "objective weights for the selector");
    recsys->add_option("--like-threshold", flags.like_threshold, "ratings at or above count as likes");
    recsys->add_option("--heldout-fraction", flags.heldout_fraction, "per-user share of ratings held out");
    recsys->add_option("--archive-dir", flags.archive_dir, "write archive_<user>.csv files here");

    auto* bench = app.add_subcommand("bench", "front-quality comparison on the built-in problems");
    common(bench);
    bench->add_flag("--json", json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e, out, err);
        return 2;
    }

    try {
        if (weights_text) flags.weights = parse_list(*weights_text, "weights");
        if (goal_text) flags.goal = parse_list(*goal_text, "goal");
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        cfg.overlay(flags);
        if (cfg.mode) (void)parse_dm_mode(*cfg.mode);

        if (solve->parsed()) return cmd_solve(cfg, out, err);
        if (front->parsed()) return cmd_front(cfg, out, err);
        if (select->parsed()) return cmd_select(cfg, out, err);
        if (recsys->parsed()) return cmd_recsys(cfg, out, err);
        return cmd_bench(cfg, json, out, err);
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const runtime_failure& e) {
        err << "failure: " << e.what() << '\n';
        return 3;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 3;
    }
}

} // namespace paretokit
