// slamsafe CLI: map generation, policy training, and the evaluation
// harness. All sub-commands are deterministic: a fixed --seed reproduces
// every output file byte for byte.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slamsafe/action_filter.hpp"
#include "slamsafe/csv.hpp"
#include "slamsafe/errors.hpp"
#include "slamsafe/experiment.hpp"
#include "slamsafe/map_io.hpp"
#include "slamsafe/mapgen.hpp"
#include "slamsafe/qlearn.hpp"
#include "slamsafe/svm.hpp"

namespace fs = std::filesystem;
using namespace slamsafe;

namespace {

// Relative output paths are joined onto $SLAMSAFE_OUT when it is set.
std::string resolve_out(const std::string& p) {
    const char* root = std::getenv("SLAMSAFE_OUT");
    const fs::path path(p);
    if (root != nullptr && *root != '\0' && path.is_relative())
        return (fs::path(root) / path).string();
    return p;
}

std::vector<WorldMap> load_maps(const std::vector<std::string>& files) {
    if (files.empty()) throw ConfigError("at least one map file is required");
    std::vector<WorldMap> maps;
    maps.reserve(files.size());
    for (const auto& f : files) maps.push_back(load_map(f));
    return maps;
}

int cmd_genmap(std::uint64_t seed, const std::string& style, const std::string& out,
               double rich, double poor) {
    TextureProfile profile;
    profile.rich_density = rich;
    profile.poor_density = poor;
    const WorldMap map = generate_map(seed, style_from_string(style), profile);
    const std::string path = resolve_out(out);
    if (const fs::path dir = fs::path(path).parent_path(); !dir.empty())
        fs::create_directories(dir);
    save_map(map, path);
    std::cout << "wrote " << path << " (" << map.name << ", " << map.landmarks.size()
              << " landmarks, " << map.walls.size() << " walls)\n";
    return 0;
}

int cmd_train(const std::vector<std::string>& map_files, std::int64_t steps, double alpha,
              double gamma, double eps_incr, double w_heading, std::uint64_t seed,
              const std::string& out, double oracle_low, double oracle_high,
              double oracle_ratio, std::int64_t label_min, double label_rate,
              std::int64_t min_visits) {
    const auto maps = load_maps(map_files);
    const CameraModel cam;
    const BreakageModel oracle = calibrate(oracle_low, oracle_high, oracle_ratio, seed);

    TrainConfig cfg;
    cfg.hyperparams.alpha = alpha;
    cfg.hyperparams.gamma = gamma;
    cfg.schedule.increment = eps_incr;
    cfg.weights.w2 = w_heading;
    cfg.steps_budget = steps;
    cfg.seed = seed;

    const TrainResult res = train(maps, cam, oracle, cfg);

    QTableMeta meta;
    meta.weights = cfg.weights;
    meta.schedule = cfg.schedule;
    meta.oracle = oracle;
    meta.seed = seed;
    meta.steps = 0;
    meta.min_visits = min_visits;
    for (const auto& ep : res.episodes) meta.steps += ep.steps;
    try {
        meta.threshold =
            choose_threshold(res.table, aggregate_cell_labels(res.samples, label_min, label_rate));
    } catch (const DegenerateError&) {
        // Single-class training data (e.g. a tiny run with no breakages):
        // keep the default operating threshold.
    }

    const fs::path dir(resolve_out(out));
    fs::create_directories(dir);
    save_qtable((dir / "qtable.json").string(), res.table, meta);
    save_train_log((dir / "train_log.csv").string(), res.episodes);
    save_samples((dir / "samples.csv").string(), res.samples);

    // Supervised baseline trained on the same experience. SMO cost grows
    // quadratically, so long runs are thinned by a deterministic stride.
    std::vector<SvmSample> svm_data;
    const std::size_t stride = std::max<std::size_t>(1, res.samples.size() / 3000);
    for (std::size_t i = 0; i < res.samples.size(); i += stride)
        svm_data.push_back({res.samples[i].feats, res.samples[i].phi});
    bool svm_written = false;
    try {
        const KernelClassifier clf = svm_train(svm_data, SvmParams{});
        save_svm((dir / "svm.json").string(), clf);
        svm_written = true;
    } catch (const DegenerateError&) {
        std::cerr << "warning: single-class training data, skipping svm.json\n";
    }

    std::cout << "trained " << res.episodes.size() << " episodes / " << meta.steps
              << " steps on " << maps.size() << " map(s)\n"
              << "filter threshold " << meta.threshold << "\n"
              << "wrote " << (dir / "qtable.json").string() << ", train_log.csv, samples.csv"
              << (svm_written ? ", svm.json" : "") << "\n";
    return 0;
}

int cmd_eval_breakage(const std::vector<std::string>& map_files,
                      const std::vector<std::string>& policies, int episodes, int step_cap,
                      const std::string& qtable, const std::string& svm, std::uint64_t seed,
                      const std::string& out, double oracle_low, double oracle_high,
                      double oracle_ratio) {
    const auto maps = load_maps(map_files);
    const CameraModel cam;
    const BreakageModel oracle = calibrate(oracle_low, oracle_high, oracle_ratio, seed);

    BreakageEvalConfig cfg;
    cfg.policies = policies;
    cfg.episodes = episodes;
    cfg.step_cap = step_cap;
    cfg.seed = seed;
    cfg.artifacts = {qtable, svm};

    const auto rows = eval_breakage(maps, cam, oracle, cfg);
    const fs::path dir(resolve_out(out));
    fs::create_directories(dir);
    save_breakage_csv((dir / "breakage.csv").string(), rows);
    for (const auto& r : rows)
        std::cout << r.policy << ": mean " << r.mean_steps << " steps (stderr "
                  << r.stderr_steps << ", n=" << r.episodes << ")\n";
    std::cout << "wrote " << (dir / "breakage.csv").string() << "\n";
    return 0;
}

int cmd_eval_goal(const std::string& config_path) {
    const ExperimentConfig cfg = load_experiment_config(config_path);
    const auto maps = load_maps(cfg.map_files);
    const CameraModel cam;
    const BreakageModel oracle = calibrate(cfg.oracle_low, cfg.oracle_high, cfg.oracle_ratio,
                                           cfg.seed);

    const auto rows = run_goal_trials(maps, cam, oracle, cfg.policies, cfg.artifacts,
                                      cfg.trials_per_cell, cfg.seed, PlannerConfig{});
    const fs::path dir(resolve_out(cfg.out_dir));
    fs::create_directories(dir);
    save_results_csv((dir / "results.csv").string(), rows);
    const auto summary = summarize(rows);
    save_summary_csv((dir / "summary.csv").string(), summary);

    for (const auto& s : summary)
        std::cout << s.map_id << " / " << s.policy << ": " << s.successes << "/" << s.trials
                  << " success (" << fmt_fixed(s.success_pct, 1) << "%)\n";
    std::cout << "wrote " << (dir / "results.csv").string() << " and summary.csv\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& in_dirs, const std::string& out) {
    std::vector<std::string> resolved;
    resolved.reserve(in_dirs.size());
    for (const auto& d : in_dirs) resolved.push_back(resolve_out(d));
    compare_runs(resolved, resolve_out(out));
    std::cout << "wrote plot data to " << resolve_out(out) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slamsafe: tracking-failure-aware navigation simulator"};
    app.require_subcommand(1);

    // genmap
    auto* genmap = app.add_subcommand("genmap", "generate a deterministic world map");
    std::uint64_t gm_seed = 1;
    std::string gm_style = "corner";
    std::string gm_out = "map.json";
    double gm_rich = TextureProfile{}.rich_density;
    double gm_poor = TextureProfile{}.poor_density;
    genmap->add_option("--seed", gm_seed, "generator seed");
    genmap->add_option("--style", gm_style, "corridor | room | corner | mixed");
    genmap->add_option("--out", gm_out, "output map file");
    genmap->add_option("--rich", gm_rich, "landmarks per meter on textured walls");
    genmap->add_option("--poor", gm_poor, "landmarks per meter on low-texture stretches");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the action filter");
    std::vector<std::string> tr_maps;
    std::int64_t tr_steps = 200000;
    double tr_alpha = QHyperparams{}.alpha;
    double tr_gamma = QHyperparams{}.gamma;
    double tr_eps = EpsilonSchedule{}.increment;
    double tr_w2 = RewardWeights{}.w2;
    std::uint64_t tr_seed = 1;
    std::string tr_out = "run";
    double tr_olow = kDefaultOracleLow, tr_ohigh = kDefaultOracleHigh, tr_oratio = 2.0;
    std::int64_t tr_label_min = 3, tr_min_visits = FilterConfig{}.min_visits;
    double tr_label_rate = 0.15;
    train_cmd->add_option("--maps", tr_maps, "map files (cycled per episode)")->required();
    train_cmd->add_option("--steps", tr_steps, "total training step budget");
    train_cmd->add_option("--alpha", tr_alpha, "learning rate");
    train_cmd->add_option("--gamma", tr_gamma, "discount factor");
    train_cmd->add_option("--eps-incr", tr_eps, "exploitation-probability increment per 20 episodes");
    train_cmd->add_option("--w-heading", tr_w2, "reward weight per degree of heading change");
    train_cmd->add_option("--seed", tr_seed, "training seed");
    train_cmd->add_option("--out", tr_out, "output directory");
    train_cmd->add_option("--oracle-low", tr_olow, "breakage probability at ideal features");
    train_cmd->add_option("--oracle-high", tr_ohigh, "breakage probability at worst features");
    train_cmd->add_option("--oracle-ratio", tr_oratio, "overlap:angle coefficient ratio");
    train_cmd->add_option("--label-min-count", tr_label_min,
                          "samples required before a cell is labeled");
    train_cmd->add_option("--label-rate", tr_label_rate,
                          "breakage rate at or above which a cell is labeled failing");
    train_cmd->add_option("--min-visits", tr_min_visits,
                          "visit floor stored with the table; rarer cells are distrusted");

    // eval-breakage
    auto* evb = app.add_subcommand("eval-breakage", "steps-to-failure comparison");
    std::vector<std::string> evb_maps, evb_policies{"naive", "rl"};
    int evb_episodes = 50, evb_cap = 400;
    std::string evb_qtable, evb_svm, evb_out = "run";
    std::uint64_t evb_seed = 1;
    double evb_olow = kDefaultOracleLow, evb_ohigh = kDefaultOracleHigh, evb_oratio = 2.0;
    evb->add_option("--maps", evb_maps, "map files (cycled per episode)")->required();
    evb->add_option("--policies", evb_policies, "subset of naive rl svm overlap nbv");
    evb->add_option("--episodes", evb_episodes, "episodes per policy");
    evb->add_option("--step-cap", evb_cap, "per-episode step cap");
    evb->add_option("--qtable", evb_qtable, "trained q-table file (for rl)");
    evb->add_option("--svm", evb_svm, "trained classifier file (for svm)");
    evb->add_option("--seed", evb_seed, "evaluation seed");
    evb->add_option("--out", evb_out, "output directory");
    evb->add_option("--oracle-low", evb_olow, "breakage probability at ideal features");
    evb->add_option("--oracle-high", evb_ohigh, "breakage probability at worst features");
    evb->add_option("--oracle-ratio", evb_oratio, "overlap:angle coefficient ratio");

    // eval-goal
    auto* evg = app.add_subcommand("eval-goal", "goal-based trial matrix");
    std::string evg_config;
    evg->add_option("--config", evg_config, "experiment config JSON")->required();

    // compare
    auto* cmp = app.add_subcommand("compare", "merge runs and emit plot data");
    std::vector<std::string> cmp_in;
    std::string cmp_out = "plots";
    cmp->add_option("--in", cmp_in, "run directories to merge")->required();
    cmp->add_option("--out", cmp_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (genmap->parsed()) return cmd_genmap(gm_seed, gm_style, gm_out, gm_rich, gm_poor);
        if (train_cmd->parsed())
            return cmd_train(tr_maps, tr_steps, tr_alpha, tr_gamma, tr_eps, tr_w2, tr_seed,
                             tr_out, tr_olow, tr_ohigh, tr_oratio, tr_label_min, tr_label_rate,
                             tr_min_visits);
        if (evb->parsed())
            return cmd_eval_breakage(evb_maps, evb_policies, evb_episodes, evb_cap, evb_qtable,
                                     evb_svm, evb_seed, evb_out, evb_olow, evb_ohigh,
                                     evb_oratio);
        if (evg->parsed()) return cmd_eval_goal(evg_config);
        if (cmp->parsed()) return cmd_compare(cmp_in, cmp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
