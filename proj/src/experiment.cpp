#include "slamsafe/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slamsafe/csv.hpp"
#include "slamsafe/errors.hpp"
#include "slamsafe/stats.hpp"

namespace fs = std::filesystem;

namespace slamsafe {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string>& known_policies() {
    static const std::vector<std::string> names{"naive", "rl", "svm", "overlap", "nbv"};
    return names;
}

std::unique_ptr<SafetyPolicy> make_policy(const std::string& name,
                                          const PolicyArtifacts& artifacts) {
    if (name == "naive") return std::make_unique<NaivePolicy>();
    if (name == "overlap") return std::make_unique<OverlapPolicy>();
    if (name == "nbv") return std::make_unique<NbvPolicy>();
    if (name == "rl") {
        if (artifacts.qtable_file.empty())
            throw MissingArtifactError("rl policy requires a trained q-table file");
        LoadedQTable loaded = load_qtable(artifacts.qtable_file);
        FilterConfig fcfg;
        fcfg.threshold = loaded.meta.threshold;
        fcfg.min_visits = loaded.meta.min_visits;
        return std::make_unique<RlPolicy>(std::move(loaded.table), fcfg);
    }
    if (name == "svm") {
        if (artifacts.svm_file.empty())
            throw MissingArtifactError("svm policy requires a trained classifier file");
        return std::make_unique<SvmPolicy>(load_svm(artifacts.svm_file));
    }
    throw ConfigError("unknown policy: " + name);
}

namespace {

void require_known_policy(const std::string& name) {
    const auto& known = known_policies();
    if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError("unknown policy: " + name);
}

} // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open experiment config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();

    ordered_json j;
    try {
        j = ordered_json::parse(buf.str());
    } catch (const ordered_json::parse_error& e) {
        throw FormatError(std::string("experiment config is not valid JSON: ") + e.what());
    }

    if (!j.contains("schema") || j["schema"] != "experiment")
        throw FormatError("experiment config: wrong or missing schema field");
    if (!j.contains("version") || j["version"] != 1)
        throw FormatError("experiment config: unsupported version");
    if (!j.contains("maps") || !j["maps"].is_array())
        throw FormatError("experiment config: missing maps array");
    if (!j.contains("policies") || !j["policies"].is_array())
        throw FormatError("experiment config: missing policies array");

    ExperimentConfig cfg;
    for (const auto& m : j["maps"]) cfg.map_files.push_back(m.get<std::string>());
    for (const auto& p : j["policies"]) cfg.policies.push_back(p.get<std::string>());
    if (cfg.map_files.empty()) throw ConfigError("experiment config: maps is empty");
    if (cfg.policies.empty()) throw ConfigError("experiment config: policies is empty");
    for (const auto& p : cfg.policies) require_known_policy(p);

    cfg.trials_per_cell = j.value("trials_per_cell", 10);
    if (cfg.trials_per_cell < 1) throw ConfigError("experiment config: trials_per_cell must be >= 1");
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        cfg.oracle_low = o.value("low", kDefaultOracleLow);
        cfg.oracle_high = o.value("high", kDefaultOracleHigh);
        cfg.oracle_ratio = o.value("ratio", 2.0);
    }
    cfg.artifacts.qtable_file = j.value("qtable", std::string{});
    cfg.artifacts.svm_file = j.value("svm", std::string{});
    cfg.out_dir = j.value("out_dir", std::string{"."});

    for (const auto& m : cfg.map_files)
        if (!fs::exists(m)) throw ConfigError("experiment config: map file not found: " + m);
    return cfg;
}

std::uint64_t trial_seed(std::uint64_t base, const std::string& map_id,
                         const std::string& policy, int trial) {
    std::uint64_t s = derive_seed(base, "trial");
    s = derive_seed(s, map_id);
    s = derive_seed(s, policy);
    return derive_seed(s, std::to_string(trial));
}

std::vector<ResultRow> run_goal_trials(const std::vector<WorldMap>& maps,
                                       const CameraModel& cam,
                                       const BreakageModel& oracle,
                                       const std::vector<std::string>& policies,
                                       const PolicyArtifacts& artifacts, int trials,
                                       std::uint64_t base_seed, const PlannerConfig& pcfg) {
    if (maps.empty()) throw ConfigError("run_goal_trials: no maps");
    if (trials < 1) throw ConfigError("run_goal_trials: trials must be >= 1");

    // Load each policy once up front so a missing artifact fails fast.
    std::vector<std::unique_ptr<SafetyPolicy>> loaded;
    loaded.reserve(policies.size());
    for (const auto& name : policies) loaded.push_back(make_policy(name, artifacts));

    std::vector<ResultRow> rows;
    rows.reserve(maps.size() * policies.size() * static_cast<std::size_t>(trials));
    for (const auto& map : maps) {
        for (std::size_t pi = 0; pi < policies.size(); ++pi) {
            const std::string& pname = policies[pi];
            for (int t = 0; t < trials; ++t) {
                const std::uint64_t seed = trial_seed(base_seed, map.name, pname, t);
                ResultRow row;
                row.map_id = map.name;
                row.policy = pname;
                row.trial = t;
                row.seed = seed;
                try {
                    const RunResult res =
                        pname == "naive"
                            ? run_naive_planner(map, cam, oracle, pcfg, map.goal, seed)
                            : run_safe_planner(map, cam, oracle, *loaded[pi], pcfg, map.goal,
                                               seed);
                    row.outcome = to_string(res.outcome);
                    row.steps = res.steps;
                    row.recoveries = res.recoveries;
                } catch (const StuckError& e) {
                    row.outcome = "stuck";
                    row.steps = e.steps;
                    row.recoveries = e.recoveries;
                } catch (const NoPathError&) {
                    // No feasible route counts against the policy like any
                    // other failure to make progress.
                    row.outcome = "stuck";
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::vector<SummaryRow> out;
    auto find_cell = [&](const std::string& map_id, const std::string& policy) -> SummaryRow& {
        for (auto& s : out)
            if (s.map_id == map_id && s.policy == policy) return s;
        SummaryRow fresh;
        fresh.map_id = map_id;
        fresh.policy = policy;
        out.push_back(std::move(fresh));
        return out.back();
    };
    for (const auto& r : rows) {
        SummaryRow& s = find_cell(r.map_id, r.policy);
        ++s.trials;
        if (r.outcome == "success") ++s.successes;
        else if (r.outcome == "breakage") ++s.breakages;
        else if (r.outcome == "stuck") ++s.stucks;
        else if (r.outcome == "timeout") ++s.timeouts;
        else throw FormatError("unknown outcome: " + r.outcome);
    }
    for (auto& s : out) {
        // Accounting invariant: every trial lands in exactly one bucket.
        if (s.successes + s.breakages + s.stucks + s.timeouts != s.trials)
            throw FormatError("summary accounting mismatch for " + s.map_id + "/" + s.policy);
        s.success_pct = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.trials);
    }
    return out;
}

void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    CsvWriter csv(path);
    csv.comment("schema: results v1");
    csv.row({"map", "policy", "trial", "outcome", "steps", "recoveries", "seed"});
    for (const auto& r : rows) {
        csv.row({r.map_id, r.policy, std::to_string(r.trial), r.outcome,
                 std::to_string(r.steps), std::to_string(r.recoveries), std::to_string(r.seed)});
    }
}

std::vector<ResultRow> load_results_csv(const std::string& path) {
    const auto raw = read_csv(path);
    std::vector<ResultRow> rows;
    for (const auto& r : raw) {
        if (!r.empty() && r[0] == "map") continue;  // header
        if (r.size() != 7) throw FormatError("results csv: bad row width");
        ResultRow row;
        row.map_id = r[0];
        row.policy = r[1];
        row.trial = std::stoi(r[2]);
        row.outcome = r[3];
        row.steps = std::stoi(r[4]);
        row.recoveries = std::stoi(r[5]);
        row.seed = std::stoull(r[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    CsvWriter csv(path);
    csv.comment("schema: summary v1");
    csv.row({"map", "policy", "trials", "successes", "breakages", "stucks", "timeouts",
             "success_pct"});
    for (const auto& s : rows) {
        csv.row({s.map_id, s.policy, std::to_string(s.trials), std::to_string(s.successes),
                 std::to_string(s.breakages), std::to_string(s.stucks),
                 std::to_string(s.timeouts), fmt_fixed(s.success_pct, 1)});
    }
}

std::vector<double> breakage_episode_lengths(const std::vector<WorldMap>& maps,
                                             const CameraModel& cam,
                                             const BreakageModel& oracle,
                                             const SafetyPolicy& policy,
                                             const BreakageEvalConfig& cfg) {
    if (maps.empty()) throw ConfigError("breakage eval: no maps");
    std::vector<double> lengths;
    lengths.reserve(static_cast<std::size_t>(cfg.episodes));
    std::vector<std::size_t> safe_pool;
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        const WorldMap& map = maps[static_cast<std::size_t>(ep) % maps.size()];
        const std::string tag = "beval/" + policy.name() + "/ep" + std::to_string(ep);
        RngStream act(cfg.seed, tag + "/action");
        RngStream orc(cfg.seed, tag + "/oracle");

        Pose pose = map.start;
        int steps = 0;
        while (steps < cfg.step_cap) {
            const auto cands = evaluate_candidates(map, cam, pose, cfg.step_dist);
            if (cands.empty()) break;  // boxed in; episode ends without breakage
            safe_pool.clear();
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const StepContext ctx{pose, cands[i].to, cands[i].feats};
                if (policy.assess(map, cam, ctx).safe) safe_pool.push_back(i);
            }
            // When the policy rejects every candidate the walk still has to
            // move, otherwise filtered policies would trivially stall
            // forever; an unfiltered pick keeps the episode honest.
            const std::size_t pick =
                safe_pool.empty()
                    ? static_cast<std::size_t>(act.bounded(cands.size()))
                    : safe_pool[static_cast<std::size_t>(act.bounded(safe_pool.size()))];
            const bool phi = breakage(oracle, cands[pick].feats, orc);
            ++steps;
            pose = cands[pick].to;
            if (phi) break;
        }
        lengths.push_back(static_cast<double>(steps));
    }
    return lengths;
}

std::vector<BreakageRow> eval_breakage(const std::vector<WorldMap>& maps,
                                       const CameraModel& cam, const BreakageModel& oracle,
                                       const BreakageEvalConfig& cfg) {
    std::vector<BreakageRow> rows;
    rows.reserve(cfg.policies.size());
    for (const auto& name : cfg.policies) {
        const auto policy = make_policy(name, cfg.artifacts);
        const auto lengths = breakage_episode_lengths(maps, cam, oracle, *policy, cfg);
        BreakageRow row;
        row.policy = name;
        row.episodes = static_cast<int>(lengths.size());
        row.mean_steps = mean(lengths);
        row.stderr_steps = std_error(lengths);
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_breakage_csv(const std::string& path, const std::vector<BreakageRow>& rows) {
    CsvWriter csv(path);
    csv.comment("schema: breakage v1");
    csv.row({"policy", "episodes", "mean_steps", "stderr_steps"});
    for (const auto& r : rows) {
        csv.row({r.policy, std::to_string(r.episodes), fmt_double(r.mean_steps),
                 fmt_double(r.stderr_steps)});
    }
}

namespace {

void emit_fig3(const std::string& path, const std::vector<StepSample>& samples, bool overlap_axis) {
    int attempts[kOverlapBins] = {};
    int breaks[kOverlapBins] = {};
    for (const auto& s : samples) {
        const CellIndex c = discretize(s.feats);
        const int bin = overlap_axis ? c.overlap_bin : c.angle_bin;
        ++attempts[bin];
        if (s.phi) ++breaks[bin];
    }
    CsvWriter csv(path);
    csv.comment(overlap_axis ? "breakage frequency per overlap bin (width 30 points)"
                             : "breakage frequency per heading-change bin (width 1.5 deg)");
    csv.row({"bin", "attempts", "breakages", "frequency"});
    const int nbins = overlap_axis ? kOverlapBins : kAngleBins;
    for (int b = 0; b < nbins; ++b) {
        const double freq =
            attempts[b] > 0 ? static_cast<double>(breaks[b]) / attempts[b] : 0.0;
        csv.row({std::to_string(b), std::to_string(attempts[b]), std::to_string(breaks[b]),
                 fmt_double(freq)});
    }
}

} // namespace

void compare_runs(const std::vector<std::string>& in_dirs, const std::string& out_dir) {
    fs::create_directories(out_dir);

    std::vector<ResultRow> results;
    std::vector<std::vector<std::string>> breakage_rows;
    std::vector<std::vector<std::string>> train_rows;
    std::vector<StepSample> samples;

    for (const auto& dir : in_dirs) {
        if (const auto p = fs::path(dir) / "results.csv"; fs::exists(p)) {
            auto part = load_results_csv(p.string());
            results.insert(results.end(), part.begin(), part.end());
        }
        if (const auto p = fs::path(dir) / "breakage.csv"; fs::exists(p)) {
            for (auto& r : read_csv(p.string()))
                if (!r.empty() && r[0] != "policy") breakage_rows.push_back(std::move(r));
        }
        if (const auto p = fs::path(dir) / "train_log.csv"; fs::exists(p)) {
            for (auto& r : read_csv(p.string()))
                if (!r.empty() && r[0] != "episode") train_rows.push_back(std::move(r));
        }
        if (const auto p = fs::path(dir) / "samples.csv"; fs::exists(p)) {
            auto part = load_samples(p.string());
            samples.insert(samples.end(), part.begin(), part.end());
        }
    }

    const fs::path out(out_dir);
    if (!results.empty())
        save_summary_csv((out / "table2_success.csv").string(), summarize(results));

    if (!breakage_rows.empty()) {
        CsvWriter csv((out / "fig6_bars.csv").string());
        csv.comment("mean steps to tracking failure per policy");
        csv.row({"policy", "episodes", "mean_steps", "stderr_steps"});
        for (const auto& r : breakage_rows) csv.row(r);
    }

    if (!train_rows.empty()) {
        CsvWriter csv((out / "fig7_episode_length.csv").string());
        csv.comment("episode length over training");
        csv.row({"episode", "steps"});
        for (const auto& r : train_rows) {
            if (r.size() < 2) throw FormatError("train log csv: bad row width");
            csv.row({r[0], r[1]});
        }
    }

    if (!samples.empty()) {
        emit_fig3((out / "fig3_overlap.csv").string(), samples, /*overlap_axis=*/true);
        emit_fig3((out / "fig3_angle.csv").string(), samples, /*overlap_axis=*/false);
    }
}

}  // namespace slamsafe
