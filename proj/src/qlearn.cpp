#include "slamsafe/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slamsafe/csv.hpp"
#include "slamsafe/errors.hpp"

namespace slamsafe {

using ordered_json = nlohmann::ordered_json;

double reward(const RewardWeights& w, const StateActionFeatures& f, bool phi) {
    const double overlap_term =
        w.normalize_overlap ? static_cast<double>(f.overlap) / kOverlapCap
                            : static_cast<double>(f.overlap);
    return w.w1 * overlap_term + w.w2 * f.dtheta_deg + w.w3 * (phi ? 1.0 : 0.0) + w.w0;
}

double QTable::update(const CellIndex& cell, double r, std::span<const CellIndex> next_cells) {
    double m = 0.0;
    if (!next_cells.empty()) {
        m = values_[next_cells[0].flat()];
        for (std::size_t i = 1; i < next_cells.size(); ++i) {
            m = std::max(m, values_[next_cells[i].flat()]);
        }
    }
    const int flat = cell.flat();
    values_[flat] += hp_.alpha * (r + hp_.gamma * m - values_[flat]);
    visits_[flat] += 1;
    return values_[flat];
}

double EpsilonSchedule::at(std::int64_t episode) const {
    const double eps = initial + increment * static_cast<double>(episode / block_size);
    return std::min(ceiling, eps);
}

const char* to_string(TerminalReason r) {
    switch (r) {
        case TerminalReason::breakage: return "breakage";
        case TerminalReason::step_cap: return "step_cap";
        case TerminalReason::stuck: return "stuck";
        case TerminalReason::budget: return "budget";
    }
    return "?";
}

namespace {

// Argmax over candidates by Q value; ties go to the lowest flat cell index,
// remaining ties (several candidates in the same cell) are drawn uniformly
// from the episode stream.
int pick_greedy(const QTable& q, const std::vector<EvaluatedCandidate>& cands,
                RngStream& stream) {
    double best_q = -1e300;
    int best_flat = 0;
    for (const auto& c : cands) {
        const double v = q.value(c.cell);
        const int flat = c.cell.flat();
        if (v > best_q || (v == best_q && flat < best_flat)) {
            best_q = v;
            best_flat = flat;
        }
    }
    int matches = 0;
    for (const auto& c : cands) {
        if (q.value(c.cell) == best_q && c.cell.flat() == best_flat) ++matches;
    }
    int pick = matches > 1 ? static_cast<int>(stream.bounded(matches)) : 0;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
        if (q.value(cands[i].cell) == best_q && cands[i].cell.flat() == best_flat) {
            if (pick-- == 0) return i;
        }
    }
    return 0;  // unreachable
}

std::vector<CellIndex> cells_of(const std::vector<EvaluatedCandidate>& cands) {
    std::vector<CellIndex> cells;
    cells.reserve(cands.size());
    for (const auto& c : cands) cells.push_back(c.cell);
    return cells;
}

}  // namespace

TrainResult train(const std::vector<WorldMap>& maps, const CameraModel& cam,
                  const BreakageModel& oracle, const TrainConfig& cfg) {
    if (maps.empty()) throw ConfigError("train: need at least one map");

    TrainResult result;
    result.table = QTable(cfg.hyperparams);
    if (cfg.steps_budget <= 0) return result;

    std::int64_t remaining = cfg.steps_budget;
    std::int64_t episode = 0;
    bool out_of_budget = false;

    while (!out_of_budget) {
        const WorldMap& map = maps[episode % maps.size()];
        const double eps = cfg.schedule.at(episode);
        const std::string tag = "train/ep" + std::to_string(episode);
        RngStream action_stream(cfg.seed, tag + "/action");
        RngStream oracle_stream(oracle.rng_seed, tag + "/oracle");

        Pose pose = map.start;
        auto cands = evaluate_candidates(map, cam, pose, cfg.step_dist);
        if (cands.empty()) {
            throw ConfigError("train: no admissible action at the start pose of map '" +
                              map.name + "'");
        }

        int steps = 0;
        bool terminated = false;
        TerminalReason reason = TerminalReason::step_cap;
        while (steps < cfg.episode_step_cap && !terminated) {
            const bool exploit = action_stream.bernoulli(eps);
            const int idx = exploit
                                ? pick_greedy(result.table, cands, action_stream)
                                : static_cast<int>(action_stream.bounded(cands.size()));
            const EvaluatedCandidate chosen = cands[idx];

            const bool phi = breakage(oracle, chosen.feats, oracle_stream);
            const double r = reward(cfg.weights, chosen.feats, phi);
            ++steps;
            --remaining;
            result.samples.push_back({episode, steps, chosen.feats, phi});

            if (phi) {
                result.table.update(chosen.cell, r, {});
                reason = TerminalReason::breakage;
                terminated = true;
            } else {
                auto next_cands = evaluate_candidates(map, cam, chosen.to, cfg.step_dist);
                const auto next_cells = cells_of(next_cands);
                result.table.update(chosen.cell, r, next_cells);
                if (next_cands.empty()) {
                    reason = TerminalReason::stuck;
                    terminated = true;
                } else {
                    pose = chosen.to;
                    cands = std::move(next_cands);
                }
            }
            if (remaining == 0) {
                out_of_budget = true;
                if (!terminated) {
                    reason = TerminalReason::budget;
                    terminated = true;
                }
            }
        }
        result.episodes.push_back({episode, steps, eps, reason});
        ++episode;
    }
    return result;
}

namespace {

constexpr int kQTableSchemaVersion = 1;

}  // namespace

void save_qtable(const std::string& path, const QTable& table, const QTableMeta& meta) {
    ordered_json j;
    j["schema"] = "qtable";
    j["version"] = kQTableSchemaVersion;
    j["hyperparams"] = {{"alpha", table.hyperparams().alpha},
                        {"gamma", table.hyperparams().gamma}};
    j["weights"] = {{"w0", meta.weights.w0},
                    {"w1", meta.weights.w1},
                    {"w2", meta.weights.w2},
                    {"w3", meta.weights.w3},
                    {"normalize_overlap", meta.weights.normalize_overlap}};
    j["schedule"] = {{"initial", meta.schedule.initial},
                     {"increment", meta.schedule.increment},
                     {"block_size", meta.schedule.block_size},
                     {"ceiling", meta.schedule.ceiling}};
    j["oracle"] = {{"b0", meta.oracle.b0},
                   {"b_overlap", meta.oracle.b_overlap},
                   {"b_angle", meta.oracle.b_angle},
                   {"rng_seed", meta.oracle.rng_seed}};
    j["seed"] = meta.seed;
    j["steps"] = meta.steps;
    j["threshold"] = meta.threshold;
    j["min_visits"] = meta.min_visits;
    j["discretization"] = {{"eta_bins", 2},
                           {"angle_bins", kAngleBins},
                           {"overlap_bins", kOverlapBins},
                           {"angle_max_deg", kAngleMaxDeg},
                           {"overlap_cap", kOverlapCap}};
    auto values = ordered_json::array();
    auto visits = ordered_json::array();
    for (int i = 0; i < kCellCount; ++i) {
        values.push_back(table.raw_values()[i]);
        visits.push_back(table.raw_visits()[i]);
    }
    j["values"] = std::move(values);
    j["visits"] = std::move(visits);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write qtable file: " + path);
    out << j.dump(1) << "\n";
}

LoadedQTable load_qtable(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot read qtable file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("qtable parse error: ") + e.what());
    }
    if (!j.contains("schema") || !j.contains("version"))
        throw FormatError("qtable file missing schema/version field");
    if (j["schema"] != "qtable" || j["version"] != kQTableSchemaVersion)
        throw FormatError("unsupported qtable schema/version");

    LoadedQTable loaded;
    try {
        QHyperparams hp{j.at("hyperparams").at("alpha"), j.at("hyperparams").at("gamma")};
        loaded.table = QTable(hp);
        const auto& w = j.at("weights");
        loaded.meta.weights = {w.at("w1"), w.at("w2"), w.at("w3"), w.at("w0"),
                               w.at("normalize_overlap")};
        const auto& s = j.at("schedule");
        loaded.meta.schedule = {s.at("initial"), s.at("increment"), s.at("block_size"),
                                s.at("ceiling")};
        const auto& o = j.at("oracle");
        loaded.meta.oracle.b0 = o.at("b0");
        loaded.meta.oracle.b_overlap = o.at("b_overlap");
        loaded.meta.oracle.b_angle = o.at("b_angle");
        loaded.meta.oracle.rng_seed = o.at("rng_seed");
        loaded.meta.seed = j.at("seed");
        loaded.meta.steps = j.at("steps");
        loaded.meta.threshold = j.at("threshold");
        loaded.meta.min_visits = j.value("min_visits", QTableMeta{}.min_visits);
        const auto& values = j.at("values");
        const auto& visits = j.at("visits");
        if (values.size() != kCellCount || visits.size() != kCellCount)
            throw FormatError("qtable arrays must have exactly 800 entries");
        for (int i = 0; i < kCellCount; ++i) {
            loaded.table.set_raw(i, values.at(i), visits.at(i));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("qtable field error: ") + e.what());
    }
    return loaded;
}

void save_train_log(const std::string& path, const std::vector<EpisodeLog>& log) {
    CsvWriter csv(path);
    csv.row({"episode", "steps", "epsilon", "terminal_reason"});
    for (const auto& e : log) {
        csv.row({std::to_string(e.episode), std::to_string(e.steps), fmt_double(e.epsilon),
                 to_string(e.reason)});
    }
}

void save_samples(const std::string& path, const std::vector<StepSample>& samples) {
    CsvWriter csv(path);
    csv.row({"episode", "step", "eta", "dtheta_deg", "overlap", "phi"});
    for (const auto& s : samples) {
        csv.row({std::to_string(s.episode), std::to_string(s.step), to_string(s.feats.eta),
                 fmt_double(s.feats.dtheta_deg), std::to_string(s.feats.overlap),
                 s.phi ? "1" : "0"});
    }
}

std::vector<StepSample> load_samples(const std::string& path) {
    const auto rows = read_csv(path);
    std::vector<StepSample> samples;
    for (std::size_t i = 1; i < rows.size(); ++i) {  // skip header
        const auto& r = rows[i];
        if (r.size() != 6) throw FormatError("samples csv: bad row width");
        StepSample s;
        s.episode = std::stoll(r[0]);
        s.step = std::stoi(r[1]);
        s.feats.eta = r[2] == "forward" ? Direction::forward : Direction::backward;
        s.feats.dtheta_deg = std::stod(r[3]);
        s.feats.overlap = std::stoi(r[4]);
        s.phi = r[5] == "1";
        samples.push_back(s);
    }
    return samples;
}

}  // namespace slamsafe
