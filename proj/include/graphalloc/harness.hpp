#pragma once

// End-to-end evaluation: one deterministic rollout per Das-Dennis preference for
// HV / HV ratio / PNDS, a separately sampled preference sweep for the Ordering Score,
// and the report / export formats built on top.

#include "graphalloc/error.hpp"
#include "graphalloc/metrics.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/oracle.hpp"
#include "graphalloc/ordering.hpp"
#include "graphalloc/policy.hpp"
#include "graphalloc/preferences.hpp"
#include "graphalloc/random.hpp"
#include "graphalloc/scalarization.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace graphalloc {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::uint64_t kOrderingScoreStream = 0x05;

struct EvaluationParams {
    std::size_t divisions = 0; // 0 = default_divisions(N)
    OrderingScoreParams ordering;
    std::uint64_t seed = 0;
    ScalarizerSpec scalarizer;
    std::optional<std::vector<double>> normalizer_ideal; // recorded when a policy uses one
};

struct SolutionRecord {
    PreferenceVector preference;
    ProductionVector production;
    ObjectiveVector objectives;
};

struct EvaluationReport {
    std::string problem_id;
    std::string policy;
    std::uint64_t seed = 0;
    std::size_t divisions = 0;
    std::size_t lattice_count = 0;
    ScalarizerSpec scalarizer;
    std::optional<std::vector<double>> normalizer_ideal;
    std::vector<SolutionRecord> records;
    std::optional<double> hv; // absent beyond the exact-HV objective limit
    std::optional<double> ideal_hv;
    std::optional<double> hv_ratio;
    std::optional<std::size_t> feasible_count;
    double pnds = 0.0;
    std::size_t nondominated_count = 0;
    double ordering_score = 0.0;
    OrderingScoreParams ordering;
    std::optional<double> resource_utilization;
    std::optional<bool> determinism_probe;
    double wall_time_seconds = 0.0;

    [[nodiscard]] std::vector<ObjectiveVector> points() const
    {
        std::vector<ObjectiveVector> out;
        out.reserve(records.size());
        for (const auto& r : records) {
            out.push_back(r.objectives);
        }
        return out;
    }
};

inline EvaluationReport evaluate_policy(const Policy& policy, const ProblemConfig& config, const EvaluationParams& params, const IdealFront* front = nullptr)
{
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = config.num_objectives();
    EvaluationReport report;
    report.problem_id = config.problem_id;
    report.policy = policy.name();
    report.seed = params.seed;
    report.divisions = params.divisions == 0 ? default_divisions(n) : params.divisions;
    report.scalarizer = params.scalarizer;
    report.normalizer_ideal = params.normalizer_ideal;
    report.ordering = params.ordering;

    const auto lattice = das_dennis(n, report.divisions);
    report.lattice_count = lattice.size();
    double utilization = 0.0;
    const bool has_budget = config.total_budget() > 0;
    for (const auto& w : lattice) {
        auto r = rollout(policy, config, w);
        if (has_budget) {
            utilization += resource_utilization(r.final_state, config);
        }
        report.records.push_back({ w, r.final_state.production, std::move(r.objectives) });
    }
    if (has_budget) {
        report.resource_utilization = utilization / static_cast<double>(lattice.size());
    }

    const auto pts = report.points();
    if (n <= kMaxExactHypervolumeObjectives) {
        report.hv = hypervolume(pts);
        if (front != nullptr) {
            if (front->points.empty() || front->points.front().size() != n) {
                throw Error(ErrorCode::DimensionMismatch, "front does not match problem '" + config.problem_id + "'");
            }
            report.ideal_hv = front->hv;
            report.feasible_count = front->feasible_count;
            report.hv_ratio = hv_ratio(pts, front->hv);
        }
    }
    report.nondominated_count = pareto_filter(pts).size();
    report.pnds = static_cast<double>(report.nondominated_count) / static_cast<double>(pts.size());

    Rng os_rng(mix_seed(params.seed, kOrderingScoreStream));
    report.ordering_score = ordering_score(policy, config, params.ordering, os_rng).score;

    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

// Rolls the same preference out twice and compares the action trajectories.
inline bool probe_determinism(const Policy& policy, const ProblemConfig& config, const PreferenceVector& preference)
{
    const auto a = rollout(policy, config, preference);
    const auto b = rollout(policy, config, preference);
    return a.actions == b.actions && a.objectives == b.objectives;
}

struct SensitivityRow {
    double alpha = 1.0;
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation over seeds
    std::vector<double> scores;
};

inline std::vector<SensitivityRow> os_sensitivity(const Policy& policy, const ProblemConfig& config, std::span<const double> alphas, std::span<const std::uint64_t> seeds, std::size_t n_samp = 5, std::size_t n_step = 11)
{
    if (seeds.empty()) {
        throw Error(ErrorCode::InvalidSpec, "os_sensitivity needs at least one seed");
    }
    std::vector<SensitivityRow> rows;
    for (double alpha : alphas) {
        SensitivityRow row;
        row.alpha = alpha;
        for (auto seed : seeds) {
            Rng rng(mix_seed(seed, kOrderingScoreStream));
            row.scores.push_back(ordering_score(policy, config, OrderingScoreParams { n_samp, n_step, alpha }, rng).score);
        }
        row.mean = std::accumulate(row.scores.begin(), row.scores.end(), 0.0) / static_cast<double>(row.scores.size());
        double var = 0.0;
        for (double s : row.scores) {
            var += (s - row.mean) * (s - row.mean);
        }
        row.stddev = std::sqrt(var / static_cast<double>(row.scores.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Report document (schema_version 1)

inline nlohmann::json to_json(const EvaluationReport& r, bool include_timing = true)
{
    auto opt = [](const auto& o) -> nlohmann::json { return o ? nlohmann::json(*o) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["problem_id"] = r.problem_id;
    j["policy"] = r.policy;
    j["seed"] = r.seed;
    j["lattice"] = { { "method", "das-dennis" }, { "divisions", r.divisions }, { "count", r.lattice_count } };
    j["scalarizer"] = to_json(r.scalarizer);
    j["normalizer_ideal"] = opt(r.normalizer_ideal);
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : r.records) {
        recs.push_back({ { "preference", rec.preference.vector() }, { "production", rec.production }, { "objectives", rec.objectives } });
    }
    j["hv"] = opt(r.hv);
    j["ideal_hv"] = opt(r.ideal_hv);
    j["hv_ratio"] = opt(r.hv_ratio);
    j["oracle"] = r.feasible_count ? nlohmann::json { { "feasible_count", *r.feasible_count }, { "bounds", { { "resource_budgets", true }, { "horizon", true } } } } : nlohmann::json(nullptr);
    j["pnds"] = r.pnds;
    j["solution_count"] = r.records.size();
    j["nondominated_count"] = r.nondominated_count;
    j["ordering_score"] = { { "value", r.ordering_score }, { "n_samp", r.ordering.n_samp }, { "n_step", r.ordering.n_step }, { "alpha", r.ordering.alpha } };
    j["resource_utilization"] = opt(r.resource_utilization);
    j["determinism_probe"] = opt(r.determinism_probe);
    if (include_timing) {
        j["wall_time_seconds"] = r.wall_time_seconds;
    }
    return j;
}

inline EvaluationReport report_from_json(const nlohmann::json& j)
{
    try {
        if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
            throw Error(ErrorCode::ParseError, "unsupported report schema_version");
        }
        auto opt_double = [&](const char* key) -> std::optional<double> {
            return j.contains(key) && !j[key].is_null() ? std::optional<double>(j[key].get<double>()) : std::nullopt;
        };
        EvaluationReport r;
        r.problem_id = j.at("problem_id").get<std::string>();
        r.policy = j.at("policy").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.divisions = j.at("lattice").at("divisions").get<std::size_t>();
        r.lattice_count = j.at("lattice").at("count").get<std::size_t>();
        const auto& sc = j.at("scalarizer");
        r.scalarizer.method = parse_scalarizer_method(sc.at("method").get<std::string>());
        r.scalarizer.mu = sc.value("mu", r.scalarizer.mu);
        r.scalarizer.theta = sc.value("theta", r.scalarizer.theta);
        if (j.contains("normalizer_ideal") && !j["normalizer_ideal"].is_null()) {
            r.normalizer_ideal = j["normalizer_ideal"].get<std::vector<double>>();
        }
        for (const auto& rec : j.at("records")) {
            r.records.push_back({ PreferenceVector(rec.at("preference").get<std::vector<double>>()), rec.at("production").get<ProductionVector>(), rec.at("objectives").get<ObjectiveVector>() });
        }
        r.hv = opt_double("hv");
        r.ideal_hv = opt_double("ideal_hv");
        r.hv_ratio = opt_double("hv_ratio");
        if (j.contains("oracle") && !j["oracle"].is_null()) {
            r.feasible_count = j["oracle"].at("feasible_count").get<std::size_t>();
        }
        r.pnds = j.at("pnds").get<double>();
        r.nondominated_count = j.at("nondominated_count").get<std::size_t>();
        const auto& os = j.at("ordering_score");
        r.ordering_score = os.at("value").get<double>();
        r.ordering = { os.at("n_samp").get<std::size_t>(), os.at("n_step").get<std::size_t>(), os.at("alpha").get<double>() };
        r.resource_utilization = opt_double("resource_utilization");
        if (j.contains("determinism_probe") && !j["determinism_probe"].is_null()) {
            r.determinism_probe = j["determinism_probe"].get<bool>();
        }
        r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Plot-ready export: columns w_0..w_{N-1}, J_0..J_{N-1}, dominated (0/1); rows ordered
// by preference, lexicographically ascending.

struct FrontRow {
    std::vector<double> preference;
    ObjectiveVector objectives;
    bool dominated = false;
};

inline std::vector<FrontRow> front_rows(const EvaluationReport& report)
{
    const auto pts = report.points();
    const auto flags = pts.empty() ? std::vector<bool> {} : dominated_flags(pts);
    std::vector<FrontRow> rows;
    for (std::size_t k = 0; k < report.records.size(); ++k) {
        rows.push_back({ report.records[k].preference.vector(), report.records[k].objectives, flags[k] });
    }
    std::stable_sort(rows.begin(), rows.end(), [](const FrontRow& a, const FrontRow& b) { return a.preference < b.preference; });
    return rows;
}

inline std::string format_double(double x)
{
    nlohmann::json j = x; // shortest round-trip representation
    return j.dump();
}

inline std::string export_front(const EvaluationReport& report)
{
    const auto rows = front_rows(report);
    const std::size_t n = report.records.empty() ? 0 : report.records.front().objectives.size();
    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) {
        out << "w" << i << ",";
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << "J" << i << ",";
    }
    out << "dominated\n";
    for (const auto& r : rows) {
        for (double w : r.preference) {
            out << format_double(w) << ",";
        }
        for (double v : r.objectives) {
            out << format_double(v) << ",";
        }
        out << (r.dominated ? 1 : 0) << "\n";
    }
    return out.str();
}

// Oracle front as a table: P_0.., J_0.., dominated (always 0), rows ordered by
// objective vector, lexicographically ascending.
inline std::string export_front(const IdealFront& front)
{
    std::vector<std::size_t> order(front.points.size());
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return front.points[a] < front.points[b]; });
    const std::size_t d = front.productions.empty() ? 0 : front.productions.front().size();
    const std::size_t n = front.points.empty() ? 0 : front.points.front().size();
    std::ostringstream out;
    for (std::size_t j = 0; j < d; ++j) {
        out << "P" << j << ",";
    }
    for (std::size_t i = 0; i < n; ++i) {
        out << "J" << i << ",";
    }
    out << "dominated\n";
    for (std::size_t k : order) {
        for (auto p : front.productions[k]) {
            out << p << ",";
        }
        for (double v : front.points[k]) {
            out << format_double(v) << ",";
        }
        out << "0\n";
    }
    return out.str();
}

// Parses a front table back into rows. Columns are matched by header: w* into the
// preference, J* into the objectives, "dominated" into the flag; others are skipped.
inline std::vector<FrontRow> parse_front_csv(const std::string& text)
{
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') {
                cell.pop_back();
            }
            cells.push_back(cell);
        }
        return cells;
    };
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::ParseError, "empty front table");
    }
    const auto header = split(line);
    std::vector<FrontRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::ParseError, "front table row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(header.size()));
        }
        FrontRow r;
        try {
            for (std::size_t k = 0; k < cells.size(); ++k) {
                const auto& h = header[k];
                if (h == "dominated") {
                    r.dominated = cells[k] == "1";
                } else if (!h.empty() && h[0] == 'w') {
                    r.preference.push_back(std::stod(cells[k]));
                } else if (!h.empty() && h[0] == 'J') {
                    r.objectives.push_back(std::stod(cells[k]));
                }
            }
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "non-numeric cell in front table");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace graphalloc
