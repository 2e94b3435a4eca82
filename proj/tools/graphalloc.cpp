// graphalloc: command-line front end for the benchmark.
//
// Exit codes: 0 success, 2 configuration error, 3 exact Pareto ratio unavailable where it
// was required, 1 anything else.

#include "graphalloc/graphalloc.hpp"
#include "subprocess_policy.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace graphalloc;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNoRatio = 3;

struct RatioUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    }
    out << text;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidConfig, "cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> search_path(const std::vector<std::string>& extra)
{
    std::vector<std::filesystem::path> dirs(extra.begin(), extra.end());
    for (auto& d : problem_search_path()) {
        dirs.push_back(std::move(d));
    }
    return dirs;
}

struct ScalarizerOptions {
    std::string method = "smooth-tchebycheff";
    double mu = 0.1;
    double theta = 5.0;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--scalarizer", method, "weighted-sum | tchebycheff | smooth-tchebycheff | pbi")->capture_default_str();
        cmd->add_option("--mu", mu, "smoothing for smooth-tchebycheff")->capture_default_str();
        cmd->add_option("--theta", theta, "penalty for pbi")->capture_default_str();
    }

    [[nodiscard]] ScalarizerSpec spec() const
    {
        ScalarizerSpec s;
        s.method = parse_scalarizer_method(method);
        s.mu = mu;
        s.theta = theta;
        s.validate();
        return s;
    }
};

struct PolicyOptions {
    std::string name = "planner";
    std::string command;
    std::uint64_t seed = 0;
    std::string front_file;
    std::size_t size_limit = kDefaultSizeLimit;
    bool no_oracle = false;
    ScalarizerOptions scalarizer;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--policy", name, "random | greedy | planner | external")->capture_default_str();
        cmd->add_option("--policy-cmd", command, "command line of an external agent (JSON lines on stdin/stdout)");
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_option("--front-file", front_file, "precomputed ideal front");
        cmd->add_option("--size-limit", size_limit, "feasible-set size above which the oracle gives up")->capture_default_str();
        cmd->add_flag("--no-oracle", no_oracle, "skip feasible-set enumeration");
        scalarizer.add_to(cmd);
    }
};

struct Setup {
    ProblemConfig config;
    std::shared_ptr<const IdealFront> front;
    PolicyPtr policy;
    std::optional<std::vector<double>> normalizer_ideal;
};

std::shared_ptr<const IdealFront> obtain_front(const ProblemConfig& config, const PolicyOptions& o)
{
    if (!o.front_file.empty()) {
        auto f = std::make_shared<IdealFront>(front_from_json(read_json_file(o.front_file)));
        if (!f->problem_id.empty() && f->problem_id != config.problem_id) {
            throw Error(ErrorCode::InvalidConfig, "front file is for problem '" + f->problem_id + "'");
        }
        return f;
    }
    if (o.no_oracle || config.num_objectives() > kMaxExactHypervolumeObjectives) {
        return nullptr;
    }
    try {
        return std::make_shared<IdealFront>(ideal_front(config, o.size_limit));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TooLarge) {
            std::cerr << "note: " << e.what() << "; exact Pareto ratio unavailable\n";
            return nullptr;
        }
        throw;
    }
}

Setup make_setup(const std::string& problem, const std::vector<std::string>& dirs, const PolicyOptions& o)
{
    Setup s;
    s.config = load_problem(problem, search_path(dirs));
    const auto spec = o.scalarizer.spec();
    s.front = obtain_front(s.config, o);
    if (o.name == "random") {
        s.policy = random_policy(o.seed);
    } else if (o.name == "greedy") {
        Normalizer norm = s.front ? Normalizer::from_ideal(s.front->ideal_point) : Normalizer(s.config.num_objectives());
        s.normalizer_ideal = norm.ideal();
        s.policy = greedy_policy(spec, std::move(norm));
    } else if (o.name == "planner") {
        if (!s.front) {
            throw RatioUnavailable("planner needs the enumerated feasible set of '" + s.config.problem_id + "'");
        }
        s.policy = exhaustive_planner(s.front, spec.mu);
    } else if (o.name == "external") {
        if (o.command.empty()) {
            throw Error(ErrorCode::InvalidConfig, "--policy external requires --policy-cmd");
        }
        s.policy = std::make_shared<tools::SubprocessPolicy>(o.command);
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown policy '" + o.name + "'");
    }
    return s;
}

std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "not a number: '" + item + "'");
        }
    }
    return out;
}

// Accepts an evaluation report, a solution set {"objective_vectors": [[...], ...]},
// or an exported front CSV.
std::vector<ObjectiveVector> load_solution_points(const std::string& path)
{
    const auto text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, path + ": " + e.what());
        }
        if (doc.is_object() && doc.contains("records")) {
            return report_from_json(doc).points();
        }
        const auto& arr = doc.is_object() ? doc.at("objective_vectors") : doc;
        return arr.get<std::vector<ObjectiveVector>>();
    }
    std::vector<ObjectiveVector> out;
    for (auto& row : parse_front_csv(text)) {
        out.push_back(std::move(row.objectives));
    }
    return out;
}

int run_list(const std::vector<std::string>& dirs, bool as_json)
{
    const auto listing = list_problems(search_path(dirs));
    json arr = json::array();
    for (const auto& p : listing) {
        const auto config = problem_from_json(read_json_file(p.path));
        if (as_json) {
            arr.push_back({ { "problem_id", p.problem_id }, { "family", p.family }, { "fidelity", p.fidelity }, { "objectives", config.num_objectives() }, { "demands", config.num_demands() }, { "resources", config.num_resources() }, { "path", p.path.string() } });
        } else {
            std::cout << p.problem_id << '\t' << p.family << '\t' << p.fidelity << "\tN=" << config.num_objectives() << "\t|D|=" << config.num_demands() << "\t|R|=" << config.num_resources() << '\n';
        }
    }
    if (as_json) {
        std::cout << arr.dump(2) << '\n';
    }
    return 0;
}

int run_serve(const ProblemConfig& config, const std::optional<ScalarizerSpec>& spec, double alpha)
{
    EnvironmentOptions options;
    options.scalarize_on_step = spec;
    options.dirichlet_alpha = alpha;
    Environment env(config, options);
    auto mask_json = [](const std::vector<bool>& m) {
        json a = json::array();
        for (bool b : m) {
            a.push_back(b ? 1 : 0);
        }
        return a;
    };
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) {
            continue;
        }
        json reply;
        try {
            const auto req = json::parse(line);
            const auto cmd = req.at("cmd").get<std::string>();
            if (cmd == "reset") {
                std::optional<std::uint64_t> seed;
                std::optional<PreferenceVector> pref;
                if (req.contains("seed") && !req["seed"].is_null()) {
                    seed = req["seed"].get<std::uint64_t>();
                }
                if (req.contains("preference") && !req["preference"].is_null()) {
                    pref = PreferenceVector(req["preference"].get<std::vector<double>>());
                }
                auto r = env.reset(seed, pref);
                reply = { { "observation", r.observation.flat }, { "info", { { "preference", r.info.preference.vector() }, { "mask", mask_json(r.info.mask) }, { "step", r.info.step } } } };
            } else if (cmd == "step") {
                auto r = env.step(req.at("action").get<std::size_t>());
                reply = { { "observation", r.observation.flat }, { "reward", r.reward }, { "terminated", r.terminated }, { "truncated", r.truncated }, { "info", { { "preference", r.info.preference.vector() }, { "mask", mask_json(r.info.mask) }, { "raw_reward", r.info.raw_reward }, { "step", r.info.step } } } };
            } else if (cmd == "graph") {
                const auto g = env.graph_observation();
                json types = json::array();
                for (auto t : g.node_types) {
                    types.push_back(static_cast<int>(t));
                }
                reply = { { "node_types", types }, { "node_features", g.node_features }, { "edge_source", g.edge_source }, { "edge_target", g.edge_target }, { "edge_features", g.edge_features }, { "graph_features", g.graph_features } };
            } else if (cmd == "spec") {
                reply = { { "problem_id", config.problem_id }, { "observation_size", env.observation_size() }, { "num_actions", env.num_actions() }, { "num_objectives", config.num_objectives() }, { "horizon", config.horizon } };
            } else if (cmd == "close") {
                std::cout << json { { "ok", true } }.dump() << std::endl;
                return 0;
            } else {
                reply = { { "error", "unknown cmd '" + cmd + "'" } };
            }
        } catch (const Error& e) {
            reply = { { "error", e.what() }, { "code", std::string(to_string(e.code())) } };
        } catch (const std::exception& e) {
            reply = { { "error", e.what() } };
        }
        std::cout << reply.dump() << std::endl;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Multi-objective resource allocation benchmark" };
    app.require_subcommand(1);
    std::vector<std::string> dirs;
    app.add_option("--problem-dir", dirs, "extra directory searched for problem files (repeatable)");

    bool list_json = false;
    auto* list_cmd = app.add_subcommand("list-problems", "list the problem suite");
    list_cmd->add_flag("--json", list_json);

    std::string problem;
    std::string out_path;

    std::size_t oracle_limit = kDefaultSizeLimit;
    auto* oracle_cmd = app.add_subcommand("oracle", "enumerate the feasible set and write the ideal Pareto front");
    oracle_cmd->add_option("problem", problem)->required();
    oracle_cmd->add_option("--out", out_path);
    oracle_cmd->add_option("--size-limit", oracle_limit)->capture_default_str();

    PolicyOptions eval_opts;
    std::size_t divisions = 0;
    OrderingScoreParams os_params;
    bool require_ratio = false;
    bool no_timing = false;
    bool probe = false;
    auto* eval_cmd = app.add_subcommand("evaluate", "run a policy over the preference lattice and score it");
    eval_cmd->add_option("problem", problem)->required();
    eval_opts.add_to(eval_cmd);
    eval_cmd->add_option("--pref-divisions", divisions, "lattice divisions H (0 = default for N)");
    eval_cmd->add_option("--os-samples", os_params.n_samp)->capture_default_str();
    eval_cmd->add_option("--os-steps", os_params.n_step)->capture_default_str();
    eval_cmd->add_option("--os-alpha", os_params.alpha)->capture_default_str();
    eval_cmd->add_flag("--require-ratio", require_ratio, "fail with exit 3 when no exact Pareto ratio can be computed");
    eval_cmd->add_flag("--no-timing", no_timing, "omit wall time so reports compare byte-for-byte");
    eval_cmd->add_flag("--probe-determinism", probe, "roll one preference out twice and record whether actions agree");
    eval_cmd->add_option("--out", out_path);

    std::string solution_file;
    std::string score_front;
    auto* score_cmd = app.add_subcommand("score", "score a solution set (report JSON, objective_vectors JSON, or front CSV)");
    score_cmd->add_option("solutions", solution_file)->required();
    score_cmd->add_option("--front-file", score_front);

    PolicyOptions sens_opts;
    std::string alphas_text = "0.2,1,5";
    std::string seeds_text = "0,1,2,3,4";
    bool sens_json = false;
    auto* sens_cmd = app.add_subcommand("os-sensitivity", "ordering score across Dirichlet concentrations and seeds");
    sens_cmd->add_option("problem", problem)->required();
    sens_opts.add_to(sens_cmd);
    sens_cmd->add_option("--alphas", alphas_text)->capture_default_str();
    sens_cmd->add_option("--seeds", seeds_text)->capture_default_str();
    sens_cmd->add_option("--os-samples", os_params.n_samp)->capture_default_str();
    sens_cmd->add_option("--os-steps", os_params.n_step)->capture_default_str();
    sens_cmd->add_flag("--json", sens_json);

    std::string report_path;
    auto* export_cmd = app.add_subcommand("export-front", "write a report's solutions (or an oracle front file) as CSV");
    export_cmd->add_option("report", report_path)->required();
    export_cmd->add_option("--out", out_path);

    std::string serve_scalarizer;
    ScalarizerOptions serve_opts;
    double serve_alpha = 1.0;
    auto* serve_cmd = app.add_subcommand("serve", "drive one environment over JSON lines on stdin/stdout");
    serve_cmd->add_option("problem", problem)->required();
    serve_cmd->add_option("--scalarize", serve_scalarizer, "scalarize step rewards with this method");
    serve_cmd->add_option("--mu", serve_opts.mu)->capture_default_str();
    serve_cmd->add_option("--theta", serve_opts.theta)->capture_default_str();
    serve_cmd->add_option("--alpha", serve_alpha, "Dirichlet concentration for sampled preferences")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (*list_cmd) {
            return run_list(dirs, list_json);
        }
        if (*oracle_cmd) {
            const auto config = load_problem(problem, search_path(dirs));
            try {
                write_output(out_path, to_json(ideal_front(config, oracle_limit)).dump(2) + "\n");
            } catch (const Error& e) {
                if (e.code() == ErrorCode::TooLarge || e.code() == ErrorCode::TooManyObjectives) {
                    std::cerr << "error: " << e.what() << '\n';
                    return kExitNoRatio;
                }
                throw;
            }
            return 0;
        }
        if (*eval_cmd) {
            auto setup = make_setup(problem, dirs, eval_opts);
            EvaluationParams params;
            params.divisions = divisions;
            params.ordering = os_params;
            params.seed = eval_opts.seed;
            params.scalarizer = eval_opts.scalarizer.spec();
            params.normalizer_ideal = setup.normalizer_ideal;
            auto report = evaluate_policy(*setup.policy, setup.config, params, setup.front.get());
            if (probe || eval_opts.name == "external") {
                const auto lattice = das_dennis(setup.config.num_objectives(), report.divisions);
                report.determinism_probe = probe_determinism(*setup.policy, setup.config, lattice[lattice.size() / 2]);
            }
            write_output(out_path, to_json(report, !no_timing).dump(2) + "\n");
            if (require_ratio && !report.hv_ratio) {
                std::cerr << "error: exact Pareto ratio unavailable for '" << setup.config.problem_id << "'\n";
                return kExitNoRatio;
            }
            return 0;
        }
        if (*score_cmd) {
            const auto pts = load_solution_points(solution_file);
            if (pts.empty()) {
                throw Error(ErrorCode::EmptyInput, "no solutions in '" + solution_file + "'");
            }
            json out;
            out["count"] = pts.size();
            const auto nd = pareto_filter(pts).size();
            out["nondominated_count"] = nd;
            out["pnds"] = static_cast<double>(nd) / static_cast<double>(pts.size());
            if (pts.front().size() <= kMaxExactHypervolumeObjectives) {
                out["hv"] = hypervolume(pts);
            }
            if (!score_front.empty()) {
                const auto front = front_from_json(read_json_file(score_front));
                out["ideal_hv"] = front.hv;
                out["hv_ratio"] = hv_ratio(pts, front.hv);
            }
            std::cout << out.dump(2) << '\n';
            return 0;
        }
        if (*sens_cmd) {
            const auto setup = make_setup(problem, dirs, sens_opts);
            const auto alphas = parse_double_list(alphas_text);
            std::vector<std::uint64_t> seeds;
            for (double s : parse_double_list(seeds_text)) {
                if (s < 0 || s != std::floor(s)) {
                    throw Error(ErrorCode::InvalidConfig, "seeds must be non-negative integers");
                }
                seeds.push_back(static_cast<std::uint64_t>(s));
            }
            const auto rows = os_sensitivity(*setup.policy, setup.config, alphas, seeds, os_params.n_samp, os_params.n_step);
            if (sens_json) {
                json arr = json::array();
                for (const auto& r : rows) {
                    arr.push_back({ { "alpha", r.alpha }, { "mean", r.mean }, { "std", r.stddev }, { "scores", r.scores } });
                }
                std::cout << arr.dump(2) << '\n';
            } else {
                std::cout << "alpha,mean_os,std_os,n_seeds\n";
                for (const auto& r : rows) {
                    std::cout << format_double(r.alpha) << ',' << format_double(r.mean) << ',' << format_double(r.stddev) << ',' << r.scores.size() << '\n';
                }
            }
            return 0;
        }
        if (*export_cmd) {
            const auto doc = read_json_file(report_path);
            write_output(out_path, doc.contains("front") ? export_front(front_from_json(doc)) : export_front(report_from_json(doc)));
            return 0;
        }
        if (*serve_cmd) {
            const auto config = load_problem(problem, search_path(dirs));
            std::optional<ScalarizerSpec> spec;
            if (!serve_scalarizer.empty()) {
                serve_opts.method = serve_scalarizer;
                spec = serve_opts.spec();
            }
            return run_serve(config, spec, serve_alpha);
        }
    } catch (const RatioUnavailable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoRatio;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return is_config_error(e.code()) ? kExitConfig : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
