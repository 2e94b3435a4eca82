#pragma once

// Benchmark problem lookup and seeded generators.
//
// Problems live as JSON documents named <id>.json in the problem directories. A
// document is either a full problem configuration (see model.hpp) or a generator
// manifest, i.e. {"schema_version": 1, "problem_id": ..., "generator": {...}}, which
// is expanded by generate_problem on load.
//
// Search path: every directory in $GRAPHALLOC_PROBLEM_DIR (':'-separated), then the
// compiled-in GRAPHALLOC_DEFAULT_PROBLEM_DIR when defined.

#include "graphalloc/error.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/objective.hpp"
#include "graphalloc/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace graphalloc {

inline constexpr double kLogEpsilon = 1e-8;

enum class GeneratorFamily { RandomDeps, LargeGraph, MonotoneScaling };

constexpr std::string_view to_string(GeneratorFamily f) noexcept
{
    switch (f) {
    case GeneratorFamily::RandomDeps: return "random-deps";
    case GeneratorFamily::LargeGraph: return "large-graph";
    case GeneratorFamily::MonotoneScaling: return "monotone-scaling";
    }
    return "?";
}

inline GeneratorFamily parse_generator_family(std::string_view name)
{
    for (auto f : { GeneratorFamily::RandomDeps, GeneratorFamily::LargeGraph, GeneratorFamily::MonotoneScaling }) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw Error(ErrorCode::InvalidSpec, "unknown generator family '" + std::string(name) + "'");
}

struct GeneratorSpec {
    GeneratorFamily family = GeneratorFamily::RandomDeps;
    std::size_t num_demands = 5;
    std::size_t num_resources = 5;
    std::size_t num_objectives = 3;
    Units budget_min = 5;
    Units budget_max = 10;
    double density = 0.5;
    Units horizon = 20;
    std::uint64_t seed = 0;

    void validate() const
    {
        auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidSpec, why); };
        if (num_demands < 1 || num_resources < 1) {
            fail("need at least one demand and one resource");
        }
        if (num_objectives < 2) {
            fail("need at least two objectives");
        }
        if (budget_min < 0 || budget_max < budget_min) {
            fail("budget range must satisfy 0 <= min <= max");
        }
        if (!(density > 0.0 && density <= 1.0)) {
            fail("density must lie in (0, 1]");
        }
        if (horizon < 1) {
            fail("horizon must be >= 1");
        }
        if (family == GeneratorFamily::MonotoneScaling && num_objectives != num_demands) {
            fail("monotone-scaling needs one objective per demand (N = |D|)");
        }
    }

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

inline nlohmann::json to_json(const GeneratorSpec& s)
{
    return {
        { "family", std::string(to_string(s.family)) },
        { "num_demands", s.num_demands },
        { "num_resources", s.num_resources },
        { "num_objectives", s.num_objectives },
        { "budget_min", s.budget_min },
        { "budget_max", s.budget_max },
        { "density", s.density },
        { "horizon", s.horizon },
        { "seed", s.seed },
    };
}

inline GeneratorSpec generator_spec_from_json(const nlohmann::json& j)
{
    try {
        GeneratorSpec s;
        s.family = parse_generator_family(j.at("family").get<std::string>());
        s.num_demands = j.at("num_demands").get<std::size_t>();
        s.num_resources = j.at("num_resources").get<std::size_t>();
        s.num_objectives = j.at("num_objectives").get<std::size_t>();
        s.budget_min = j.at("budget_min").get<Units>();
        s.budget_max = j.at("budget_max").get<Units>();
        s.density = j.at("density").get<double>();
        s.horizon = j.at("horizon").get<Units>();
        s.seed = j.at("seed").get<std::uint64_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("generator manifest: ") + e.what());
    }
}

namespace detail {

    // Generated constants are rounded to 3 decimals so documents stay readable.
    inline double draw(Rng& rng, double lo, double hi) { return std::round(rng.uniform(lo, hi) * 1000.0) / 1000.0; }

    inline std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

    // Non-empty random subset of {0..n-1}, each element kept with probability p.
    inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n, double p)
    {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (rng.bernoulli(p)) {
                out.push_back(j);
            }
        }
        if (out.empty()) {
            out.push_back(pick(rng, n));
        }
        return out;
    }

    inline Expr log_term(Rng& rng, std::size_t j, double lo, double hi)
    {
        return expr::mul({ expr::constant(draw(rng, lo, hi)), expr::log(expr::production(j), 1.0, kLogEpsilon) });
    }

    // One term of a description-faithful random objective, drawn from the elementary
    // primitives: linear, quadratic, logarithmic, logistic, Gaussian, sinusoidal, staircase.
    inline Expr random_term(Rng& rng, std::size_t j)
    {
        using namespace expr;
        switch (pick(rng, 7)) {
        case 0:
            return scaled(draw(rng, -1.0, 2.0), j);
        case 1:
            return mul({ constant(draw(rng, -0.3, 0.3)), pow(production(j), 2.0) });
        case 2:
            return log_term(rng, j, 1.0, 8.0);
        case 3:
            return logistic(production(j), draw(rng, 2.0, 15.0), draw(rng, -1.5, 1.5), draw(rng, 0.0, 8.0));
        case 4:
            return gaussian(production(j), draw(rng, 2.0, 9.0), draw(rng, 0.1, 1.2), draw(rng, 0.0, 8.0));
        case 5:
            return mul({ add({ scaled(draw(rng, 0.0, 0.5), j), constant(draw(rng, 0.5, 2.0)) }), sin(production(j), draw(rng, 0.3, 3.0), draw(rng, 0.0, 3.0)) });
        default:
            return mul({ constant(draw(rng, 0.5, 3.0)), floor(mul({ constant(draw(rng, 0.2, 0.8)), production(j) })) });
        }
    }

} // namespace detail

// Deterministic under spec.seed. Draw order:
//   1. budgets, resource by resource: uniform integer in [budget_min, budget_max];
//   2. dependencies, demand by demand: each resource kept with probability `density`;
//      an empty set gets one uniformly chosen resource;
//   3. objectives, in order, per family:
//      random-deps      : constant offset + 1..3 random elementary terms, each on a
//                         uniformly chosen production;
//      large-graph      : sum over a random non-empty subset of productions (expected
//                         size 3) of c*log(P_j + 1 + eps) or c*P_j;
//      monotone-scaling : J_i = a*log(P_i + 1 + eps) + b*P_i, a in [5, 15], b in [0, 1],
//                         so objective i depends on production i alone.
inline ProblemConfig generate_problem(const GeneratorSpec& spec, std::string problem_id = {})
{
    spec.validate();
    Rng rng(spec.seed);
    ProblemConfig c;
    c.problem_id = problem_id.empty() ? std::string(to_string(spec.family)) + "-" + std::to_string(spec.seed) : std::move(problem_id);
    c.family = std::string(to_string(spec.family));
    c.notes = "description-faithful generated instance (not formula-exact)";
    c.horizon = spec.horizon;
    for (std::size_t i = 0; i < spec.num_resources; ++i) {
        c.resources.push_back({ "R" + std::to_string(i), rng.uniform_int(spec.budget_min, spec.budget_max) });
    }
    for (std::size_t j = 0; j < spec.num_demands; ++j) {
        c.demands.push_back("D" + std::to_string(j));
        std::vector<std::size_t> deps;
        for (std::size_t i = 0; i < spec.num_resources; ++i) {
            if (rng.bernoulli(spec.density)) {
                deps.push_back(i);
            }
        }
        if (deps.empty()) {
            deps.push_back(detail::pick(rng, spec.num_resources));
        }
        c.dependencies.push_back(std::move(deps));
    }
    for (std::size_t k = 0; k < spec.num_objectives; ++k) {
        switch (spec.family) {
        case GeneratorFamily::RandomDeps: {
            std::vector<Expr> terms { expr::constant(detail::draw(rng, 0.0, 5.0)) };
            const auto n_terms = 1 + detail::pick(rng, 3);
            for (std::size_t t = 0; t < n_terms; ++t) {
                terms.push_back(detail::random_term(rng, detail::pick(rng, spec.num_demands)));
            }
            c.objectives.push_back(expr::add(std::move(terms)));
            break;
        }
        case GeneratorFamily::LargeGraph: {
            const double p = std::min(1.0, 3.0 / static_cast<double>(spec.num_demands));
            std::vector<Expr> terms;
            for (std::size_t j : detail::random_subset(rng, spec.num_demands, p)) {
                if (rng.bernoulli(0.5)) {
                    terms.push_back(detail::log_term(rng, j, 1.0, 10.0));
                } else {
                    terms.push_back(expr::scaled(detail::draw(rng, 0.1, 1.0), j));
                }
            }
            if (terms.size() == 1) {
                terms.push_back(expr::constant(0.0));
            }
            c.objectives.push_back(expr::add(std::move(terms)));
            break;
        }
        case GeneratorFamily::MonotoneScaling: {
            const double a = detail::draw(rng, 5.0, 15.0);
            const double b = detail::draw(rng, 0.0, 1.0);
            c.objectives.push_back(expr::add({ expr::mul({ expr::constant(a), expr::log(expr::production(k), 1.0, kLogEpsilon) }), expr::scaled(b, k) }));
            break;
        }
        }
    }
    validate_config(c);
    return c;
}

// ---------------------------------------------------------------------------
// Lookup

inline std::vector<std::filesystem::path> problem_search_path()
{
    std::vector<std::filesystem::path> dirs;
    if (const char* env = std::getenv("GRAPHALLOC_PROBLEM_DIR"); env != nullptr && *env != '\0') {
        std::stringstream ss(env);
        std::string item;
        while (std::getline(ss, item, ':')) {
            if (!item.empty()) {
                dirs.emplace_back(item);
            }
        }
    }
#ifdef GRAPHALLOC_DEFAULT_PROBLEM_DIR
    dirs.emplace_back(GRAPHALLOC_DEFAULT_PROBLEM_DIR);
#endif
    return dirs;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

// Accepts a full problem document or a generator manifest.
inline ProblemConfig problem_from_json(const nlohmann::json& doc)
{
    if (doc.contains("generator")) {
        const auto id = doc.value("problem_id", std::string());
        auto config = generate_problem(generator_spec_from_json(doc["generator"]), id);
        if (doc.contains("description")) {
            config.notes += "; " + doc["description"].get<std::string>();
        }
        return config;
    }
    return config_from_json(doc);
}

inline std::optional<std::filesystem::path> find_problem_file(const std::string& problem_id, const std::vector<std::filesystem::path>& dirs)
{
    for (const auto& dir : dirs) {
        auto candidate = dir / (problem_id + ".json");
        if (std::filesystem::is_regular_file(candidate)) {
            return candidate;
        }
    }
    return std::nullopt;
}

// `problem_id` may also be a path to a problem document.
inline ProblemConfig load_problem(const std::string& problem_id, const std::vector<std::filesystem::path>& dirs = problem_search_path())
{
    if (problem_id.ends_with(".json") && std::filesystem::is_regular_file(problem_id)) {
        return problem_from_json(read_json_file(problem_id));
    }
    if (auto path = find_problem_file(problem_id, dirs)) {
        return problem_from_json(read_json_file(*path));
    }
    throw Error(ErrorCode::UnknownProblem, "'" + problem_id + "' not found in the problem search path");
}

struct ProblemListing {
    std::string problem_id;
    std::string family;   // "encoded" or a generator family name
    std::string fidelity; // "exact" or "description-faithful"
    std::filesystem::path path;
};

inline std::vector<ProblemListing> list_problems(const std::vector<std::filesystem::path>& dirs = problem_search_path())
{
    std::vector<ProblemListing> out;
    auto seen = [&](const std::string& id) {
        return std::any_of(out.begin(), out.end(), [&](const ProblemListing& l) { return l.problem_id == id; });
    };
    for (const auto& dir : dirs) {
        if (!std::filesystem::is_directory(dir)) {
            continue;
        }
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            const auto id = f.stem().string();
            if (seen(id)) {
                continue; // earlier directories shadow later ones
            }
            const auto doc = read_json_file(f);
            ProblemListing l { id, "", "", f };
            if (doc.contains("generator")) {
                l.family = doc["generator"].value("family", std::string("?"));
                l.fidelity = "description-faithful";
            } else {
                l.family = doc.value("family", std::string("custom"));
                l.fidelity = l.family == "encoded" ? "exact" : "custom";
            }
            out.push_back(std::move(l));
        }
    }
    // natural order: "2a" < "10a"
    std::sort(out.begin(), out.end(), [](const ProblemListing& a, const ProblemListing& b) {
        auto key = [](const std::string& s) {
            std::size_t n = 0;
            while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) {
                ++n;
            }
            return std::make_pair(n == 0 ? std::numeric_limits<long>::max() : std::stol(s.substr(0, n)), s);
        };
        return key(a.problem_id) < key(b.problem_id);
    });
    return out;
}

} // namespace graphalloc
