#pragma once

// Objective expressions: trees over the production vector built from elementary
// primitives. Each objective in a problem is clamped at zero after evaluation.
//
// Document schema (one JSON object per node, children under "args"):
//
//   {"op":"const", "value":c}
//   {"op":"prod", "index":j}                                   P_j
//   {"op":"add"|"mul"|"min"|"max", "args":[a, b, ...]}         n-ary, n >= 2
//   {"op":"sub", "args":[a, b]}                                a - b
//   {"op":"neg", "args":[a]}
//   {"op":"pow", "exponent":e, "args":[a]}                     a^e
//   {"op":"log", "offset":o, "epsilon":eps, "args":[a]}        ln(a + o + eps)
//   {"op":"exp", "args":[a]}
//   {"op":"sin", "frequency":f, "phase":p, "args":[a]}         sin(f*a + p)
//   {"op":"logistic", "amplitude":A, "slope":k, "center":c, "args":[a]}
//                                                              A / (1 + exp(-k*(a - c)))
//   {"op":"gaussian", "amplitude":A, "width":s, "center":c, "args":[a]}
//                                                              A * exp(-s*(a - c)^2)
//   {"op":"floor"|"ceil", "args":[a]}
//   {"op":"clamp", "lo":l, "hi":h, "args":[a]}

#include "graphalloc/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graphalloc {

using Units = std::int64_t;
using ProductionVector = std::vector<Units>;
using ObjectiveVector = std::vector<double>;

enum class Op {
    Const,
    Prod,
    Add,
    Sub,
    Mul,
    Neg,
    Min,
    Max,
    Pow,
    Log,
    Exp,
    Sin,
    Logistic,
    Gaussian,
    Floor,
    Ceil,
    Clamp,
};

struct Expr {
    Op op = Op::Const;
    // Parameter slots, by op:
    //   Const: [value]            Pow: [exponent]           Log: [offset, epsilon]
    //   Sin: [frequency, phase]   Logistic: [amplitude, slope, center]
    //   Gaussian: [amplitude, width, center]                Clamp: [lo, hi]
    std::array<double, 3> params {};
    std::size_t index = 0; // Prod only
    std::vector<Expr> args;

    friend bool operator==(const Expr&, const Expr&) = default;
};

namespace expr {

    inline Expr constant(double value)
    {
        Expr e;
        e.op = Op::Const;
        e.params[0] = value;
        return e;
    }

    inline Expr production(std::size_t index)
    {
        Expr e;
        e.op = Op::Prod;
        e.index = index;
        return e;
    }

    namespace detail {
        inline Expr node(Op op, std::vector<Expr> args, std::array<double, 3> params = {})
        {
            Expr e;
            e.op = op;
            e.args = std::move(args);
            e.params = params;
            return e;
        }
    } // namespace detail

    inline Expr add(std::vector<Expr> args) { return detail::node(Op::Add, std::move(args)); }
    inline Expr mul(std::vector<Expr> args) { return detail::node(Op::Mul, std::move(args)); }
    inline Expr min(std::vector<Expr> args) { return detail::node(Op::Min, std::move(args)); }
    inline Expr max(std::vector<Expr> args) { return detail::node(Op::Max, std::move(args)); }
    inline Expr sub(Expr a, Expr b) { return detail::node(Op::Sub, { std::move(a), std::move(b) }); }
    inline Expr neg(Expr a) { return detail::node(Op::Neg, { std::move(a) }); }
    inline Expr pow(Expr a, double exponent) { return detail::node(Op::Pow, { std::move(a) }, { exponent, 0, 0 }); }
    inline Expr log(Expr a, double offset, double epsilon = 0.0) { return detail::node(Op::Log, { std::move(a) }, { offset, epsilon, 0 }); }
    inline Expr exp(Expr a) { return detail::node(Op::Exp, { std::move(a) }); }
    inline Expr sin(Expr a, double frequency, double phase = 0.0) { return detail::node(Op::Sin, { std::move(a) }, { frequency, phase, 0 }); }
    inline Expr logistic(Expr a, double amplitude, double slope, double center)
    {
        return detail::node(Op::Logistic, { std::move(a) }, { amplitude, slope, center });
    }
    inline Expr gaussian(Expr a, double amplitude, double width, double center)
    {
        return detail::node(Op::Gaussian, { std::move(a) }, { amplitude, width, center });
    }
    inline Expr floor(Expr a) { return detail::node(Op::Floor, { std::move(a) }); }
    inline Expr ceil(Expr a) { return detail::node(Op::Ceil, { std::move(a) }); }
    inline Expr clamp(Expr a, double lo, double hi) { return detail::node(Op::Clamp, { std::move(a) }, { lo, hi, 0 }); }

    // c * P_j
    inline Expr scaled(double c, std::size_t j) { return mul({ constant(c), production(j) }); }

} // namespace expr

namespace detail {

    inline double stable_logistic(double amplitude, double slope, double center, double x)
    {
        const double z = -slope * (x - center);
        if (z > 0.0) {
            const double ez = std::exp(-z);
            return amplitude * ez / (1.0 + ez);
        }
        return amplitude / (1.0 + std::exp(z));
    }

} // namespace detail

template <typename T>
double evaluate(const Expr& e, std::span<const T> production)
{
    const auto& p = e.params;
    auto arg = [&](std::size_t i) { return evaluate(e.args[i], production); };
    switch (e.op) {
    case Op::Const:
        return p[0];
    case Op::Prod:
        if (e.index >= production.size()) {
            throw Error(ErrorCode::DimensionMismatch,
                "expression references P_" + std::to_string(e.index) + " but production has " + std::to_string(production.size()) + " entries");
        }
        return static_cast<double>(production[e.index]);
    case Op::Add: {
        double s = 0.0;
        for (const auto& a : e.args) {
            s += evaluate(a, production);
        }
        return s;
    }
    case Op::Mul: {
        double s = 1.0;
        for (const auto& a : e.args) {
            s *= evaluate(a, production);
        }
        return s;
    }
    case Op::Min: {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& a : e.args) {
            s = std::min(s, evaluate(a, production));
        }
        return s;
    }
    case Op::Max: {
        double s = -std::numeric_limits<double>::infinity();
        for (const auto& a : e.args) {
            s = std::max(s, evaluate(a, production));
        }
        return s;
    }
    case Op::Sub:
        return arg(0) - arg(1);
    case Op::Neg:
        return -arg(0);
    case Op::Pow:
        return std::pow(arg(0), p[0]);
    case Op::Log:
        // operand floor keeps the value finite if a subtraction drives it below zero
        return std::log(std::max(arg(0) + p[0] + p[1], std::numeric_limits<double>::min()));
    case Op::Exp:
        return std::exp(arg(0));
    case Op::Sin:
        return std::sin(p[0] * arg(0) + p[1]);
    case Op::Logistic:
        return detail::stable_logistic(p[0], p[1], p[2], arg(0));
    case Op::Gaussian: {
        const double d = arg(0) - p[2];
        return p[0] * std::exp(-p[1] * d * d);
    }
    case Op::Floor:
        return std::floor(arg(0));
    case Op::Ceil:
        return std::ceil(arg(0));
    case Op::Clamp:
        return std::clamp(arg(0), p[0], p[1]);
    }
    return 0.0;
}

inline double evaluate(const Expr& e, const ProductionVector& production)
{
    return evaluate(e, std::span<const Units>(production));
}

// J_i = max(expr_i(P), 0).
template <typename T>
ObjectiveVector evaluate_objectives(std::span<const Expr> objectives, std::span<const T> production)
{
    ObjectiveVector out;
    out.reserve(objectives.size());
    for (const auto& e : objectives) {
        out.push_back(std::max(evaluate(e, production), 0.0));
    }
    return out;
}

inline ObjectiveVector evaluate_objectives(std::span<const Expr> objectives, const ProductionVector& production)
{
    return evaluate_objectives(objectives, std::span<const Units>(production));
}

inline void collect_productions(const Expr& e, std::set<std::size_t>& out)
{
    if (e.op == Op::Prod) {
        out.insert(e.index);
    }
    for (const auto& a : e.args) {
        collect_productions(a, out);
    }
}

inline std::set<std::size_t> referenced_productions(const Expr& e)
{
    std::set<std::size_t> out;
    collect_productions(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

    struct OpInfo {
        Op op;
        const char* name;
        std::size_t min_args;
        std::size_t max_args; // SIZE_MAX for n-ary
        std::array<const char*, 3> param_names;
    };

    inline constexpr std::size_t nary = static_cast<std::size_t>(-1);

    inline const std::array<OpInfo, 17>& op_table()
    {
        static const std::array<OpInfo, 17> table { {
            { Op::Const, "const", 0, 0, { "value", nullptr, nullptr } },
            { Op::Prod, "prod", 0, 0, { nullptr, nullptr, nullptr } },
            { Op::Add, "add", 2, nary, { nullptr, nullptr, nullptr } },
            { Op::Sub, "sub", 2, 2, { nullptr, nullptr, nullptr } },
            { Op::Mul, "mul", 2, nary, { nullptr, nullptr, nullptr } },
            { Op::Neg, "neg", 1, 1, { nullptr, nullptr, nullptr } },
            { Op::Min, "min", 2, nary, { nullptr, nullptr, nullptr } },
            { Op::Max, "max", 2, nary, { nullptr, nullptr, nullptr } },
            { Op::Pow, "pow", 1, 1, { "exponent", nullptr, nullptr } },
            { Op::Log, "log", 1, 1, { "offset", "epsilon", nullptr } },
            { Op::Exp, "exp", 1, 1, { nullptr, nullptr, nullptr } },
            { Op::Sin, "sin", 1, 1, { "frequency", "phase", nullptr } },
            { Op::Logistic, "logistic", 1, 1, { "amplitude", "slope", "center" } },
            { Op::Gaussian, "gaussian", 1, 1, { "amplitude", "width", "center" } },
            { Op::Floor, "floor", 1, 1, { nullptr, nullptr, nullptr } },
            { Op::Ceil, "ceil", 1, 1, { nullptr, nullptr, nullptr } },
            { Op::Clamp, "clamp", 1, 1, { "lo", "hi", nullptr } },
        } };
        return table;
    }

    inline const OpInfo& info(Op op)
    {
        for (const auto& i : op_table()) {
            if (i.op == op) {
                return i;
            }
        }
        throw Error(ErrorCode::UnknownPrimitive, "unregistered op");
    }

    // Parameters that may be omitted in documents, with their defaults.
    inline std::optional<double> param_default(Op op, std::size_t slot)
    {
        if (op == Op::Log && slot == 1) {
            return 0.0; // epsilon
        }
        if (op == Op::Sin && slot == 1) {
            return 0.0; // phase
        }
        return std::nullopt;
    }

} // namespace detail

inline nlohmann::json to_json(const Expr& e)
{
    const auto& info = detail::info(e.op);
    nlohmann::json j;
    j["op"] = info.name;
    if (e.op == Op::Prod) {
        j["index"] = e.index;
    }
    for (std::size_t k = 0; k < info.param_names.size(); ++k) {
        if (info.param_names[k] != nullptr) {
            j[info.param_names[k]] = e.params[k];
        }
    }
    if (!e.args.empty()) {
        auto& args = j["args"] = nlohmann::json::array();
        for (const auto& a : e.args) {
            args.push_back(to_json(a));
        }
    }
    return j;
}

inline Expr parse_expression(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "expression node must be an object, got " + doc.dump());
    }
    if (!doc.contains("op") || !doc["op"].is_string()) {
        throw Error(ErrorCode::ParseError, "expression node without string 'op': " + doc.dump());
    }
    const auto name = doc["op"].get<std::string>();
    const auto& table = detail::op_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const detail::OpInfo& i) { return name == i.name; });
    if (it == table.end()) {
        throw Error(ErrorCode::UnknownPrimitive, "'" + name + "'");
    }
    const auto& info = *it;

    Expr e;
    e.op = info.op;
    if (e.op == Op::Prod) {
        if (!doc.contains("index") || !doc["index"].is_number_unsigned()) {
            throw Error(ErrorCode::ParseError, "prod node needs a non-negative integer 'index'");
        }
        e.index = doc["index"].get<std::size_t>();
    }
    for (std::size_t k = 0; k < info.param_names.size(); ++k) {
        const char* pname = info.param_names[k];
        if (pname == nullptr) {
            continue;
        }
        if (!doc.contains(pname)) {
            if (auto d = detail::param_default(e.op, k)) {
                e.params[k] = *d;
                continue;
            }
            throw Error(ErrorCode::ArityError, name + " node missing parameter '" + pname + "'");
        }
        const auto& v = doc[pname];
        if (!v.is_number()) {
            throw Error(ErrorCode::NonFiniteConstant, name + "." + pname + " is not a number");
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::NonFiniteConstant, name + "." + pname);
        }
        e.params[k] = x;
    }

    if (doc.contains("args")) {
        const auto& args = doc["args"];
        if (!args.is_array()) {
            throw Error(ErrorCode::ParseError, "'args' must be an array");
        }
        for (const auto& a : args) {
            e.args.push_back(parse_expression(a));
        }
    }
    if (e.args.size() < info.min_args || (info.max_args != detail::nary && e.args.size() > info.max_args)) {
        throw Error(ErrorCode::ArityError, name + " takes " + std::to_string(info.min_args) + (info.max_args == detail::nary ? "+" : "") + " args, got " + std::to_string(e.args.size()));
    }
    return e;
}

// Compact infix rendering for logs and problem listings.
inline std::string to_string(const Expr& e)
{
    auto num = [](double x) {
        nlohmann::json j = x;
        return j.dump();
    };
    auto join = [&](const char* sep) {
        std::string s = "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i > 0) {
                s += sep;
            }
            s += to_string(e.args[i]);
        }
        return s + ")";
    };
    const auto& p = e.params;
    switch (e.op) {
    case Op::Const: return num(p[0]);
    case Op::Prod: return "P" + std::to_string(e.index);
    case Op::Add: return join(" + ");
    case Op::Mul: return join("*");
    case Op::Sub: return join(" - ");
    case Op::Neg: return "-" + to_string(e.args[0]);
    case Op::Min: return "min" + join(", ");
    case Op::Max: return "max" + join(", ");
    case Op::Pow: return to_string(e.args[0]) + "^" + num(p[0]);
    case Op::Log: return "log(" + to_string(e.args[0]) + " + " + num(p[0] + p[1]) + ")";
    case Op::Exp: return "exp" + join(", ");
    case Op::Sin: return "sin(" + num(p[0]) + "*" + to_string(e.args[0]) + " + " + num(p[1]) + ")";
    case Op::Logistic: return "logistic[" + num(p[0]) + "," + num(p[1]) + "," + num(p[2]) + "]" + join(", ");
    case Op::Gaussian: return "gaussian[" + num(p[0]) + "," + num(p[1]) + "," + num(p[2]) + "]" + join(", ");
    case Op::Floor: return "floor" + join(", ");
    case Op::Ceil: return "ceil" + join(", ");
    case Op::Clamp: return "clamp[" + num(p[0]) + "," + num(p[1]) + "]" + join(", ");
    }
    return "?";
}

} // namespace graphalloc
