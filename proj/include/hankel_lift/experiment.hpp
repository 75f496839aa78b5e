#pragma once

///
/// \file experiment.hpp
///
/// Experiment configurations, their dispatch to the library, and report
/// serialization (json, csv-summary, text).  Complex numbers are [re, im]
/// pairs in every external format; non-finite reals are the strings "inf",
/// "-inf" and "nan".
///

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "acceptance.hpp"
#include "hankel_lift.hpp"

namespace hlift
{

using json = nlohmann::json;

//------------------------------------------------------------------------------
// Enumerations and their spellings
//------------------------------------------------------------------------------

enum class Command
{
    Gcd,
    Intertwine,
    LiftCheck,
    Invariance,
    Reduce,
    Kernel,
    ToeplitzFixed,
    Hilbert,
    Suite,
};

inline constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::Gcd, "gcd"},
    {Command::Intertwine, "intertwine"},
    {Command::LiftCheck, "lift-check"},
    {Command::Invariance, "invariance"},
    {Command::Reduce, "reduce"},
    {Command::Kernel, "kernel"},
    {Command::ToeplitzFixed, "toeplitz-fixed"},
    {Command::Hilbert, "hilbert"},
    {Command::Suite, "suite"},
};

inline std::string to_string(Command c)
{
    for (const auto& [k, name] : kCommandNames)
    {
        if (k == c)
        {
            return name;
        }
    }
    return "?";
}

inline Command parse_command(const std::string& s)
{
    for (const auto& [k, name] : kCommandNames)
    {
        if (s == name)
        {
            return k;
        }
    }
    fail(ErrorKind::ConfigInvalid, "command: unknown value '" + s + "'");
}

enum class ReportFormat
{
    Json,
    CsvSummary,
    Text,
};

inline ReportFormat parse_format(const std::string& s)
{
    if (s == "json")
    {
        return ReportFormat::Json;
    }
    if (s == "csv-summary")
    {
        return ReportFormat::CsvSummary;
    }
    if (s == "text")
    {
        return ReportFormat::Text;
    }
    fail(ErrorKind::UnsupportedFormat, "format: unknown value '" + s + "'");
}

//------------------------------------------------------------------------------
// Scalar encodings
//------------------------------------------------------------------------------

inline json real_to_json(double x)
{
    if (std::isnan(x))
    {
        return "nan";
    }
    if (std::isinf(x))
    {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

inline double real_from_json(const json& j, const std::string& field)
{
    if (j.is_number())
    {
        return j.get<double>();
    }
    if (j.is_string())
    {
        const auto s = j.get<std::string>();
        if (s == "inf")
        {
            return kInf;
        }
        if (s == "-inf")
        {
            return -kInf;
        }
        if (s == "nan")
        {
            return std::nan("");
        }
    }
    fail(ErrorKind::ConfigInvalid, field + ": expected a number");
}

inline json complex_to_json(const cplx& z)
{
    return json::array({real_to_json(z.real()), real_to_json(z.imag())});
}

inline cplx complex_from_json(const json& j, const std::string& field)
{
    require(j.is_array() && j.size() == 2, ErrorKind::ConfigInvalid,
            field + ": expected an [re, im] pair");
    return {real_from_json(j[0], field), real_from_json(j[1], field)};
}

/// Row-major list of rows of [re, im] pairs.
inline json matrix_to_json(const CMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// One singular value per line, shortest round-trip form.
inline std::string singular_values_csv(const std::vector<double>& sv)
{
    std::string out = "index,singular_value\n";
    for (std::size_t i = 0; i < sv.size(); ++i)
    {
        out += std::to_string(i) + "," + detail::format_double(sv[i]) + "\n";
    }
    return out;
}

inline json blaschke_to_json(const BlaschkeProduct& b)
{
    json zeros = json::array();
    for (const auto& a : b.zeros())
    {
        zeros.push_back(complex_to_json(a));
    }
    return {{"zeros", zeros},
            {"constant", complex_to_json(b.constant())},
            {"degree", b.degree()},
            {"text", to_text(b)}};
}

//------------------------------------------------------------------------------
// Configuration
//------------------------------------------------------------------------------

struct SymbolSpec
{
    /// Sparse (index, value) list; absent indices are zero.
    std::vector<std::pair<int, cplx>> coefficients;
    std::string generator; ///< "" or "hilbert"

    bool empty() const
    {
        return coefficients.empty() && generator.empty();
    }

    friend bool operator==(const SymbolSpec&, const SymbolSpec&) = default;
};

struct ExperimentConfig
{
    Command command = Command::Gcd;
    std::vector<cplx> zeros;
    cplx constant = 1.0;
    SymbolSpec symbol;
    int order           = 64;
    double rank_tol     = 1e-8;
    double residual_tol = 1e-8;
    std::uint64_t seed  = 1;
    std::string output_path;
    std::string format = "json";

    friend bool operator==(const ExperimentConfig&,
                           const ExperimentConfig&) = default;
};

inline json symbol_to_json(const SymbolSpec& s)
{
    if (!s.generator.empty())
    {
        return {{"generator", s.generator}};
    }
    if (s.coefficients.empty())
    {
        return nullptr;
    }
    json c = json::array();
    for (const auto& [k, v] : s.coefficients)
    {
        c.push_back(json::array({k, real_to_json(v.real()), real_to_json(v.imag())}));
    }
    return {{"coefficients", c}};
}

inline SymbolSpec symbol_from_json(const json& j)
{
    SymbolSpec s;
    if (j.is_null())
    {
        return s;
    }
    require(j.is_object(), ErrorKind::ConfigInvalid,
            "symbol: expected an object");
    if (j.contains("generator"))
    {
        require(j["generator"].is_string(), ErrorKind::ConfigInvalid,
                "symbol.generator: expected a string");
        s.generator = j["generator"].get<std::string>();
        require(s.generator == "hilbert", ErrorKind::ConfigInvalid,
                "symbol.generator: unknown generator '" + s.generator + "'");
    }
    if (j.contains("coefficients"))
    {
        require(s.generator.empty(), ErrorKind::ConfigInvalid,
                "symbol: give either coefficients or a generator");
        const json& c = j["coefficients"];
        require(c.is_array(), ErrorKind::ConfigInvalid,
                "symbol.coefficients: expected a list of [index, re, im]");
        for (const auto& t : c)
        {
            require(t.is_array() && t.size() == 3 && t[0].is_number_integer(),
                    ErrorKind::ConfigInvalid,
                    "symbol.coefficients: expected [index, re, im] entries");
            s.coefficients.emplace_back(
                t[0].get<int>(),
                cplx(real_from_json(t[1], "symbol.coefficients"),
                     real_from_json(t[2], "symbol.coefficients")));
        }
    }
    return s;
}

inline json config_to_json(const ExperimentConfig& c)
{
    json zeros = json::array();
    for (const auto& a : c.zeros)
    {
        zeros.push_back(complex_to_json(a));
    }
    return {{"command", to_string(c.command)},
            {"u", {{"zeros", zeros}, {"constant", complex_to_json(c.constant)}}},
            {"symbol", symbol_to_json(c.symbol)},
            {"order", c.order},
            {"tolerances",
             {{"rank_tol", real_to_json(c.rank_tol)},
              {"residual_tol", real_to_json(c.residual_tol)}}},
            {"seed", c.seed},
            {"output", {{"path", c.output_path}, {"format", c.format}}}};
}

/// Checks ranges field by field; the first violation throws ConfigInvalid.
inline void validate(const ExperimentConfig& c)
{
    require(c.order >= 1, ErrorKind::ConfigInvalid, "order: must be >= 1");
    require(c.rank_tol > 0.0 && std::isfinite(c.rank_tol),
            ErrorKind::ConfigInvalid, "tolerances.rank_tol: must be positive");
    require(c.residual_tol > 0.0 && std::isfinite(c.residual_tol),
            ErrorKind::ConfigInvalid,
            "tolerances.residual_tol: must be positive");
    for (const auto& a : c.zeros)
    {
        require(std::abs(a) < 1.0, ErrorKind::ConfigInvalid,
                "u.zeros: " + detail::format_complex(a) +
                    " is not inside the unit disk");
    }
    require(std::abs(std::abs(c.constant) - 1.0) <= kUnimodularTolerance,
            ErrorKind::ConfigInvalid, "u.constant: must have modulus 1");
    parse_format(c.format);
}

/// Missing fields take their defaults; unknown fields are rejected.
inline ExperimentConfig config_from_json(const json& j)
{
    require(j.is_object(), ErrorKind::ConfigInvalid,
            "config: expected a JSON object");
    static const char* known[] = {"command", "u",    "symbol", "order",
                                  "tolerances", "seed", "output"};
    for (const auto& [key, _] : j.items())
    {
        require(std::find(std::begin(known), std::end(known), key) !=
                    std::end(known),
                ErrorKind::ConfigInvalid, key + ": unknown field");
    }
    ExperimentConfig c;
    try
    {
        if (j.contains("command"))
        {
            c.command = parse_command(j["command"].get<std::string>());
        }
        if (j.contains("u"))
        {
            const json& u = j["u"];
            if (u.contains("zeros"))
            {
                for (const auto& z : u["zeros"])
                {
                    c.zeros.push_back(complex_from_json(z, "u.zeros"));
                }
            }
            if (u.contains("constant"))
            {
                c.constant = complex_from_json(u["constant"], "u.constant");
            }
        }
        if (j.contains("symbol"))
        {
            c.symbol = symbol_from_json(j["symbol"]);
        }
        if (j.contains("order"))
        {
            c.order = j["order"].get<int>();
        }
        if (j.contains("tolerances"))
        {
            const json& t = j["tolerances"];
            if (t.contains("rank_tol"))
            {
                c.rank_tol = real_from_json(t["rank_tol"], "tolerances.rank_tol");
            }
            if (t.contains("residual_tol"))
            {
                c.residual_tol =
                    real_from_json(t["residual_tol"], "tolerances.residual_tol");
            }
        }
        if (j.contains("seed"))
        {
            c.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("output"))
        {
            const json& o = j["output"];
            if (o.contains("path"))
            {
                c.output_path = o["path"].get<std::string>();
            }
            if (o.contains("format"))
            {
                c.format = o["format"].get<std::string>();
            }
        }
    }
    catch (const json::exception& e)
    {
        fail(ErrorKind::ConfigInvalid, std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

//------------------------------------------------------------------------------
// Report
//------------------------------------------------------------------------------

struct Check
{
    std::string name;
    bool passed      = false;
    double residual  = 0.0;
    double tolerance = 0.0;
    std::string statement; ///< what the check asserts

    friend bool operator==(const Check&, const Check&) = default;
};

struct Report
{
    ExperimentConfig config;
    json payload = json::object();
    std::vector<Check> checks;
    std::string version = kVersion;
    double tail_bound   = 0.0;
    std::optional<double> wall_time;
    std::optional<ErrorKind> error;
    std::string error_message;

    bool passed() const
    {
        return !error && std::all_of(checks.begin(), checks.end(),
                                     [](const Check& c) { return c.passed; });
    }

    std::string status() const
    {
        return error ? "error" : (passed() ? "ok" : "failed");
    }

    friend bool operator==(const Report&, const Report&) = default;
};

inline ErrorKind parse_error_kind(const std::string& s)
{
    for (int k = 0; k <= static_cast<int>(ErrorKind::UnsupportedFormat); ++k)
    {
        if (to_string(static_cast<ErrorKind>(k)) == s)
        {
            return static_cast<ErrorKind>(k);
        }
    }
    fail(ErrorKind::ConfigInvalid, "failure.kind: unknown value '" + s + "'");
}

inline json report_to_json(const Report& r)
{
    json checks = json::array();
    for (const auto& c : r.checks)
    {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"residual", real_to_json(c.residual)},
                          {"tolerance", real_to_json(c.tolerance)},
                          {"statement", c.statement}});
    }
    json prov = {{"version", r.version},
                 {"tail_bound", real_to_json(r.tail_bound)}};
    if (r.wall_time)
    {
        prov["wall_time"] = real_to_json(*r.wall_time);
    }
    json out = {{"config", config_to_json(r.config)},
                {"payload", r.payload},
                {"checks", checks},
                {"provenance", prov},
                {"status", r.status()}};
    if (r.error)
    {
        out["failure"] = {{"kind", to_string(*r.error)},
                          {"message", r.error_message}};
    }
    return out;
}

inline Report report_from_json(const json& j)
{
    Report r;
    try
    {
        r.config  = config_from_json(j.at("config"));
        r.payload = j.at("payload");
        for (const auto& c : j.at("checks"))
        {
            r.checks.push_back({c.at("name").get<std::string>(),
                                c.at("passed").get<bool>(),
                                real_from_json(c.at("residual"), "residual"),
                                real_from_json(c.at("tolerance"), "tolerance"),
                                c.at("statement").get<std::string>()});
        }
        const json& p = j.at("provenance");
        r.version     = p.at("version").get<std::string>();
        r.tail_bound  = real_from_json(p.at("tail_bound"), "tail_bound");
        if (p.contains("wall_time"))
        {
            r.wall_time = real_from_json(p["wall_time"], "wall_time");
        }
        if (j.contains("failure"))
        {
            r.error = parse_error_kind(j["failure"].at("kind").get<std::string>());
            r.error_message = j["failure"].at("message").get<std::string>();
        }
    }
    catch (const json::exception& e)
    {
        fail(ErrorKind::ConfigInvalid, std::string("report: ") + e.what());
    }
    return r;
}

namespace detail
{

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
    {
        return s;
    }
    std::string out = "\"";
    for (char ch : s)
    {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

inline std::string real_text(double x)
{
    return std::isfinite(x) ? format_double(x) : (std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
}

} // namespace detail

/// Serializes a report.  Throws UnsupportedFormat for unknown formats.
inline std::string emit_report(const Report& r, const std::string& format)
{
    switch (parse_format(format))
    {
    case ReportFormat::Json:
        return report_to_json(r).dump(2) + "\n";

    case ReportFormat::CsvSummary:
    {
        std::string out = "check,passed,residual,tolerance\n";
        for (const auto& c : r.checks)
        {
            out += detail::csv_field(c.name) + "," + (c.passed ? "true" : "false") +
                   "," + detail::real_text(c.residual) + "," +
                   detail::real_text(c.tolerance) + "\n";
        }
        if (r.error)
        {
            out += detail::csv_field(std::string("error: ") + to_string(*r.error)) +
                   ",false,nan,nan\n";
        }
        return out;
    }

    case ReportFormat::Text:
    {
        std::ostringstream os;
        os << "hankel_lift " << r.version << "  command: "
           << to_string(r.config.command) << "\n";
        if (!r.config.zeros.empty())
        {
            os << "u = " << to_text(BlaschkeProduct(r.config.zeros, r.config.constant, 0.0))
               << "\n";
        }
        for (const auto& c : r.checks)
        {
            os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": "
               << detail::real_text(c.residual) << " (tolerance "
               << detail::real_text(c.tolerance) << ")\n";
            if (!c.statement.empty())
            {
                os << "       " << c.statement << "\n";
            }
        }
        if (r.error)
        {
            os << "error " << to_string(*r.error) << ": " << r.error_message
               << "\n";
        }
        os << "tail bound: " << detail::real_text(r.tail_bound) << "\n";
        os << "status: " << r.status() << "\n";
        return os.str();
    }
    }
    return {};
}

/// 0 success, 1 a check failed, 2 configuration error, 3 numerical refusal.
inline int exit_code(const Report& r)
{
    if (r.error)
    {
        switch (*r.error)
        {
        case ErrorKind::AmbiguousRank:
        case ErrorKind::TailBoundExceeded:
        case ErrorKind::NoConvergence:
        case ErrorKind::AmbiguousMatching:
        case ErrorKind::KernelNotBeurling:
            return 3;
        default:
            return 2;
        }
    }
    return r.passed() ? 0 : 1;
}

//------------------------------------------------------------------------------
// Dispatch
//------------------------------------------------------------------------------

namespace detail
{

inline BlaschkeProduct config_u(const ExperimentConfig& c)
{
    return BlaschkeProduct(c.zeros, c.constant, 0.0);
}

inline std::optional<Symbol> config_symbol(const ExperimentConfig& c)
{
    if (c.symbol.generator == "hilbert")
    {
        return Symbol::hilbert();
    }
    if (c.symbol.coefficients.empty())
    {
        return std::nullopt;
    }
    int lo = c.symbol.coefficients.front().first;
    int hi = lo;
    for (const auto& [k, _] : c.symbol.coefficients)
    {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    CVector v = CVector::Zero(hi - lo + 1);
    for (const auto& [k, value] : c.symbol.coefficients)
    {
        v[k - lo] += value;
    }
    return Symbol::laurent(lo, v);
}

inline Symbol required_symbol(const ExperimentConfig& c)
{
    auto s = config_symbol(c);
    require(s.has_value(), ErrorKind::ConfigInvalid,
            "symbol: command '" + to_string(c.command) + "' needs a symbol");
    return *s;
}

// Generators become Laurent windows short enough for the invariance
// precondition N >= 4 deg(u) + window.
inline Symbol laurent_for_order(const Symbol& s, const BlaschkeProduct& u, int N)
{
    if (s.is_laurent())
    {
        return s;
    }
    const int hi = N - 4 * u.degree();
    require(hi >= 0, ErrorKind::WindowTooSmall,
            "order too small to materialize the generator");
    return s.materialize(0, hi);
}

inline json condition_json(const ConditionResult& c)
{
    return {{"holds", c.holds},
            {"residual", real_to_json(c.residual)},
            {"decisive", c.decisive}};
}

inline json invariance_json(const InvarianceReport& r)
{
    return {{"u", blaschke_to_json(r.u)},
            {"symbol_window", json::array({r.symbol_lo, r.symbol_hi})},
            {"cond1", r.cond_invariant.holds},
            {"cond2", r.cond_kernel.holds},
            {"cond3", r.cond_symbol.holds},
            {"residuals",
             json::array({real_to_json(r.cond_invariant.residual),
                          real_to_json(r.cond_kernel.residual),
                          real_to_json(r.cond_symbol.residual)})},
            {"decisive", r.decisive()},
            {"agree", r.agree()},
            {"N", r.order},
            {"basis_order", r.basis_order},
            {"shift_max", r.shift_max},
            {"tol", real_to_json(r.tol)},
            {"tail_bound", real_to_json(r.tail_bound)},
            {"finite_section", r.finite_section}};
}

inline json lift_json(const BlockLiftRecord& rec)
{
    return {{"order", rec.order},
            {"top_left_residual", real_to_json(rec.top_left_residual)},
            {"upper_right", real_to_json(rec.upper_right)},
            {"lower_left", real_to_json(rec.lower_left)},
            {"lower_right", real_to_json(rec.lower_right)},
            {"norm_H", real_to_json(rec.norm_H)},
            {"norm_X", real_to_json(rec.norm_X)},
            {"tail_bound", real_to_json(rec.tail_bound)}};
}

inline json gap_json(const NullSpace& ns)
{
    return json::array(
        {ns.sv_below ? real_to_json(*ns.sv_below) : json(nullptr),
         ns.sv_above ? real_to_json(*ns.sv_above) : json(nullptr)});
}

inline void run_gcd(const ExperimentConfig& c, Report& r)
{
    const auto u     = config_u(c);
    const auto theta = gcd_symbol_theta(u);
    r.payload = {{"u", blaschke_to_json(u)},
                 {"theta", blaschke_to_json(theta)},
                 {"degree", theta.degree()},
                 {"nonzero_intertwiner_exists", theta.degree() > 0}};
}

inline void run_intertwine(const ExperimentConfig& c, Report& r)
{
    const auto u   = config_u(c);
    const auto rep = solve_intertwiner_space(u, c.order, c.rank_tol, true);
    r.tail_bound   = rep.tail_bound;
    json res       = json::array();
    for (double v : rep.residuals)
    {
        res.push_back(real_to_json(v));
    }
    r.payload = {{"u", blaschke_to_json(u)},
                 {"theta", blaschke_to_json(rep.theta)},
                 {"solution_dim", rep.solution_dim},
                 {"residuals", res},
                 {"residual_max", real_to_json(rep.residual_max())},
                 {"gap", gap_json(rep.kernel)},
                 {"order", rep.order},
                 {"norm_X", rep.norm_X ? real_to_json(*rep.norm_X) : json(nullptr)},
                 {"norm_H", rep.lift_check ? real_to_json(rep.lift_check->norm_H)
                                           : json(nullptr)}};
    r.checks.push_back({"intertwining residual", rep.residual_max() <= c.residual_tol,
                        rep.residual_max(), c.residual_tol,
                        "every computed X satisfies S_z^* X = X S_z"});
    const bool dichotomy = (rep.solution_dim > 0) == (rep.theta.degree() > 0);
    r.checks.push_back({"existence dichotomy", dichotomy, dichotomy ? 0.0 : 1.0, 0.0,
                        "a nonzero X exists iff gcd{u, conj(Ju)} is nonconstant"});
    if (rep.gcd_member_residual)
    {
        r.checks.push_back({"gcd intertwiner in solution space",
                            *rep.gcd_member_residual <= c.residual_tol,
                            *rep.gcd_member_residual, c.residual_tol,
                            "H_phi compressed to Q_u with phi = T_z^* theta "
                            "intertwines"});
    }
    if (rep.lift_check)
    {
        r.payload["lift_check"] = lift_json(*rep.lift_check);
        r.tail_bound = std::max(r.tail_bound, rep.lift_check->tail_bound);
    }
}

inline void run_lift_check(const ExperimentConfig& c, Report& r)
{
    const auto u    = config_u(c);
    const int order = block_lift_order(u, c.order);
    Symbol phi;
    if (auto s = config_symbol(c))
    {
        phi = *s;
    }
    else
    {
        auto lift = lifting_symbol(u, 2 * order);
        require(lift.has_value(), ErrorKind::ConfigInvalid,
                "symbol: theta = 1, so no lifting symbol exists; supply one");
        phi = lift->symbol;
    }
    const auto basis = tm_basis_at(u, order);
    const CMatrix x  = compress(hankel_matrix(phi, order), basis).entries;
    const auto rec   = verify_block_lift(x, phi, u, order);
    r.tail_bound     = rec.tail_bound;
    r.payload        = {{"u", blaschke_to_json(u)}, {"lift", lift_json(rec)}};
    const double tol = c.residual_tol;
    r.checks.push_back({"off-diagonal blocks", rec.off_diagonal_max() <= tol,
                        rec.off_diagonal_max(), tol,
                        "H_phi maps Q_u into Q_u and u H^2 into u H^2"});
    r.checks.push_back({"lower-right block", rec.lower_right <= tol,
                        rec.lower_right, tol, "u H^2 lies in ker H_phi"});
    r.checks.push_back({"norm equality", rec.norm_gap() <= tol, rec.norm_gap(),
                        tol, "||H_phi|| = ||X||"});
}

inline void run_invariance(const ExperimentConfig& c, Report& r)
{
    const auto u   = config_u(c);
    const auto phi = laurent_for_order(required_symbol(c), u, c.order);
    const auto rep = check_invariance(u, phi, c.order, c.residual_tol);
    r.tail_bound   = rep.tail_bound;
    r.payload      = invariance_json(rep);
    r.checks.push_back({"conditions agree", rep.agree(), 0.0, 0.0,
                        "u H^2 invariant <=> u H^2 in ker H_phi <=> "
                        "P_+ phi in Q_{conj(Ju)}"});
}

inline void run_reduce(const ExperimentConfig& c, Report& r)
{
    const auto u   = config_u(c);
    const auto phi = laurent_for_order(required_symbol(c), u, c.order);
    const auto rep = check_reducing(u, phi, c.order, c.residual_tol);
    r.tail_bound   = rep.direct.tail_bound + rep.adjoint.tail_bound;
    r.payload      = {{"direct", invariance_json(rep.direct)},
                      {"adjoint", invariance_json(rep.adjoint)},
                      {"theta", blaschke_to_json(rep.theta)},
                      {"gcd_orthogonal", condition_json(rep.gcd_orthogonal)},
                      {"both_invariant", rep.both_invariant()},
                      {"both_kernel", rep.both_kernel()},
                      {"reducing", rep.gcd_orthogonal.holds},
                      {"decisive", rep.decisive()}};
    r.checks.push_back({"reducing verdicts agree", rep.agree(), 0.0, 0.0,
                        "u H^2 reduces H_phi <=> P_+ phi is orthogonal to "
                        "gcd{u, conj(Ju)} H^2"});
}

inline void run_kernel(const ExperimentConfig& c, Report& r)
{
    const auto u   = config_u(c);
    const auto rep = verify_kernel_identity(u, c.order);
    r.tail_bound   = rep.tail_bound;
    r.payload      = {{"u", blaschke_to_json(u)},
                      {"order", rep.order},
                      {"shift_max", rep.shift_max},
                      {"inclusion_residual", real_to_json(rep.inclusion_residual)},
                      {"min_singular_value", real_to_json(rep.min_singular_value)}};
    r.checks.push_back({"inclusion u H^2 in kernel",
                        rep.inclusion_residual <= c.residual_tol,
                        rep.inclusion_residual, c.residual_tol,
                        "ker H_{zbar conj(Ju)} contains u H^2"});
    r.checks.push_back({"no kernel on Q_u", rep.min_singular_value > 0.05,
                        rep.min_singular_value, 0.05,
                        "ker H_{zbar conj(Ju)} meets Q_u only in 0"});
    if (auto s = config_symbol(c))
    {
        require(s->is_laurent(), ErrorKind::ConfigInvalid,
                "symbol: the divisor check needs Laurent coefficients");
        const auto v = kernel_divisor_check(*s, u, c.order, std::nullopt,
                                            c.residual_tol);
        r.payload["divisor"] = {{"w", blaschke_to_json(v.w)},
                                {"kernel_dim", v.kernel_dim},
                                {"alignment_residual",
                                 real_to_json(v.alignment_residual)},
                                {"invariant", v.invariant},
                                {"direct_residual", real_to_json(v.direct_residual)}};
        r.checks.push_back({"divisor verdict matches H_phi u", v.consistent,
                            v.direct_residual, c.residual_tol,
                            "u H^2 invariant under H_phi <=> w divides u"});
    }
}

inline void run_toeplitz(const ExperimentConfig& c, Report& r)
{
    const auto u   = config_u(c);
    const auto rep = solve_toeplitz_fixed_space(u, c.order, c.rank_tol);
    r.payload      = {{"u", blaschke_to_json(u)},
                      {"dimension", rep.dimension},
                      {"gap", gap_json(rep.kernel)},
                      {"order", rep.order}};
    r.checks.push_back({"only the zero solution", rep.dimension == 0,
                        static_cast<double>(rep.dimension), 0.0,
                        "S_z^* X S_z = X forces X = 0"});
}

inline void run_hilbert(const ExperimentConfig& c, Report& r)
{
    const auto h      = hilbert_hankel(c.order);
    const double norm = operator_norm(h);
    const double log_min_sv = hilbert_log_min_singular_value(c.order);
    const auto pivots = hilbert_log_pivots(c.order);
    const double min_log_pivot = *std::min_element(pivots.begin(), pivots.end());
    r.payload = {{"order", c.order},
                 {"norm", real_to_json(norm)},
                 {"min_singular_value", real_to_json(std::exp(log_min_sv))},
                 {"log_min_singular_value", real_to_json(log_min_sv)},
                 {"min_log_pivot", real_to_json(min_log_pivot)},
                 {"positive_definite", std::isfinite(min_log_pivot)}};
    r.checks.push_back({"norm below pi", norm < std::numbers::pi, norm,
                        std::numbers::pi, "Hilbert's inequality ||Gamma|| <= pi"});
    r.checks.push_back({"positive pivots", std::isfinite(min_log_pivot),
                        min_log_pivot, 0.0,
                        "every LDL^T pivot of the section is positive"});
}

inline void run_suite(const ExperimentConfig& c, Report& r)
{
    AcceptanceOptions opt{c.seed, c.order};
    std::vector<std::future<CriterionResult>> jobs;
    for (const auto& crit : acceptance_criteria())
    {
        jobs.push_back(std::async(std::launch::async, crit, opt));
    }
    json rows = json::array();
    for (auto& job : jobs)
    {
        const auto res = job.get();
        rows.push_back({{"id", res.id},
                        {"name", res.name},
                        {"passed", res.passed},
                        {"measured", real_to_json(res.measured)},
                        {"tolerance", real_to_json(res.tolerance)},
                        {"detail", res.detail}});
        r.checks.push_back({"criterion " + std::to_string(res.id) + ": " + res.name,
                            res.passed, res.measured, res.tolerance, res.detail});
    }
    r.payload = {{"criteria", rows}};
}

} // namespace detail

///
/// Runs one configuration.  Library errors are captured in the report
/// (error kind and message), so a report is always produced.
///
inline Report run_experiment(const ExperimentConfig& config,
                             bool record_wall_time = false)
{
    Report r;
    r.config      = config;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        validate(config);
        switch (config.command)
        {
        case Command::Gcd: detail::run_gcd(config, r); break;
        case Command::Intertwine: detail::run_intertwine(config, r); break;
        case Command::LiftCheck: detail::run_lift_check(config, r); break;
        case Command::Invariance: detail::run_invariance(config, r); break;
        case Command::Reduce: detail::run_reduce(config, r); break;
        case Command::Kernel: detail::run_kernel(config, r); break;
        case Command::ToeplitzFixed: detail::run_toeplitz(config, r); break;
        case Command::Hilbert: detail::run_hilbert(config, r); break;
        case Command::Suite: detail::run_suite(config, r); break;
        }
    }
    catch (const Error& e)
    {
        r.error         = e.kind();
        r.error_message = e.what();
    }
    if (record_wall_time)
    {
        r.wall_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    }
    return r;
}

} // namespace hlift
