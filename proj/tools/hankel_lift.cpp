// Command-line front end: builds an ExperimentConfig from flags and/or a JSON
// file, runs it, and writes the report.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <hankel_lift/experiment.hpp>

namespace
{

using hlift::ErrorKind;
using hlift::json;

json read_json_file(const std::string& path, const std::string& what)
{
    std::ifstream in(path);
    hlift::require(static_cast<bool>(in), ErrorKind::ConfigInvalid,
                   what + ": cannot open '" + path + "'");
    try
    {
        return json::parse(in);
    }
    catch (const json::exception& e)
    {
        hlift::fail(ErrorKind::ConfigInvalid, what + ": " + e.what());
    }
}

bool has_path(const json& j, std::initializer_list<const char*> path)
{
    const json* cur = &j;
    for (const char* key : path)
    {
        if (!cur->is_object() || !cur->contains(key))
        {
            return false;
        }
        cur = &(*cur)[key];
    }
    return true;
}

struct Flags
{
    std::string command, zeros, constant, symbol_file, generator, out, format,
        config_file;
    int order           = 0;
    double rank_tol     = 0.0;
    double residual_tol = 0.0;
    std::uint64_t seed  = 0;
    bool timing         = false;
};

// Applies one flag to the config.  With a config file present the file wins
// when it sets the same field to a different value.
template <class Apply>
void merge(const CLI::App& app, const char* flag, const json& file,
           std::initializer_list<const char*> path, hlift::ExperimentConfig& cfg,
           Apply apply)
{
    if (app.count(flag) == 0)
    {
        return;
    }
    if (!file.is_null() && has_path(file, path))
    {
        hlift::ExperimentConfig probe = cfg;
        apply(probe);
        if (!(probe == cfg))
        {
            std::cerr << "warning: " << flag
                      << " conflicts with the config file; using the file value\n";
        }
        return;
    }
    apply(cfg);
}

hlift::ExperimentConfig build_config(const CLI::App& app, const Flags& f)
{
    json file;
    hlift::ExperimentConfig cfg;
    if (!f.config_file.empty())
    {
        file = read_json_file(f.config_file, "config");
        cfg  = hlift::config_from_json(file);
    }

    merge(app, "--command", file, {"command"}, cfg,
          [&](auto& c) { c.command = hlift::parse_command(f.command); });
    merge(app, "--zeros", file, {"u", "zeros"}, cfg, [&](auto& c) {
        try
        {
            c.zeros = hlift::parse_zero_list(f.zeros);
        }
        catch (const hlift::Error& e)
        {
            hlift::fail(ErrorKind::ConfigInvalid, std::string("--zeros: ") + e.what());
        }
    });
    merge(app, "--constant", file, {"u", "constant"}, cfg, [&](auto& c) {
        c.constant = hlift::parse_complex_pair(f.constant);
    });
    merge(app, "--symbol-coeffs", file, {"symbol"}, cfg, [&](auto& c) {
        json s = read_json_file(f.symbol_file, "--symbol-coeffs");
        if (s.is_array())
        {
            s = json{{"coefficients", s}};
        }
        c.symbol = hlift::symbol_from_json(s);
    });
    merge(app, "--generator", file, {"symbol"}, cfg, [&](auto& c) {
        c.symbol = hlift::symbol_from_json(json{{"generator", f.generator}});
    });
    merge(app, "--order", file, {"order"}, cfg,
          [&](auto& c) { c.order = f.order; });
    merge(app, "--rank-tol", file, {"tolerances", "rank_tol"}, cfg,
          [&](auto& c) { c.rank_tol = f.rank_tol; });
    merge(app, "--residual-tol", file, {"tolerances", "residual_tol"}, cfg,
          [&](auto& c) { c.residual_tol = f.residual_tol; });
    merge(app, "--seed", file, {"seed"}, cfg, [&](auto& c) { c.seed = f.seed; });
    merge(app, "--out", file, {"output", "path"}, cfg,
          [&](auto& c) { c.output_path = f.out; });
    merge(app, "--format", file, {"output", "format"}, cfg,
          [&](auto& c) { c.format = f.format; });
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hankel lifts of model-space intertwiners"};
    app.set_version_flag("--version", std::string(hlift::kVersion));
    Flags f;
    app.add_option("--command", f.command,
                   "gcd|intertwine|lift-check|invariance|reduce|kernel|"
                   "toeplitz-fixed|hilbert|suite");
    app.add_option("--zeros", f.zeros, "zeros of u as \"re,im;re,im;...\"");
    app.add_option("--constant", f.constant, "unimodular constant \"re,im\"");
    app.add_option("--symbol-coeffs", f.symbol_file,
                   "JSON file of [index, re, im] triples");
    app.add_option("--generator", f.generator, "coefficient generator (hilbert)");
    app.add_option("--order", f.order, "truncation order N (default 64)");
    app.add_option("--rank-tol", f.rank_tol, "singular-value cut (default 1e-8)");
    app.add_option("--residual-tol", f.residual_tol,
                   "residual tolerance (default 1e-8)");
    app.add_option("--seed", f.seed, "seed for randomized trials (default 1)");
    app.add_option("--out", f.out, "output path (default stdout)");
    app.add_option("--format", f.format, "json|csv-summary|text (default json)");
    app.add_option("--config", f.config_file,
                   "JSON config file; wins over flags on conflict");
    app.add_flag("--timing", f.timing, "record wall time in the report");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    hlift::ExperimentConfig cfg;
    try
    {
        cfg = build_config(app, f);
        hlift::validate(cfg);
    }
    catch (const hlift::Error& e)
    {
        std::cerr << "error " << hlift::to_string(e.kind()) << ": " << e.what()
                  << "\n";
        return 2;
    }

    const hlift::Report report = hlift::run_experiment(cfg, f.timing);
    const std::string text     = hlift::emit_report(report, cfg.format);
    if (cfg.output_path.empty())
    {
        std::cout << text;
    }
    else
    {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out)
        {
            std::cerr << "error: cannot write '" << cfg.output_path << "'\n";
            return 2;
        }
        out << text;
    }
    if (report.error)
    {
        std::cerr << "error " << hlift::to_string(*report.error) << ": "
                  << report.error_message << "\n";
    }
    return hlift::exit_code(report);
}
