#include "cli.hpp"

#include "glspec/errors.hpp"
#include "glspec/invariant_density.hpp"
#include "glspec/model_json.hpp"
#include "glspec/montecarlo.hpp"
#include "glspec/parallel.hpp"
#include "glspec/report.hpp"
#include "glspec/spectral.hpp"
#include "glspec/weierstrass.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <regex>

namespace glspec::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long, std::string>;

// rows of named columns, written as CSV or as a JSON array of objects
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void write(std::ostream& out, const std::string& format) const
    {
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : rows) {
                nlohmann::json o = nlohmann::json::object();
                for (size_t i = 0; i < columns.size(); ++i) {
                    if (auto* d = std::get_if<double>(&r[i]))
                        o[columns[i]] = std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json(format_double(*d));
                    else if (auto* n = std::get_if<long>(&r[i]))
                        o[columns[i]] = *n;
                    else
                        o[columns[i]] = std::get<std::string>(r[i]);
                }
                arr.push_back(o);
            }
            out << arr.dump(2) << '\n';
            return;
        }
        for (size_t i = 0; i < columns.size(); ++i)
            out << (i ? "," : "") << columns[i];
        out << '\n';
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) {
                out << (i ? "," : "");
                if (auto* d = std::get_if<double>(&r[i]))
                    out << format_double(*d);
                else if (auto* n = std::get_if<long>(&r[i]))
                    out << *n;
                else
                    out << std::get<std::string>(r[i]);
            }
            out << '\n';
        }
    }
};

cplx parse_complex(const std::string& s)
{
    static const std::regex full(R"(^\s*([+-]?[0-9.]+(?:[eE][+-]?\d+)?)\s*(?:([+-])\s*([0-9.]*(?:[eE][+-]?\d+)?)\s*i)?\s*$)");
    static const std::regex imag_only(R"(^\s*([+-]?[0-9.]*(?:[eE][+-]?\d+)?)\s*i\s*$)");
    std::smatch m;
    try {
        if (std::regex_match(s, m, full)) {
            double re = std::stod(m[1]);
            double im = 0.0;
            if (m[2].matched) {
                std::string mag = m[3].str();
                im = mag.empty() ? 1.0 : std::stod(mag);
                if (m[2] == "-")
                    im = -im;
            }
            return {re, im};
        }
        if (std::regex_match(s, m, imag_only)) {
            std::string v = m[1].str();
            double im = (v.empty() || v == "+") ? 1.0 : v == "-" ? -1.0 : std::stod(v);
            return {0.0, im};
        }
    } catch (const std::exception&) {
    }
    throw UsageError("--z: cannot parse complex number '" + s + "'");
}

std::string complex_text(cplx z)
{
    return format_double(z.real()) + (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") +
           format_double(std::abs(z.imag())) + "i";
}

// "lo:hi:n" for a uniform grid or a comma-separated list
std::vector<double> parse_points(const std::string& flag, const std::string& s)
{
    std::vector<double> out;
    try {
        if (s.find(':') != std::string::npos) {
            auto a = s.find(':'), b = s.find(':', a + 1);
            if (b == std::string::npos)
                throw UsageError(flag + ": expected lo:hi:n");
            double lo = std::stod(s.substr(0, a)), hi = std::stod(s.substr(a + 1, b - a - 1));
            int n = std::stoi(s.substr(b + 1));
            if (n < 1 || !(hi >= lo))
                throw UsageError(flag + ": need n >= 1 and hi >= lo");
            for (int i = 0; i < n; ++i)
                out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
            return out;
        }
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(std::stod(item));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError(flag + ": cannot parse '" + s + "'");
    }
    if (out.empty())
        throw UsageError(flag + ": no points given");
    return out;
}

LevyModel read_model(const std::string& path)
{
    if (path.empty())
        throw UsageError("--model is required");
    return load_model(path);
}

struct Options {
    std::string format = "csv";
    int threads = 0;
    std::string model;

    std::vector<std::string> z;

    std::string grid = "0.1:8:21";
    int orders = 0;

    int coeffs = -1;
    int gram_n = -1;
    int norms = -1;
    int norms_fit = -1;

    std::string t = "0.5";
    std::string x = "1";
    std::string y = "0.5:4:8";
    int terms = 40;

    double x0 = 1.0;
    double sim_t = 1.0;
    long paths = 100000;
    double dt = 1e-3;
    std::uint64_t seed = 20240611;
    std::string check = "eigen:1";
    double truncate = 0.0;

    std::string output;
};

int cmd_model(const Options& o, std::ostream& out)
{
    LevyModel m = read_model(o.model);
    nlohmann::json j;
    j["model"] = model_to_json(m);
    j["scalars"] = scalars_to_json(m.scalars());
    j["density"] = DensityEvaluator::has_closed_form(m) ? "closed_form" : "mellin_inversion";
    j["t_min"] = t_min(m);
    if (o.format == "json") {
        out << j.dump(2) << '\n';
    } else {
        Table t{{"key", "value"}, {}};
        for (auto& [k, v] : j["scalars"].items()) {
            std::string text;
            if (v.is_array()) {
                for (const auto& e : v)
                    text += (text.empty() ? "" : ";") + e.get<std::string>();
            } else if (v.is_string()) {
                text = v.get<std::string>();
            } else {
                text = format_double(v.get<double>());
            }
            t.rows.push_back({k, text});
        }
        t.rows.push_back({std::string("density"), j["density"].get<std::string>()});
        t.rows.push_back({std::string("t_min"), format_double(j["t_min"].get<double>())});
        t.write(out, "csv");
    }
    return 0;
}

int cmd_wphi(const Options& o, std::ostream& out)
{
    LevyModel m = read_model(o.model);
    if (o.z.empty())
        throw UsageError("--z is required");
    SpectralContext ctx(m);
    Table t{{"z", "re_w", "im_w", "residual"}, {}};
    for (const auto& s : o.z) {
        cplx z = parse_complex(s);
        cplx w = ctx.W(z);
        t.rows.push_back({complex_text(z), w.real(), w.imag(), ctx.functional_residual(z)});
    }
    t.write(out, o.format);
    return 0;
}

int cmd_density(const Options& o, std::ostream& out, std::ostream& err)
{
    LevyModel m = read_model(o.model);
    if (o.orders < 0)
        throw UsageError("--orders must be nonnegative");
    auto xs = parse_points("--grid", o.grid);
    Table t{{"x", "nu", "nu_prime"}, {}};
    for (int k = 1; k <= o.orders; ++k)
        t.columns.push_back("w_" + std::to_string(k));
    bool warned = false;
    for (double x : xs) {
        std::vector<Cell> row{x, nu(m, x)};
        try {
            row.push_back(nu_deriv(m, x, 1));
        } catch (const SmoothnessError& e) {
            if (!warned)
                err << "warning: " << e.what() << '\n';
            warned = true;
            row.push_back(std::nan(""));
        }
        for (int k = 1; k <= o.orders; ++k)
            row.push_back(w_n(m, k, x));
        t.rows.push_back(row);
    }
    t.write(out, o.format);
    return 0;
}

int cmd_spectrum(const Options& o, std::ostream& out)
{
    LevyModel m = read_model(o.model);
    if (o.coeffs < 0 && o.gram_n < 0 && o.norms < 0)
        throw UsageError("spectrum: give at least one of --coeffs, --gram, --norms");
    if (o.coeffs >= 0) {
        nlohmann::json arr = nlohmann::json::array();
        for (int n = 0; n <= o.coeffs; ++n)
            arr.push_back({{"n", n}, {"coefficients", eigen_poly(m, n).coeffs()}});
        out << arr.dump(2) << '\n';
    }
    if (o.gram_n >= 0) {
        Matrix g = gram(m, o.gram_n, o.threads);
        Table t{{"n"}, {}};
        for (int k = 0; k <= o.gram_n; ++k)
            t.columns.push_back("m" + std::to_string(k));
        for (int n = 0; n <= o.gram_n; ++n) {
            std::vector<Cell> row{long(n)};
            for (double v : g[n])
                row.push_back(v);
            t.rows.push_back(row);
        }
        t.write(out, o.format);
    }
    if (o.norms >= 0) {
        NormsReport r = norms_report(m, o.norms, o.norms_fit, o.threads);
        Table t{{"n", "norm_P", "norm_V"}, {}};
        for (const auto& row : r.rows)
            t.rows.push_back({long(row.n), row.norm_p, row.norm_v});
        t.write(out, o.format);
    }
    return 0;
}

int cmd_heatkernel(const Options& o, std::ostream& out, std::ostream& err)
{
    LevyModel m = read_model(o.model);
    auto ts = parse_points("--t", o.t), xs = parse_points("--x", o.x), ys = parse_points("--y", o.y);
    Table t{{"t", "x", "y", "value", "last_term"}, {}};
    int flagged = 0;
    for (double tt : ts)
        for (double x : xs)
            for (double y : ys) {
                HeatValue h = heat_kernel(m, tt, x, y, o.terms);
                if (h.last_term > 1e-8 * std::max(std::abs(h.value), 1e-300))
                    ++flagged;
                t.rows.push_back({tt, x, y, h.value, h.last_term});
            }
    if (flagged)
        err << "warning: " << flagged << " value(s) may be under-truncated at " << o.terms << " terms\n";
    t.write(out, o.format);
    return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err)
{
    LevyModel m = read_model(o.model);
    auto colon = o.check.find(':');
    if (colon == std::string::npos)
        throw UsageError("--check: expected eigen:n or moments:n");
    std::string kind = o.check.substr(0, colon);
    int n = 0;
    try {
        n = std::stoi(o.check.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("--check: cannot parse order in '" + o.check + "'");
    }
    if (kind != "eigen" && kind != "moments")
        throw UsageError("--check: expected eigen:n or moments:n");
    PathConfig cfg;
    cfg.dt = o.dt;
    cfg.n_paths = o.paths;
    cfg.seed = o.seed;
    cfg.truncate_eps = o.truncate;
    cfg.threads = o.threads;
    TruncationInfo ti = truncation_info(m, cfg);
    if (ti.truncated)
        err << "note: jumps below " << format_double(ti.eps) << " replaced by their mean; dropped variance rate "
            << format_double(ti.dropped_variance) << " per unit time\n";
    err << "note: clock horizon sized automatically from the target time\n";
    auto xs = sample_gl(m, cfg, o.x0, o.sim_t);
    Table t{{"check", "estimate", "std_error", "target", "z"}, {}};
    if (kind == "eigen") {
        for (int k = 0; k <= n; ++k) {
            CheckResult r = eigen_check(m, xs, o.x0, o.sim_t, k);
            t.rows.push_back({"eigen:" + std::to_string(k), r.estimate.mean, r.estimate.std_error, r.target, r.z});
        }
    } else {
        for (int k = 0; k <= n; ++k) {
            CheckResult r = moment_check(m, xs, k);
            t.rows.push_back({"moments:" + std::to_string(k), r.estimate.mean, r.estimate.std_error, r.target, r.z});
        }
    }
    t.write(out, o.format);
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    SuiteOptions so;
    so.seed = o.seed;
    so.paths = o.paths;
    so.dt = o.dt;
    so.threads = o.threads;
    so.progress = [&](const CheckOutcome& c) {
        RunReport one;
        one.results = {c};
        std::string line = report_text(one);
        err << line.substr(0, line.find('\n') + 1);
    };
    RunReport r = o.model.empty() ? run_acceptance(so) : run_model_checks(read_model(o.model), so);
    std::string json = report_json(r).dump(2) + "\n";
    if (!o.output.empty()) {
        std::ofstream f(o.output, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + o.output);
        f << json;
    }
    if (o.format == "json")
        out << json;
    else
        out << report_text(r);
    return r.all_passed() ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectral toolkit for generalized Laguerre semigroups", "glspectra"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
    app.add_option("--threads", o.threads, "Worker threads (overrides GL_SPECTRA_THREADS)")->check(CLI::NonNegativeNumber);

    auto model_opt = [&](CLI::App* sub) { sub->add_option("--model", o.model, "Model JSON file")->required(); };

    auto* model = app.add_subcommand("model", "Print the derived scalars of a model");
    model_opt(model);

    auto* wphi = app.add_subcommand("wphi", "Evaluate the Weierstrass product");
    model_opt(wphi);
    wphi->add_option("--z", o.z, "Complex argument such as 4+0i (repeatable)")->required();

    auto* density = app.add_subcommand("density", "Invariant density and its Rodrigues numerators");
    model_opt(density);
    density->add_option("--grid", o.grid, "lo:hi:n");
    density->add_option("--orders", o.orders, "Number of w_k columns");

    auto* spectrum = app.add_subcommand("spectrum", "Eigenpolynomials, Gram matrix and norms");
    model_opt(spectrum);
    spectrum->add_option("--coeffs", o.coeffs, "Emit coefficient table up to degree N");
    spectrum->add_option("--gram", o.gram_n, "Emit the Gram matrix up to N");
    spectrum->add_option("--norms", o.norms, "Emit the norms table up to N");
    spectrum->add_option("--fit-from", o.norms_fit, "First n of the growth fit");

    auto* heat = app.add_subcommand("heatkernel", "Heat-kernel series on a grid");
    model_opt(heat);
    heat->add_option("--t", o.t, "Times: list or lo:hi:n");
    heat->add_option("--x", o.x, "Start points: list or lo:hi:n");
    heat->add_option("--y", o.y, "End points: list or lo:hi:n");
    heat->add_option("--terms", o.terms, "Truncation N")->check(CLI::NonNegativeNumber);

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo cross-check through the Lamperti clock");
    model_opt(sim);
    sim->add_option("--x0", o.x0, "Starting point");
    sim->add_option("--t", o.sim_t, "Time");
    sim->add_option("--paths", o.paths, "Number of paths")->check(CLI::PositiveNumber);
    sim->add_option("--dt", o.dt, "Euler step");
    sim->add_option("--seed", o.seed, "Seed");
    sim->add_option("--check", o.check, "eigen:n or moments:n");
    sim->add_option("--truncate-jumps", o.truncate, "Drop jumps below eps (infinite-activity kernels)");

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite, or the model checks with --model");
    verify->add_option("--model", o.model, "Model JSON file");
    verify->add_option("--seed", o.seed, "Seed");
    verify->add_option("--paths", o.paths, "Monte-Carlo paths")->check(CLI::PositiveNumber);
    verify->add_option("--dt", o.dt, "Euler step");
    verify->add_option("--output", o.output, "Also write the JSON report here");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    if (o.threads > 0)
        set_thread_count(o.threads);
    try {
        if (*model)
            return cmd_model(o, out);
        if (*wphi)
            return cmd_wphi(o, out);
        if (*density)
            return cmd_density(o, out, err);
        if (*spectrum)
            return cmd_spectrum(o, out);
        if (*heat)
            return cmd_heatkernel(o, out, err);
        if (*sim)
            return cmd_simulate(o, out, err);
        if (*verify)
            return cmd_verify(o, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const MembershipWarning& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace glspec::cli
