#include "glspec/report.hpp"

#include "glspec/errors.hpp"
#include "glspec/invariant_density.hpp"
#include "glspec/montecarlo.hpp"
#include "glspec/parallel.hpp"
#include "glspec/quadrature.hpp"
#include "glspec/spectral.hpp"
#include "glspec/weierstrass.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>

namespace glspec {

LevyModel preset(const std::string& name)
{
    if (name == "classical_m1")
        return LevyModel(1.0, 1.0, EmptyJumps{});
    if (name == "gamma")
        return LevyModel(1.0, 0.0, EmptyJumps{});
    if (name == "small_perturbation_m2")
        return LevyModel(1.0, 1.5, ExpMixture{{{2.0, 2.0}}});
    if (name == "sawtooth")
        return LevyModel(0.0, 0.5, ExpMixture{{{0.5, 1.0}}});
    if (name == "gauss_laguerre")
        return LevyModel(0.0, 0.0, GaussLaguerreKernel{0.5, 1.0});
    if (name == "mixture")
        return LevyModel(1.0, 0.5, ExpMixture{{{1.0, 1.0}, {3.0, 3.0}}});
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names()
{
    return {"classical_m1", "gamma", "small_perturbation_m2", "sawtooth", "gauss_laguerre", "mixture"};
}

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass:
        return "pass";
    case CheckStatus::Fail:
        return "fail";
    default:
        return "skip";
    }
}

bool RunReport::all_passed() const
{
    return std::none_of(results.begin(), results.end(),
                        [](const CheckOutcome& c) { return c.status == CheckStatus::Fail; });
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

using clock_type = std::chrono::steady_clock;

std::string sci(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CheckOutcome make(std::string id, std::string title, bool ok, double measured, std::string tol,
                  std::string detail = {})
{
    CheckOutcome c;
    c.id = std::move(id);
    c.title = std::move(title);
    c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    c.measured = measured;
    c.tolerance = std::move(tol);
    c.detail = std::move(detail);
    return c;
}

template <class F>
CheckOutcome timed(const std::string& id, const std::string& title, F body)
{
    auto t0 = clock_type::now();
    CheckOutcome c;
    try {
        c = body();
    } catch (const std::exception& e) {
        c = make(id, title, false, std::nan(""), "", std::string("error: ") + e.what());
    }
    c.id = id;
    c.title = title;
    c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return c;
}

std::vector<cplx> z_grid()
{
    std::vector<cplx> zs;
    for (double re : {0.5, 1.0, 2.0, 3.5, 5.0})
        for (double im : {0.0, 1.0, -1.0, 5.0, -5.0})
            zs.emplace_back(re, im);
    return zs;
}

double max_residual(const LevyModel& model)
{
    SpectralContext ctx(model);
    double worst = 0.0;
    for (cplx z : z_grid())
        worst = std::max(worst, ctx.functional_residual(z));
    return worst;
}

double moment_error(const LevyModel& model, int nmax)
{
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        double q = integrate_nu(model, poly_fn([&] {
                                    Poly p(std::size_t(n) + 1, 0.0);
                                    p[std::size_t(n)] = 1.0;
                                    return p;
                                }()))
                       .value;
        double w = W_integer(model, n);
        worst = std::max(worst, std::abs(q / w - 1.0));
    }
    return worst;
}

double max_eigen_norm(const LevyModel& model, int nmax)
{
    double worst = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        auto f = eigen_fn(model, n);
        worst = std::max(worst, std::sqrt(inner_product(model, f, f).value));
    }
    return worst;
}

PathConfig path_config(const SuiteOptions& opt)
{
    PathConfig cfg;
    cfg.dt = opt.dt;
    cfg.n_paths = opt.paths;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    return cfg;
}

CheckOutcome c01()
{
    SpectralContext ctx(LevyModel(1.0, 0.0, EmptyJumps{}));
    double worst = 0.0;
    for (cplx z : z_grid()) {
        cplx w = ctx.W(z), g = gamma_fn(z);
        worst = std::max(worst, std::abs(w - g) / std::abs(g));
    }
    return make("C01", "", worst <= 1e-8, worst, "<= 1e-8");
}

CheckOutcome c02()
{
    double worst = 0.0;
    std::string detail;
    for (const auto& name : preset_names()) {
        double r = max_residual(preset(name));
        worst = std::max(worst, r);
        detail += name + "=" + sci(r) + " ";
    }
    return make("C02", "", worst <= 1e-9, worst, "<= 1e-9", detail);
}

CheckOutcome c03()
{
    double closed = 0.0;
    std::string detail;
    for (const auto& name : preset_names()) {
        LevyModel m = preset(name);
        if (!DensityEvaluator::has_closed_form(m))
            continue;
        double e = moment_error(m, 8);
        closed = std::max(closed, e);
        detail += name + "=" + sci(e) + " ";
    }
    // classical m=1 through the Mellin route
    LevyModel c1 = preset("classical_m1");
    auto mel = DensityEvaluator::mellin(std::make_shared<SpectralContext>(c1));
    double mellin = 0.0;
    QuadConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    for (int n = 0; n <= 8; ++n) {
        double q = half_line([&](double x) { return std::pow(x, n) * mel.nu(x); }, cfg).value;
        mellin = std::max(mellin, std::abs(q / W_integer(c1, n) - 1.0));
    }
    detail += "mellin(classical_m1)=" + sci(mellin);
    return make("C03", "", closed <= 1e-6 && mellin <= 1e-5, closed, "<= 1e-6 closed form, <= 1e-5 Mellin", detail);
}

CheckOutcome c04()
{
    LevyModel c1 = preset("classical_m1");
    auto closed = DensityEvaluator::closed_form(c1);
    auto mel = DensityEvaluator::mellin(std::make_shared<SpectralContext>(c1));
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
        double x = 0.1 + (8.0 - 0.1) * i / 20.0;
        worst = std::max(worst, std::abs(closed.nu(x) - mel.nu(x)));
    }
    return make("C04", "", worst <= 1e-6, worst, "<= 1e-6");
}

CheckOutcome c05(int threads)
{
    double c1 = max_identity_deviation(gram(preset("classical_m1"), 6, threads));
    double sp = max_identity_deviation(gram(preset("small_perturbation_m2"), 6, threads));
    double mx = max_identity_deviation(gram(preset("mixture"), 4, threads));
    std::string detail = "classical_m1=" + sci(c1) + " small_perturbation_m2=" + sci(sp) + " mixture(N=4)=" + sci(mx);
    return make("C05", "", c1 <= 1e-6 && sp <= 1e-6 && mx <= 1e-4, std::max(c1, sp), "<= 1e-6, Mellin route <= 1e-4",
                detail);
}

CheckOutcome c06()
{
    double worst = 0.0;
    std::string detail;
    for (const auto& name : preset_names()) {
        double v = max_eigen_norm(preset(name), 12);
        worst = std::max(worst, v);
        detail += name + "=" + format_double(v) + " ";
    }
    return make("C06", "", worst <= 1.0 + 1e-8, worst, "<= 1 + 1e-8", detail);
}

CheckOutcome c07(int threads)
{
    NormsReport r = norms_report(preset("small_perturbation_m2"), 24, 8, threads);
    double lo = 2.0 + 0.7, hi = 2.0 + 1.3;
    std::string detail = "fit over n=" + std::to_string(r.fit_lo) + ".." + std::to_string(r.fit_hi);
    return make("C07", "", r.slope_v2 >= lo && r.slope_v2 <= hi, r.slope_v2, "in [2.7, 3.3]", detail);
}

CheckOutcome c08()
{
    LevyModel st = preset("sawtooth");
    auto v1 = coeigen_fn(st, 1);
    auto partials = dyadic_partials(st, [&](double x, double gap) {
        double v = v1(x, gap);
        return v * v;
    }, 30);
    double peak = 0.0;
    for (double p : partials)
        peak = std::max(peak, std::abs(p));
    auto v0 = coeigen_fn(st, 0);
    double n0 = inner_product(st, v0, v0).value;
    std::string detail = "<V0,V0>-1=" + sci(n0 - 1.0);
    return make("C08", "", peak > 1e6 && std::abs(n0 - 1.0) <= 1e-8, peak, "> 1e6 and |<V0,V0>-1| <= 1e-8", detail);
}

CheckOutcome c09()
{
    LevyModel c1 = preset("classical_m1");
    double t = 0.5;
    double mass = 0.0;
    QuadConfig cfg;
    cfg.rel_tol = 1e-10;
    for (double x : {0.5, 2.0}) {
        double q = half_line([&](double y) { return y > 0.0 ? heat_kernel(c1, t, x, y, 40).value : 0.0; }, cfg).value;
        mass = std::max(mass, std::abs(q - 1.0));
    }
    double sym = 0.0;
    const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    for (double x : grid)
        for (double y : grid) {
            double a = heat_kernel(c1, t, x, y, 40).value / nu(c1, y);
            double b = heat_kernel(c1, t, y, x, 40).value / nu(c1, x);
            sym = std::max(sym, std::abs(a - b));
        }
    return make("C09", "", mass <= 1e-4 && sym <= 1e-6, mass, "<= 1e-4 mass, <= 1e-6 symmetry", "symmetry=" + sci(sym));
}

CheckOutcome c10(const SuiteOptions& opt)
{
    PathConfig cfg = path_config(opt);
    int worst_ok = 12;
    double max_z = 0.0;
    std::string detail;
    for (const std::string name : {"classical_m1", "small_perturbation_m2"}) {
        LevyModel m = preset(name);
        int ok = 0;
        for (double x0 : {0.5, 2.0})
            for (double t : {0.5, 1.0}) {
                auto xs = sample_gl(m, cfg, x0, t);
                for (int n = 1; n <= 3; ++n) {
                    double z = std::abs(eigen_check(m, xs, x0, t, n).z);
                    max_z = std::max(max_z, z);
                    if (z <= 3.0)
                        ++ok;
                }
            }
        worst_ok = std::min(worst_ok, ok);
        detail += name + "=" + std::to_string(ok) + "/12 ";
    }
    detail += "max|z|=" + sci(max_z);
    return make("C10", "", worst_ok >= 11, double(worst_ok), ">= 11 of 12 cells with |z| <= 3", detail);
}

CheckOutcome c11(const SuiteOptions& opt)
{
    PathConfig cfg = path_config(opt);
    double max_z = 0.0;
    std::string detail;
    for (const std::string name : {"classical_m1", "small_perturbation_m2"}) {
        LevyModel m = preset(name);
        auto xs = sample_gl(m, cfg, 1.0, 8.0);
        for (int n = 1; n <= 3; ++n) {
            double z = std::abs(moment_check(m, xs, n).z);
            max_z = std::max(max_z, z);
            detail += name + ":n" + std::to_string(n) + "=" + sci(z) + " ";
        }
    }
    return make("C11", "", max_z <= 3.0, max_z, "|z| <= 3", detail);
}

CheckOutcome c12()
{
    LevyModel sp = preset("small_perturbation_m2");
    double worst = 0.0, m_under = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 3.0})
        for (const Poly& f : {Poly{0.0, 1.0}, Poly{0.0, 0.0, 1.0}, Poly{0.0, 1.0, -1.0}}) {
            GapResult g = equilibrium_gap(sp, t, f, 40);
            worst = std::max(worst, g.gap / g.bound);
            m_under = g.m_under;
        }
    return make("C12", "", worst <= 1.0, worst, "gap/bound <= 1", "m_under=" + format_double(m_under));
}

std::vector<CheckOutcome> run_numeric(const SuiteOptions& opt)
{
    std::vector<CheckOutcome> out;
    auto add = [&](CheckOutcome c) {
        if (opt.progress)
            opt.progress(c);
        out.push_back(std::move(c));
    };
    add(timed("C01", "Gamma recovery", c01));
    add(timed("C02", "Functional-equation residual", c02));
    add(timed("C03", "Moment consistency", c03));
    add(timed("C04", "Closed form vs Mellin inversion", c04));
    add(timed("C05", "Gram matrix identity", [&] { return c05(opt.threads); }));
    add(timed("C06", "Eigenpolynomial norm bound", c06));
    add(timed("C07", "Co-eigenfunction norm growth", [&] { return c07(opt.threads); }));
    add(timed("C08", "Saw-tooth membership cutoff", c08));
    add(timed("C09", "Heat-kernel mass and symmetry", c09));
    add(timed("C10", "Monte-Carlo eigen check", [&] { return c10(opt); }));
    add(timed("C11", "Monte-Carlo invariant moments", [&] { return c11(opt); }));
    add(timed("C12", "Hypocoercive bound", c12));
    return out;
}

nlohmann::json results_json(const std::vector<CheckOutcome>& results)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : results) {
        arr.push_back({{"id", c.id},
                       {"title", c.title},
                       {"status", to_string(c.status)},
                       {"measured", format_double(c.measured)},
                       {"tolerance", c.tolerance},
                       {"detail", c.detail}});
    }
    return arr;
}

} // namespace

RunReport run_acceptance(const SuiteOptions& opt)
{
    auto t0 = clock_type::now();
    RunReport r;
    r.suite = "acceptance";
    r.seed = opt.seed;
    r.results = run_numeric(opt);
    if (opt.determinism) {
        CheckOutcome c = timed("C13", "Determinism", [&] {
            SuiteOptions again = opt;
            again.determinism = false;
            again.progress = nullptr;
            int used = opt.threads > 0 ? opt.threads : thread_count();
            again.threads = used == 1 ? 2 : 1;
            std::string a = results_json(r.results).dump();
            std::string b = results_json(run_numeric(again)).dump();
            bool same = a == b;
            return make("C13", "", same, same ? 0.0 : 1.0, "byte-identical report",
                        "rerun with " + std::to_string(again.threads) + " thread(s)");
        });
        if (opt.progress)
            opt.progress(c);
        r.results.push_back(c);
    }
    r.wall_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return r;
}

RunReport run_model_checks(const LevyModel& model, const SuiteOptions& opt)
{
    auto t0 = clock_type::now();
    RunReport r;
    r.suite = "model";
    r.seed = opt.seed;
    auto add = [&](CheckOutcome c) {
        if (opt.progress)
            opt.progress(c);
        r.results.push_back(std::move(c));
    };
    auto skip = [](std::string why) {
        CheckOutcome c;
        c.status = CheckStatus::Skip;
        c.measured = std::nan("");
        c.detail = std::move(why);
        return c;
    };
    const ModelScalars& s = model.scalars();
    bool mellin = !DensityEvaluator::has_closed_form(model);
    bool density_ok = !(mellin && s.flags.n_inf_c);

    add(timed("M01", "Functional-equation residual", [&] {
        double v = max_residual(model);
        return make("", "", v <= 1e-9, v, "<= 1e-9");
    }));
    add(timed("M02", "Moment consistency", [&] {
        if (!density_ok)
            return skip("no density evaluator for this class");
        double v = moment_error(model, 8);
        double tol = mellin ? 1e-5 : 1e-6;
        return make("", "", v <= tol, v, "<= " + sci(tol));
    }));
    add(timed("M03", "Gram matrix identity", [&] {
        if (!density_ok)
            return skip("no density evaluator for this class");
        int N = mellin ? 4 : 6;
        double tol = mellin ? 1e-4 : 1e-6;
        try {
            double v = max_identity_deviation(gram(model, N, opt.threads));
            return make("", "", v <= tol, v, "<= " + sci(tol), "N=" + std::to_string(N));
        } catch (const MembershipWarning& e) {
            return skip(e.what());
        }
    }));
    add(timed("M04", "Eigenpolynomial norm bound", [&] {
        if (!density_ok)
            return skip("no density evaluator for this class");
        double v = max_eigen_norm(model, 12);
        return make("", "", v <= 1.0 + 1e-8, v, "<= 1 + 1e-8");
    }));
    add(timed("M05", "Monte-Carlo eigen check", [&] {
        PathConfig cfg = path_config(opt);
        std::vector<double> xs;
        try {
            xs = sample_gl(model, cfg, 1.0, 0.5);
        } catch (const UnsupportedJumpsError& e) {
            return skip(e.what());
        }
        double max_z = 0.0;
        for (int n = 1; n <= 3; ++n)
            max_z = std::max(max_z, std::abs(eigen_check(model, xs, 1.0, 0.5, n).z));
        return make("", "", max_z <= 3.0, max_z, "|z| <= 3", "x0=1 t=0.5 n=1..3");
    }));
    r.wall_seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return r;
}

nlohmann::json report_json(const RunReport& r)
{
    nlohmann::json j;
    j["suite"] = r.suite;
    j["environment"] = {{"seed", r.seed}, {"version", GLSPEC_VERSION}};
    j["results"] = results_json(r.results);
    j["passed"] = r.all_passed();
    return j;
}

std::string report_text(const RunReport& r)
{
    std::ostringstream os;
    for (const auto& c : r.results) {
        char line[512];
        std::snprintf(line, sizeof line, "%-4s %-4s %-34s measured=%-12s tol=%s (%.1fs)", c.id.c_str(),
                      to_string(c.status).c_str(), c.title.c_str(), sci(c.measured).c_str(), c.tolerance.c_str(),
                      c.seconds);
        os << line;
        if (!c.detail.empty())
            os << "  " << c.detail;
        os << '\n';
    }
    char tail[128];
    std::snprintf(tail, sizeof tail, "seed %llu, wall time %.1fs\n", static_cast<unsigned long long>(r.seed),
                  r.wall_seconds);
    os << tail;
    return os.str();
}

} // namespace glspec
