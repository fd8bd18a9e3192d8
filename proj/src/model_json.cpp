#include "glspec/model_json.hpp"

#include "glspec/errors.hpp"

#include <fstream>
#include <sstream>

namespace glspec {

namespace {

using nlohmann::json;

double get_number(const json& obj, const std::string& key, const std::string& path, bool required = true,
                  double fallback = 0.0)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        if (required)
            throw ParseError(path + key + ": missing field");
        return fallback;
    }
    if (!it->is_number())
        throw ParseError(path + key + ": expected a number");
    return it->get<double>();
}

JumpFamily parse_jumps(const json& j)
{
    if (!j.is_object())
        throw ParseError("jumps: expected an object");
    auto kind_it = j.find("kind");
    if (kind_it == j.end() || !kind_it->is_string())
        throw ParseError("jumps.kind: expected one of empty, exp_mixture, gauss_laguerre");
    std::string kind = kind_it->get<std::string>();
    if (kind == "empty")
        return EmptyJumps{};
    if (kind == "exp_mixture") {
        auto comps = j.find("components");
        if (comps == j.end() || !comps->is_array())
            throw ParseError("jumps.components: expected an array");
        ExpMixture mix;
        for (size_t i = 0; i < comps->size(); ++i) {
            const json& c = (*comps)[i];
            std::string path = "jumps.components[" + std::to_string(i) + "].";
            if (!c.is_object())
                throw ParseError(path.substr(0, path.size() - 1) + ": expected an object");
            double cv = get_number(c, "c", path), bv = get_number(c, "b", path);
            if (!(cv > 0.0))
                throw ParseError(path + "c: must be positive");
            if (!(bv > 0.0))
                throw ParseError(path + "b: must be positive");
            mix.components.push_back({cv, bv});
        }
        if (mix.components.empty())
            throw ParseError("jumps.components: must not be empty");
        return mix;
    }
    if (kind == "gauss_laguerre") {
        double a = get_number(j, "alpha", "jumps.");
        double mf = get_number(j, "mfrak", "jumps.");
        if (!(a > 0.0 && a <= 1.0))
            throw ParseError("jumps.alpha: must lie in (0, 1]");
        if (!(mf >= 1.0 - 1.0 / a - 1e-14))
            throw ParseError("jumps.mfrak: must satisfy mfrak >= 1 - 1/alpha");
        return GaussLaguerreKernel{a, mf};
    }
    throw ParseError("jumps.kind: unknown kind '" + kind + "'");
}

} // namespace

LevyModel model_from_json(const json& j)
{
    if (!j.is_object())
        throw ParseError("model: expected a JSON object");
    double s2 = get_number(j, "sigma2", "");
    double m = get_number(j, "m", "");
    if (!(s2 >= 0.0))
        throw ParseError("sigma2: must be nonnegative");
    if (!(m >= 0.0))
        throw ParseError("m: must be nonnegative");
    auto jt = j.find("jumps");
    JumpFamily jumps = EmptyJumps{};
    if (jt != j.end())
        jumps = parse_jumps(*jt);
    try {
        return LevyModel(s2, m, jumps);
    } catch (const DomainError& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
}

LevyModel parse_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model: invalid JSON: ") + e.what());
    }
    return model_from_json(j);
}

LevyModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

json model_to_json(const LevyModel& model)
{
    json j;
    j["sigma2"] = model.sigma2();
    j["m"] = model.m();
    if (model.is_empty()) {
        j["jumps"] = {{"kind", "empty"}};
    } else if (auto* mix = std::get_if<ExpMixture>(&model.jumps())) {
        json comps = json::array();
        for (const auto& c : mix->components)
            comps.push_back({{"c", c.c}, {"b", c.b}});
        j["jumps"] = {{"kind", "exp_mixture"}, {"components", comps}};
    } else if (auto* gl = std::get_if<GaussLaguerreKernel>(&model.jumps())) {
        j["jumps"] = {{"kind", "gauss_laguerre"}, {"alpha", gl->alpha}, {"mfrak", gl->mfrak}};
    }
    return j;
}

json scalars_to_json(const ModelScalars& s)
{
    json j;
    auto ext = [](double v) -> json {
        if (std::isinf(v))
            return "inf";
        return v;
    };
    j["rho"] = ext(s.rho);
    j["n_rho"] = s.n_rho.infinite ? json("inf") : json(s.n_rho.value);
    j["d_phi"] = s.d_phi;
    j["pibar0"] = ext(s.pibar0);
    j["pibarbar0"] = ext(s.pibarbar0);
    json flags = json::array();
    if (s.flags.n_p)
        flags.push_back("N_P");
    if (s.flags.n_inf)
        flags.push_back("N_inf");
    if (s.flags.n_inf_c)
        flags.push_back("N_inf_c");
    if (s.flags.n_alpha)
        flags.push_back("N_alpha");
    j["class_flags"] = flags;
    if (s.flags.n_alpha) {
        j["alpha"] = s.flags.alpha;
        j["c_alpha"] = s.flags.c_alpha;
    }
    return j;
}

} // namespace glspec
