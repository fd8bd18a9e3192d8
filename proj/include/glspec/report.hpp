#pragma once

#include "glspec/levy_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace glspec {

/// Built-in copies of the preset families: classical_m1, gamma, small_perturbation_m2,
/// sawtooth, gauss_laguerre and mixture.
LevyModel preset(const std::string& name);
std::vector<std::string> preset_names();

enum class CheckStatus { Pass, Fail, Skip };

std::string to_string(CheckStatus s);

struct CheckOutcome {
    std::string id;
    std::string title;
    CheckStatus status = CheckStatus::Skip;
    double measured = 0.0;
    std::string tolerance;
    std::string detail;
    double seconds = 0.0;  // human text only
};

struct RunReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckOutcome> results;
    double wall_seconds = 0.0;  // human text only

    bool all_passed() const;
};

struct SuiteOptions {
    std::uint64_t seed = 20240611;
    long paths = 100000;
    double dt = 1e-3;
    int threads = 0;
    bool determinism = true;  // reruns the suite for criterion 13
    std::function<void(const CheckOutcome&)> progress;
};

/// Acceptance criteria 1–13.
RunReport run_acceptance(const SuiteOptions& opt);

/// Property checks for one model.
RunReport run_model_checks(const LevyModel& model, const SuiteOptions& opt);

/// Deterministic JSON: no timings.
nlohmann::json report_json(const RunReport& r);
std::string report_text(const RunReport& r);

/// Shortest decimal that round-trips, at most 17 significant digits.
std::string format_double(double v);

} // namespace glspec
