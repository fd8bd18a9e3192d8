#pragma once

#include "glspec/levy_model.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace glspec {

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Uniform and normal variates from the stream keyed by (seed, path).
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path);

    double uniform();  // in (0, 1)
    double normal();
    double exponential(double rate);

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int next_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct PathConfig {
    double dt = 1e-3;
    double horizon = 0.0;  // 0 sizes the ξ horizon from the clock target
    long n_paths = 100000;
    std::uint64_t seed = 0;
    double truncate_eps = 0.0;  // drops jumps below eps for the Gauss–Laguerre kernel
    int threads = 0;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
};

/// Pairwise mean and standard error of per-path values.
MCEstimate estimate(const std::vector<double>& values);

/// Summary of the small-jump truncation applied to an infinite-activity kernel.
struct TruncationInfo {
    bool truncated = false;
    double eps = 0.0;
    double rate = 0.0;            // Π̄(eps)
    double dropped_variance = 0.0;  // ∫_0^eps y² Π(dy) per unit time
};

TruncationInfo truncation_info(const LevyModel& model, const PathConfig& cfg);

/// ξ on the grid k·dt, k = 0..⌈horizon/dt⌉, for one path.
std::vector<double> simulate_xi(const LevyModel& model, const PathConfig& cfg, std::uint64_t path);

/// ξ_t for every path.
std::vector<double> sample_xi(const LevyModel& model, const PathConfig& cfg, double t);

/// X_t under the gL semigroup started at x0, one value per path.
std::vector<double> sample_gl(const LevyModel& model, const PathConfig& cfg, double x0, double t);

struct CheckResult {
    MCEstimate estimate;
    double target = 0.0;
    double z = 0.0;
};

/// Ê[𝒫ₙ(X_t)] against e^{−nt}𝒫ₙ(x0).
CheckResult eigen_check(const LevyModel& model, const PathConfig& cfg, double x0, double t, int n);
/// Ê[X_t^n] against W_φ(n+1).
CheckResult moment_check(const LevyModel& model, const PathConfig& cfg, double x0, double t, int n);

/// Same checks on samples already drawn by sample_gl.
CheckResult eigen_check(const LevyModel& model, const std::vector<double>& samples, double x0, double t, int n);
CheckResult moment_check(const LevyModel& model, const std::vector<double>& samples, int n);

} // namespace glspec
