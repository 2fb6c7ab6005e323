#pragma once

#include "core/detect.hpp"

#include <cstdint>
#include <vector>

namespace illumest {

/// Point of the ground space [0,1]^2 (or pixel space when normalization is off).
struct CloudPoint {
    double u = 0.0; // column axis
    double v = 0.0; // row axis

    friend bool operator==(const CloudPoint&, const CloudPoint&) = default;
};

/// Discrete probability measure: points with nonnegative weights summing to 1.
class WeightedCloud {
public:
    WeightedCloud(std::vector<CloudPoint> points, std::vector<double> weights);

    static WeightedCloud uniform(std::vector<CloudPoint> points);

    std::size_t size() const noexcept { return m_points.size(); }
    const std::vector<CloudPoint>& points() const noexcept { return m_points; }
    const std::vector<double>& weights() const noexcept { return m_weights; }
    bool has_uniform_weights() const noexcept;

    friend bool operator==(const WeightedCloud&, const WeightedCloud&) = default;

private:
    std::vector<CloudPoint> m_points;
    std::vector<double> m_weights;
};

struct TransportConfig {
    double blur = 0.05;           // length scale; epsilon = blur^2
    int max_iters = 500;          // raised to 2000 when blur < 0.01
    double tol = 1e-6;            // max per-point marginal violation
    std::uint64_t seed = 0;
    std::size_t subsample_cap = 4096;
    // Blur annealing factor in (0,1): potentials are warm-started through
    // blur = diameter, diameter*s, ... down to the target. 0 runs a single
    // epsilon from cold potentials.
    double scaling = 0.5;

    double epsilon() const noexcept { return blur * blur; }
    int effective_max_iters() const noexcept;
    void validate() const;
};

/// Dense n x m coupling.
struct TransportPlan {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> coupling; // row-major

    double at(std::size_t i, std::size_t j) const { return coupling[i * cols + j]; }
};

struct EntropicSolve {
    double value = 0.0; // OT_eps
    int iters = 0;
    bool converged = false;
    double marginal_err = 0.0;
};

struct TransportResult {
    double w2 = 0.0;
    double ot_eps = 0.0;
    double divergence = 0.0;
    int iters = 0;
    bool converged = false;
    double marginal_err = 0.0;
    bool subsampled = false;
    std::size_t n_source = 0;
    std::size_t n_target = 0;
};

// Independent uniform draws: col ~ U{0..w-1}, row ~ U{0..h-1}; duplicates allowed.
PixelSet sample_uniform_reference(std::size_t n, int width, int height, std::uint64_t seed);

// col / max(w-1, 1), row / max(h-1, 1) with uniform weights.
WeightedCloud normalize_cloud(const PixelSet& points);

// Pixel coordinates as-is, uniform weights.
WeightedCloud pixel_cloud(const PixelSet& points);

// Seeded subsample to at most cap points, original order kept.
WeightedCloud subsample_cloud(const WeightedCloud& cloud, std::size_t cap, std::uint64_t seed);
PixelSet subsample_pixels(const PixelSet& points, std::size_t cap, std::uint64_t seed);

// Per-purpose streams derived from a run seed: the uniform reference draw and
// the subsample applied to both clouds (and to the Hausdorff inputs).
std::uint64_t reference_seed(std::uint64_t seed) noexcept;
std::uint64_t subsample_seed(std::uint64_t seed) noexcept;

// Entropic OT cost with squared Euclidean ground cost, log-domain Sinkhorn.
EntropicSolve entropic_ot(const WeightedCloud& a, const WeightedCloud& b,
                          const TransportConfig& cfg);

// Plan recovered from the converged potentials.
TransportPlan entropic_plan(const WeightedCloud& a, const WeightedCloud& b,
                            const TransportConfig& cfg);

// OT(a,b) - OT(a,a)/2 - OT(b,b)/2, with w2 = sqrt(max(divergence, 0)).
TransportResult sinkhorn_divergence(const WeightedCloud& a, const WeightedCloud& b,
                                    const TransportConfig& cfg);

struct ExactTransport {
    double w2 = 0.0;
    TransportPlan plan;
    std::vector<std::size_t> assignment; // source i -> target assignment[i]
};

inline constexpr std::size_t kExactMaxPoints = 512;

// Optimal assignment for equal-size uniform clouds (Hungarian algorithm).
ExactTransport exact_w2_assignment(const WeightedCloud& a, const WeightedCloud& b);

// Min-cost perfect matching on a dense n x n matrix, O(n^3).
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n);

} // namespace illumest
