#include "core/transport.hpp"

#include "core/error.hpp"
#include "core/geometry.hpp"
#include "core/random.hpp"
#include "core/softmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace illumest {

namespace {

constexpr std::uint64_t kReferenceStream = 1;
constexpr std::uint64_t kSubsampleStream = 2;

constexpr double kOmega = 1.8; // over-relaxation at the target blur

inline double sq_dist(const CloudPoint& x, const CloudPoint& y) noexcept
{
    const double du = x.u - y.u;
    const double dv = x.v - y.v;
    return du * du + dv * dv;
}

double weighted_sum(const std::vector<double>& w, const std::vector<double>& x)
{
    CompensatedSum s;
    for (std::size_t i = 0; i < w.size(); ++i)
        s.add(w[i] * x[i]);
    return s.value();
}

double joint_diameter(const WeightedCloud& a, const WeightedCloud& b)
{
    double umin = std::numeric_limits<double>::infinity();
    double vmin = umin;
    double umax = -umin;
    double vmax = -umin;
    for (const auto* c : {&a, &b}) {
        for (const CloudPoint& p : c->points()) {
            umin = std::min(umin, p.u);
            umax = std::max(umax, p.u);
            vmin = std::min(vmin, p.v);
            vmax = std::max(vmax, p.v);
        }
    }
    return std::hypot(umax - umin, vmax - vmin);
}

// Blur values visited by the solver, ending with the target blur.
std::vector<double> blur_schedule(const WeightedCloud& a, const WeightedCloud& b,
                                  const TransportConfig& cfg)
{
    std::vector<double> out;
    if (cfg.scaling > 0.0 && cfg.scaling < 1.0) {
        for (double s = joint_diameter(a, b); s > cfg.blur; s *= cfg.scaling)
            out.push_back(s);
    }
    out.push_back(cfg.blur);
    return out;
}

// Total order on clouds used to fix the update order of a pair.
bool cloud_less(const WeightedCloud& a, const WeightedCloud& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const CloudPoint& p = a.points()[i];
        const CloudPoint& q = b.points()[i];
        if (p.u != q.u)
            return p.u < q.u;
        if (p.v != q.v)
            return p.v < q.v;
    }
    return a.weights() < b.weights();
}

struct Solved {
    EntropicSolve stats;
    std::vector<double> f; // potential on a
    std::vector<double> g; // potential on b
};

// Marginal of the plan built on (p, q) relative to the weights w, where
// pt = softmin of q: max_i w_i |exp((p_i - pt_i)/eps) - 1|, plus total mass.
std::pair<double, double> marginal_check(const std::vector<double>& w,
                                         const std::vector<double>& p,
                                         const std::vector<double>& pt, double eps)
{
    double err = 0.0;
    CompensatedSum mass;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = std::expm1((p[i] - pt[i]) / eps);
        err = std::max(err, w[i] * std::abs(d));
        mass.add(w[i] * d);
    }
    return {err, 1.0 + mass.value()};
}

// OT(a,a): symmetric averaged updates on a single potential.
Solved solve_self(const WeightedCloud& a, const TransportConfig& cfg)
{
    const std::vector<double> schedule = blur_schedule(a, a, cfg);
    const int max_iters = cfg.effective_max_iters();
    const double eps = cfg.epsilon();
    detail::SoftminTarget ta(a);

    std::vector<double> f(a.size(), 0.0);
    std::vector<double> ft;
    int iters = 0;
    for (std::size_t s = 0; s + 1 < schedule.size(); ++s) {
        ta.softmin(a.points(), f, schedule[s] * schedule[s], ft);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = s == 0 ? ft[i] : 0.5 * (f[i] + ft[i]);
        ++iters;
    }

    Solved out;
    double mass = 1.0;
    for (;;) {
        ta.softmin(a.points(), f, eps, ft);
        ++iters;
        const auto [err, m] = marginal_check(a.weights(), f, ft, eps);
        out.stats.marginal_err = err;
        mass = m;
        if (err < cfg.tol) {
            out.stats.converged = true;
            break;
        }
        if (iters >= max_iters)
            break;
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = 0.5 * (f[i] + ft[i]);
    }
    out.stats.iters = iters;
    out.stats.value = 2.0 * weighted_sum(a.weights(), f) - eps * (mass - 1.0);
    out.g = f;
    out.f = std::move(f);
    return out;
}

// Alternating log-domain updates, blur annealing, then over-relaxed updates
// at the target blur until both marginals are within tol.
Solved solve_pair(const WeightedCloud& a, const WeightedCloud& b, const TransportConfig& cfg)
{
    const std::vector<double> schedule = blur_schedule(a, b, cfg);
    const int max_iters = cfg.effective_max_iters();
    const double eps = cfg.epsilon();
    detail::SoftminTarget ta(a);
    detail::SoftminTarget tb(b);

    std::vector<double> f(a.size(), 0.0);
    std::vector<double> g(b.size(), 0.0);
    std::vector<double> ft;
    std::vector<double> gt;
    int iters = 0;
    for (std::size_t s = 0; s + 1 < schedule.size(); ++s) {
        const double e = schedule[s] * schedule[s];
        tb.softmin(a.points(), g, e, f);
        ta.softmin(b.points(), f, e, g);
        ++iters;
    }

    Solved out;
    const double omega = kOmega;
    double mass = 1.0;
    for (;;) {
        tb.softmin(a.points(), g, eps, ft);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = (1.0 - omega) * f[i] + omega * ft[i];
        ta.softmin(b.points(), f, eps, gt);
        ++iters;

        const double err_a = marginal_check(a.weights(), f, ft, eps).first;
        const auto [err_b, m] = marginal_check(b.weights(), g, gt, eps);
        const double err = std::max(err_a, err_b);
        out.stats.marginal_err = err;
        mass = m;
        if (err < cfg.tol) {
            out.stats.converged = true;
            break;
        }
        if (iters >= max_iters)
            break;
        for (std::size_t j = 0; j < g.size(); ++j)
            g[j] = (1.0 - omega) * g[j] + omega * gt[j];
    }
    out.stats.iters = iters;
    out.stats.value =
        weighted_sum(a.weights(), f) + weighted_sum(b.weights(), g) - eps * (mass - 1.0);
    out.f = std::move(f);
    out.g = std::move(g);
    return out;
}

// Exactly symmetric in its arguments: the pair is always solved in a fixed
// order and the potentials are swapped back.
Solved solve(const WeightedCloud& a, const WeightedCloud& b, const TransportConfig& cfg)
{
    if (a.size() == 0 || b.size() == 0)
        throw Error(ErrorCode::EmptySet, "entropic_ot: empty cloud");
    cfg.validate();
    if (a == b)
        return solve_self(a, cfg);
    if (cloud_less(b, a)) {
        Solved s = solve_pair(b, a, cfg);
        std::swap(s.f, s.g);
        return s;
    }
    return solve_pair(a, b, cfg);
}

} // namespace

// ---------------------------------------------------------------------------

WeightedCloud::WeightedCloud(std::vector<CloudPoint> points, std::vector<double> weights)
    : m_points(std::move(points)), m_weights(std::move(weights))
{
    if (m_points.empty())
        throw Error(ErrorCode::EmptySet, "WeightedCloud: no points");
    if (m_points.size() != m_weights.size())
        throw Error(ErrorCode::SizeMismatch, "WeightedCloud: points and weights differ in size");
    CompensatedSum total;
    for (double w : m_weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw Error(ErrorCode::InvalidParam, "WeightedCloud: weights must be finite and >= 0");
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidParam, "WeightedCloud: weights must sum to 1");
    for (const CloudPoint& p : m_points)
        if (!std::isfinite(p.u) || !std::isfinite(p.v))
            throw Error(ErrorCode::InvalidParam, "WeightedCloud: non-finite coordinate");
}

WeightedCloud WeightedCloud::uniform(std::vector<CloudPoint> points)
{
    if (points.empty())
        throw Error(ErrorCode::EmptySet, "WeightedCloud: no points");
    std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
    return WeightedCloud(std::move(points), std::move(w));
}

bool WeightedCloud::has_uniform_weights() const noexcept
{
    const double expect = 1.0 / static_cast<double>(m_weights.size());
    return std::all_of(m_weights.begin(), m_weights.end(),
                       [&](double w) { return std::abs(w - expect) <= 1e-12; });
}

int TransportConfig::effective_max_iters() const noexcept
{
    return blur < 0.01 ? std::max(max_iters, 2000) : max_iters;
}

void TransportConfig::validate() const
{
    if (!(blur > 0.0) || !std::isfinite(blur))
        throw Error(ErrorCode::InvalidParam, "blur must be > 0");
    if (max_iters < 1)
        throw Error(ErrorCode::InvalidParam, "max_iters must be >= 1");
    if (!(tol > 0.0))
        throw Error(ErrorCode::InvalidParam, "tol must be > 0");
    if (subsample_cap < 1)
        throw Error(ErrorCode::InvalidParam, "subsample_cap must be >= 1");
    if (!(scaling >= 0.0 && scaling < 1.0))
        throw Error(ErrorCode::InvalidParam, "scaling must be in [0, 1)");
}

PixelSet sample_uniform_reference(std::size_t n, int width, int height, std::uint64_t seed)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidParam, "sample_uniform_reference: n must be >= 1");
    if (width < 1 || height < 1)
        throw Error(ErrorCode::InvalidParam, "sample_uniform_reference: bad raster size");
    rnd::Engine eng(seed);
    PixelSet out;
    out.source_width = width;
    out.source_height = height;
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto col = static_cast<int>(rnd::uniform_index(eng, static_cast<std::uint64_t>(width)));
        const auto row = static_cast<int>(rnd::uniform_index(eng, static_cast<std::uint64_t>(height)));
        out.points.push_back({row, col});
    }
    return out;
}

WeightedCloud normalize_cloud(const PixelSet& points)
{
    if (points.empty())
        throw Error(ErrorCode::EmptySet, "normalize_cloud: empty point set");
    if (points.source_width < 1 || points.source_height < 1)
        throw Error(ErrorCode::InvalidParam, "normalize_cloud: bad source dimensions");
    const double su = std::max(points.source_width - 1, 1);
    const double sv = std::max(points.source_height - 1, 1);
    std::vector<CloudPoint> pts;
    pts.reserve(points.size());
    for (const PixelCoord& p : points.points)
        pts.push_back({p.col / su, p.row / sv});
    return WeightedCloud::uniform(std::move(pts));
}

WeightedCloud pixel_cloud(const PixelSet& points)
{
    if (points.empty())
        throw Error(ErrorCode::EmptySet, "pixel_cloud: empty point set");
    std::vector<CloudPoint> pts;
    pts.reserve(points.size());
    for (const PixelCoord& p : points.points)
        pts.push_back({static_cast<double>(p.col), static_cast<double>(p.row)});
    return WeightedCloud::uniform(std::move(pts));
}

std::uint64_t reference_seed(std::uint64_t seed) noexcept
{
    return rnd::derive_seed(seed, kReferenceStream);
}

std::uint64_t subsample_seed(std::uint64_t seed) noexcept
{
    return rnd::derive_seed(seed, kSubsampleStream);
}

WeightedCloud subsample_cloud(const WeightedCloud& cloud, std::size_t cap, std::uint64_t seed)
{
    if (cloud.size() <= cap)
        return cloud;
    std::vector<CloudPoint> pts;
    pts.reserve(cap);
    for (std::size_t idx : rnd::sample_without_replacement(cloud.size(), cap, seed))
        pts.push_back(cloud.points()[idx]);
    return WeightedCloud::uniform(std::move(pts));
}

PixelSet subsample_pixels(const PixelSet& points, std::size_t cap, std::uint64_t seed)
{
    if (points.size() <= cap)
        return points;
    PixelSet out;
    out.source_width = points.source_width;
    out.source_height = points.source_height;
    out.points.reserve(cap);
    for (std::size_t idx : rnd::sample_without_replacement(points.size(), cap, seed))
        out.points.push_back(points.points[idx]);
    return out;
}

EntropicSolve entropic_ot(const WeightedCloud& a, const WeightedCloud& b,
                          const TransportConfig& cfg)
{
    return solve(a, b, cfg).stats;
}

TransportPlan entropic_plan(const WeightedCloud& a, const WeightedCloud& b,
                            const TransportConfig& cfg)
{
    const Solved s = solve(a, b, cfg);
    const double eps = cfg.epsilon();
    TransportPlan plan;
    plan.rows = a.size();
    plan.cols = b.size();
    plan.coupling.resize(plan.rows * plan.cols);
    for (std::size_t i = 0; i < plan.rows; ++i)
        for (std::size_t j = 0; j < plan.cols; ++j)
            plan.coupling[i * plan.cols + j] =
                a.weights()[i] * b.weights()[j] *
                std::exp((s.f[i] + s.g[j] - sq_dist(a.points()[i], b.points()[j])) / eps);
    return plan;
}

TransportResult sinkhorn_divergence(const WeightedCloud& a_in, const WeightedCloud& b_in,
                                    const TransportConfig& cfg)
{
    cfg.validate();
    TransportResult res;
    res.subsampled = a_in.size() > cfg.subsample_cap || b_in.size() > cfg.subsample_cap;

    // Both sides use the same subsample stream so that identical inputs
    // stay identical after subsampling.
    const std::uint64_t sub_seed = subsample_seed(cfg.seed);
    const WeightedCloud a = subsample_cloud(a_in, cfg.subsample_cap, sub_seed);
    const WeightedCloud b = subsample_cloud(b_in, cfg.subsample_cap, sub_seed);
    res.n_source = a.size();
    res.n_target = b.size();

    const EntropicSolve ab = entropic_ot(a, b, cfg);
    const EntropicSolve aa = entropic_ot(a, a, cfg);
    const EntropicSolve bb = entropic_ot(b, b, cfg);

    res.ot_eps = ab.value;
    res.divergence = ab.value - 0.5 * aa.value - 0.5 * bb.value;
    res.w2 = std::sqrt(std::max(res.divergence, 0.0));
    res.iters = ab.iters;
    res.converged = ab.converged && aa.converged && bb.converged;
    res.marginal_err = std::max({ab.marginal_err, aa.marginal_err, bb.marginal_err});
    return res;
}

std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n)
{
    if (cost.size() != n * n)
        throw Error(ErrorCode::SizeMismatch, "solve_assignment: cost matrix is not n x n");
    if (n == 0)
        return {};

    // Shortest augmenting paths with dual potentials (1-based; column 0 is
    // the virtual source).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0); // column -> row
    std::vector<std::size_t> way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> assignment(n);
    for (std::size_t j = 1; j <= n; ++j)
        assignment[match[j] - 1] = j - 1;
    return assignment;
}

ExactTransport exact_w2_assignment(const WeightedCloud& a, const WeightedCloud& b)
{
    if (a.size() != b.size())
        throw Error(ErrorCode::SizeMismatch,
                    "exact_w2_assignment: clouds differ in size (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    const std::size_t n = a.size();
    if (n > kExactMaxPoints)
        throw Error(ErrorCode::TooLarge, "exact_w2_assignment: more than " +
                                             std::to_string(kExactMaxPoints) + " points");
    if (!a.has_uniform_weights() || !b.has_uniform_weights())
        throw Error(ErrorCode::NonUniformWeights, "exact_w2_assignment: weights must be 1/n");

    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost[i * n + j] = sq_dist(a.points()[i], b.points()[j]);

    ExactTransport out;
    out.assignment = solve_assignment(cost, n);

    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i)
        total.add(cost[i * n + out.assignment[i]]);
    out.w2 = std::sqrt(std::max(total.value() / static_cast<double>(n), 0.0));

    const double mass = 1.0 / static_cast<double>(n);
    out.plan.rows = n;
    out.plan.cols = n;
    out.plan.coupling.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        out.plan.coupling[i * n + out.assignment[i]] = mass;
    return out;
}

} // namespace illumest
