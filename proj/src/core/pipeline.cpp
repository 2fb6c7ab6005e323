#include "core/pipeline.hpp"

#include "core/aux_estimators.hpp"
#include "core/codec.hpp"
#include "core/detect.hpp"
#include "core/geometry.hpp"
#include "core/random.hpp"
#include "core/report_json.hpp"
#include "core/transport.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace illumest {

namespace {

constexpr std::uint64_t kClusterStream = 3;

std::optional<double> maybe_cosine(Vec2 a, Vec2 b)
{
    if (a.is_zero() || b.is_zero())
        return std::nullopt;
    return cosine_similarity(a, b);
}

std::optional<double> maybe_angle(Vec2 a, Vec2 b)
{
    if (a.is_zero() || b.is_zero())
        return std::nullopt;
    return angle_between_deg(a, b);
}

void fill_direction(IlluminationReport& r, const DirectionEstimate& est)
{
    r.centroid = est.centroid;
    r.center = est.center;
    r.direction = est.vector;
    r.angle_deg = est.angle_deg;
}

AuxSection run_aux(const GrayImage& gray, const PixelSet& bright, const PixelSet& reference,
                   const DirectionEstimate& est, const AnalysisOptions& opts)
{
    AuxSection a;

    const aux::BrightestPixel bp = aux::brightest_pixel_direction(gray);
    a.brightest_px = bp.pixel;
    a.brightest_dir = bp.direction;
    a.cos_sim_brightest_vs_centroid = maybe_cosine(bp.direction, est.vector);

    if (gray.width() >= 3 && gray.height() >= 3) {
        a.gradient_dir = aux::average_gradient_direction(gray);
        a.gradient_angle_diff_deg = maybe_angle(*a.gradient_dir, est.vector);
    }

    const std::size_t k = std::min(opts.k, bright.size());
    const aux::KMeansResult km =
        aux::cluster_bright_pixels(bright, k, rnd::derive_seed(opts.seed, kClusterStream));
    for (const aux::Cluster& c : km.clusters)
        a.clusters.push_back({c.centroid, c.size, c.direction, c.angle_div_deg});

    try {
        const aux::Moments m = aux::moments_comparison(bright, reference);
        a.mean_diff_x = m.mean_diff_x;
        a.mean_diff_y = m.mean_diff_y;
        a.var_x_bright = m.var_x_b;
        a.var_y_bright = m.var_y_b;
        a.var_x_reference = m.var_x_r;
        a.var_y_reference = m.var_y_r;
        if (m.variance_ratio > 0.0)
            a.variance_ratio = m.variance_ratio;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateReference)
            throw;
        // A single-point reference has no spread; the means are still defined.
        const Point2d mb = centroid(bright);
        const Point2d mr = centroid(reference);
        a.mean_diff_x = std::abs(mb.col - mr.col);
        a.mean_diff_y = std::abs(mb.row - mr.row);
    }

    const std::uint64_t sub_seed = subsample_seed(opts.seed);
    const PixelSet bs = subsample_pixels(bright, opts.subsample_cap, sub_seed);
    const PixelSet rs = subsample_pixels(reference, opts.subsample_cap, sub_seed);
    a.hausdorff_subsampled = bs.size() < bright.size() || rs.size() < reference.size();
    a.hausdorff_px = aux::hausdorff_distance(bs, rs);
    return a;
}

} // namespace

void AnalysisOptions::validate() const
{
    if (threshold < 0 || threshold > 255)
        throw Error(ErrorCode::InvalidParam, "threshold must be in [0, 255]");
    if (k < 1)
        throw Error(ErrorCode::InvalidParam, "k must be >= 1");
    TransportConfig cfg;
    cfg.blur = blur;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.subsample_cap = subsample_cap;
    cfg.validate();
}

IlluminationReport analyze_gray(const GrayImage& gray, const std::string& label,
                                const AnalysisOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    opts.validate();

    IlluminationReport r;
    r.input_path = label;
    r.width = gray.width();
    r.height = gray.height();
    r.threshold_mode = opts.threshold_mode;
    r.seed = opts.seed;
    r.threshold_used =
        opts.threshold_mode == ThresholdMode::Otsu ? otsu_threshold(gray) : opts.threshold;

    const BrightSet bright = mask_to_pixel_set(threshold_mask(gray, r.threshold_used));
    r.n_bright = bright.pixels.size();

    if (bright.empty_warning) {
        r.warning = kEmptyBrightSetWarning;
        if (opts.paper_literal_empty)
            fill_direction(r, direction_from_centroid({0.0, 0.0}, gray.width(), gray.height(), 0));
    } else {
        const PixelSet& b = bright.pixels;
        const DirectionEstimate est = direction(b);
        fill_direction(r, est);

        const PixelSet reference = sample_uniform_reference(b.size(), gray.width(), gray.height(),
                                                            reference_seed(opts.seed));
        TransportConfig cfg;
        cfg.blur = opts.blur;
        cfg.max_iters = opts.max_iters;
        cfg.tol = opts.tol;
        cfg.seed = opts.seed;
        cfg.subsample_cap = opts.subsample_cap;

        const TransportResult tr =
            opts.normalize ? sinkhorn_divergence(normalize_cloud(b), normalize_cloud(reference), cfg)
                           : sinkhorn_divergence(pixel_cloud(b), pixel_cloud(reference), cfg);
        WassersteinSection w;
        w.w2 = tr.w2;
        w.ot_eps = tr.ot_eps;
        w.divergence = tr.divergence;
        w.blur = opts.blur;
        w.iters = tr.iters;
        w.converged = tr.converged;
        w.marginal_err = tr.marginal_err;
        w.subsampled = tr.subsampled;
        w.normalized = opts.normalize;
        w.n_source = tr.n_source;
        w.n_reference = tr.n_target;
        r.wasserstein = w;

        r.aux = run_aux(gray, b, reference, est, opts);
    }

    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                       .count();
    quantize_report(r);
    return r;
}

IlluminationReport analyze_rgb(const RgbImage& img, const std::string& label,
                               const AnalysisOptions& opts)
{
    return analyze_gray(to_grayscale(img), label, opts);
}

IlluminationReport analyze_image(const std::filesystem::path& path, const AnalysisOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    const RgbImage img = decode_image(read_file(path));
    IlluminationReport r = analyze_rgb(img, path.string(), opts);
    r.runtime_ms = quantize(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    return r;
}

std::vector<BatchEntry> batch(const std::vector<std::filesystem::path>& paths,
                              const AnalysisOptions& opts, unsigned jobs)
{
    std::vector<BatchEntry> entries(paths.size());
    if (paths.empty())
        return entries;

    unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, paths.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < paths.size(); i = next++) {
            BatchEntry& e = entries[i];
            e.input_path = paths[i].string();
            try {
                e.report = analyze_image(paths[i], opts);
            } catch (const Error& err) {
                e.error = err.code();
                e.error_message = err.what();
            } catch (const std::exception& err) {
                e.error = ErrorCode::Internal;
                e.error_message = err.what();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(work);
    }
    return entries;
}

std::string batch_to_json(const std::vector<BatchEntry>& entries, bool include_runtime, int indent)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const BatchEntry& e : entries) {
        nlohmann::ordered_json j;
        j["input_path"] = e.input_path;
        if (e.ok()) {
            j["status"] = "ok";
            j["error"] = nullptr;
            j["report"] = report_json_value(*e.report, include_runtime);
        } else {
            j["status"] = "error";
            j["error"] = {{"code", to_string(e.error.value_or(ErrorCode::Internal))},
                          {"message", e.error_message}};
            j["report"] = nullptr;
        }
        out.push_back(std::move(j));
    }
    return out.dump(indent);
}

} // namespace illumest
