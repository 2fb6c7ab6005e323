#include "illumest/illumest.h"

#include "core/codec.hpp"
#include "core/error.hpp"
#include "core/overlay.hpp"
#include "core/pipeline.hpp"
#include "core/report.hpp"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

struct ilm_options {
    illumest::AnalysisOptions value;
};

struct ilm_report {
    illumest::IlluminationReport value;
};

struct ilm_batch {
    std::vector<illumest::BatchEntry> entries;
    std::vector<ilm_report> reports; // parallel to entries; empty value on failure
};

namespace {

thread_local std::string g_last_error;

ilm_status to_status(illumest::ErrorCode code)
{
    using illumest::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidParam: return ILM_ERR_INVALID_ARGUMENT;
    case ErrorCode::Decode: return ILM_ERR_DECODE;
    case ErrorCode::Io: return ILM_ERR_IO;
    case ErrorCode::EmptySet: return ILM_ERR_EMPTY_SET;
    case ErrorCode::Degenerate: return ILM_ERR_DEGENERATE;
    case ErrorCode::DegenerateReference: return ILM_ERR_DEGENERATE_REFERENCE;
    case ErrorCode::SizeMismatch: return ILM_ERR_SIZE_MISMATCH;
    case ErrorCode::TooLarge: return ILM_ERR_TOO_LARGE;
    case ErrorCode::NonUniformWeights: return ILM_ERR_NON_UNIFORM_WEIGHTS;
    case ErrorCode::TooSmall: return ILM_ERR_TOO_SMALL;
    case ErrorCode::TooFewPoints: return ILM_ERR_TOO_FEW_POINTS;
    case ErrorCode::ZeroVector: return ILM_ERR_ZERO_VECTOR;
    case ErrorCode::DimensionMismatch: return ILM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Internal: return ILM_ERR_INTERNAL;
    }
    return ILM_ERR_INTERNAL;
}

ilm_status fail(ilm_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

// Runs fn, translating exceptions into status codes.
template <class F>
ilm_status guarded(F&& fn) noexcept
{
    try {
        g_last_error.clear();
        fn();
        return ILM_OK;
    } catch (const illumest::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(ILM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ILM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ILM_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s)
{
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ilm_status null_arg(const char* what)
{
    return fail(ILM_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

template <class F>
ilm_status set_option(ilm_options* opts, F&& apply)
{
    if (!opts)
        return null_arg("opts");
    return guarded([&] {
        illumest::AnalysisOptions next = opts->value;
        apply(next);
        next.validate();
        opts->value = next;
    });
}

} // namespace

extern "C" {

const char* ilm_version(void)
{
    return illumest::kToolVersion;
}

const char* ilm_status_string(ilm_status status)
{
    switch (status) {
    case ILM_OK: return "ok";
    case ILM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ILM_ERR_DECODE: return "decode error";
    case ILM_ERR_IO: return "i/o error";
    case ILM_ERR_EMPTY_SET: return "empty point set";
    case ILM_ERR_DEGENERATE: return "degenerate image";
    case ILM_ERR_DEGENERATE_REFERENCE: return "degenerate reference";
    case ILM_ERR_SIZE_MISMATCH: return "size mismatch";
    case ILM_ERR_TOO_LARGE: return "too large";
    case ILM_ERR_NON_UNIFORM_WEIGHTS: return "non-uniform weights";
    case ILM_ERR_TOO_SMALL: return "too small";
    case ILM_ERR_TOO_FEW_POINTS: return "too few points";
    case ILM_ERR_ZERO_VECTOR: return "zero vector";
    case ILM_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case ILM_ERR_NOT_AVAILABLE: return "not available";
    case ILM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ilm_last_error(void)
{
    return g_last_error.c_str();
}

void ilm_string_free(char* s)
{
    delete[] s;
}

ilm_status ilm_options_create(ilm_options** out)
{
    if (!out)
        return null_arg("out");
    return guarded([&] { *out = new ilm_options{}; });
}

void ilm_options_destroy(ilm_options* opts)
{
    delete opts;
}

ilm_status ilm_options_set_threshold(ilm_options* opts, int threshold)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) {
        o.threshold = threshold;
        o.threshold_mode = illumest::ThresholdMode::Fixed;
    });
}

ilm_status ilm_options_set_auto_threshold(ilm_options* opts, int enabled)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) {
        o.threshold_mode = enabled ? illumest::ThresholdMode::Otsu : illumest::ThresholdMode::Fixed;
    });
}

ilm_status ilm_options_set_blur(ilm_options* opts, double blur)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.blur = blur; });
}

ilm_status ilm_options_set_seed(ilm_options* opts, uint64_t seed)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.seed = seed; });
}

ilm_status ilm_options_set_k(ilm_options* opts, uint32_t k)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.k = k; });
}

ilm_status ilm_options_set_subsample_cap(ilm_options* opts, uint64_t cap)
{
    return set_option(opts,
                      [&](illumest::AnalysisOptions& o) { o.subsample_cap = static_cast<std::size_t>(cap); });
}

ilm_status ilm_options_set_normalize(ilm_options* opts, int enabled)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.normalize = enabled != 0; });
}

ilm_status ilm_options_set_paper_literal_empty(ilm_options* opts, int enabled)
{
    return set_option(opts,
                      [&](illumest::AnalysisOptions& o) { o.paper_literal_empty = enabled != 0; });
}

ilm_status ilm_options_set_max_iters(ilm_options* opts, int max_iters)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.max_iters = max_iters; });
}

ilm_status ilm_options_set_tol(ilm_options* opts, double tol)
{
    return set_option(opts, [&](illumest::AnalysisOptions& o) { o.tol = tol; });
}

ilm_status ilm_analyze_file(const ilm_options* opts, const char* path, ilm_report** out)
{
    if (!opts)
        return null_arg("opts");
    if (!path)
        return null_arg("path");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        *out = new ilm_report{illumest::analyze_image(path, opts->value)};
    });
}

ilm_status ilm_analyze_memory(const ilm_options* opts, const uint8_t* data, size_t size,
                              const char* label, ilm_report** out)
{
    if (!opts)
        return null_arg("opts");
    if (!data && size > 0)
        return null_arg("data");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        const illumest::RgbImage img = illumest::decode_image({data, size});
        *out = new ilm_report{illumest::analyze_rgb(img, label ? label : "", opts->value)};
    });
}

void ilm_report_destroy(ilm_report* report)
{
    delete report;
}

ilm_status ilm_report_to_json(const ilm_report* report, int include_runtime, char** out_json)
{
    if (!report)
        return null_arg("report");
    if (!out_json)
        return null_arg("out_json");
    return guarded([&] {
        *out_json = dup_string(illumest::report_to_json(report->value, include_runtime != 0));
    });
}

ilm_status ilm_report_from_json(const char* json, ilm_report** out)
{
    if (!json)
        return null_arg("json");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new ilm_report{illumest::report_from_json(json)}; });
}

size_t ilm_report_n_bright(const ilm_report* report)
{
    return report ? report->value.n_bright : 0;
}

int ilm_report_threshold(const ilm_report* report)
{
    return report ? report->value.threshold_used : -1;
}

int ilm_report_has_warning(const ilm_report* report)
{
    return report && report->value.warning ? 1 : 0;
}

ilm_status ilm_report_centroid(const ilm_report* report, double* row, double* col)
{
    if (!report || !row || !col)
        return null_arg("report/row/col");
    if (!report->value.centroid)
        return fail(ILM_ERR_NOT_AVAILABLE, "report has no centroid");
    *row = report->value.centroid->row;
    *col = report->value.centroid->col;
    return ILM_OK;
}

ilm_status ilm_report_direction(const ilm_report* report, double* d_row, double* d_col)
{
    if (!report || !d_row || !d_col)
        return null_arg("report/d_row/d_col");
    if (!report->value.direction)
        return fail(ILM_ERR_NOT_AVAILABLE, "report has no direction");
    *d_row = report->value.direction->d_row;
    *d_col = report->value.direction->d_col;
    return ILM_OK;
}

ilm_status ilm_report_angle_deg(const ilm_report* report, double* angle_deg)
{
    if (!report || !angle_deg)
        return null_arg("report/angle_deg");
    if (!report->value.angle_deg)
        return fail(ILM_ERR_NOT_AVAILABLE, "report has no direction angle");
    *angle_deg = *report->value.angle_deg;
    return ILM_OK;
}

ilm_status ilm_report_w2(const ilm_report* report, double* w2)
{
    if (!report || !w2)
        return null_arg("report/w2");
    if (!report->value.wasserstein)
        return fail(ILM_ERR_NOT_AVAILABLE, "report has no transport section");
    *w2 = report->value.wasserstein->w2;
    return ILM_OK;
}

ilm_status ilm_report_hausdorff(const ilm_report* report, double* pixels)
{
    if (!report || !pixels)
        return null_arg("report/pixels");
    if (!report->value.aux)
        return fail(ILM_ERR_NOT_AVAILABLE, "report has no auxiliary section");
    *pixels = report->value.aux->hausdorff_px;
    return ILM_OK;
}

ilm_status ilm_render_overlay(const char* image_path, const ilm_report* report,
                              const char* out_png_path)
{
    if (!image_path || !report || !out_png_path)
        return null_arg("image_path/report/out_png_path");
    return guarded([&] {
        const illumest::RgbImage img = illumest::decode_image(illumest::read_file(image_path));
        const illumest::RgbImage overlay = illumest::render_overlay(img, report->value);
        illumest::write_file(out_png_path, illumest::encode_png(overlay));
    });
}

ilm_status ilm_batch_run(const ilm_options* opts, const char* const* paths, size_t count,
                         unsigned jobs, ilm_batch** out)
{
    if (!opts)
        return null_arg("opts");
    if (!paths && count > 0)
        return null_arg("paths");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        std::vector<std::filesystem::path> list;
        list.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (!paths[i])
                throw illumest::Error(illumest::ErrorCode::InvalidParam, "paths contains NULL");
            list.emplace_back(paths[i]);
        }
        auto batch = std::make_unique<ilm_batch>();
        batch->entries = illumest::batch(list, opts->value, jobs);
        batch->reports.resize(batch->entries.size());
        for (size_t i = 0; i < batch->entries.size(); ++i)
            if (batch->entries[i].report)
                batch->reports[i].value = *batch->entries[i].report;
        *out = batch.release();
    });
}

void ilm_batch_destroy(ilm_batch* batch)
{
    delete batch;
}

size_t ilm_batch_size(const ilm_batch* batch)
{
    return batch ? batch->entries.size() : 0;
}

ilm_status ilm_batch_item_status(const ilm_batch* batch, size_t index)
{
    if (!batch || index >= batch->entries.size())
        return fail(ILM_ERR_INVALID_ARGUMENT, "batch index out of range");
    const illumest::BatchEntry& e = batch->entries[index];
    return e.ok() ? ILM_OK : to_status(e.error.value_or(illumest::ErrorCode::Internal));
}

const ilm_report* ilm_batch_item_report(const ilm_batch* batch, size_t index)
{
    if (!batch || index >= batch->entries.size() || !batch->entries[index].ok())
        return nullptr;
    return &batch->reports[index];
}

const char* ilm_batch_item_path(const ilm_batch* batch, size_t index)
{
    if (!batch || index >= batch->entries.size())
        return nullptr;
    return batch->entries[index].input_path.c_str();
}

const char* ilm_batch_item_error(const ilm_batch* batch, size_t index)
{
    if (!batch || index >= batch->entries.size())
        return nullptr;
    return batch->entries[index].error_message.c_str();
}

ilm_status ilm_batch_to_json(const ilm_batch* batch, int include_runtime, char** out_json)
{
    if (!batch)
        return null_arg("batch");
    if (!out_json)
        return null_arg("out_json");
    return guarded([&] {
        *out_json = dup_string(illumest::batch_to_json(batch->entries, include_runtime != 0));
    });
}

ilm_status ilm_synth_blob_png(int width, int height, int center_row, int center_col, double sigma,
                              int peak, int background, const char* out_path)
{
    if (!out_path)
        return null_arg("out_path");
    return guarded([&] {
        illumest::BlobSceneParams p;
        p.width = width;
        p.height = height;
        p.center_row = center_row;
        p.center_col = center_col;
        p.sigma = sigma;
        p.peak = peak;
        p.background = background;
        illumest::write_file(out_path, illumest::encode_png(illumest::synth_blob_scene(p)));
    });
}

ilm_status ilm_synth_noise_png(int width, int height, size_t n_bright, int bright_value,
                               int background, uint64_t seed, const char* out_path)
{
    if (!out_path)
        return null_arg("out_path");
    return guarded([&] {
        illumest::NoiseSceneParams p;
        p.width = width;
        p.height = height;
        p.n_bright = n_bright;
        p.bright_value = bright_value;
        p.background = background;
        p.seed = seed;
        illumest::write_file(out_path, illumest::encode_png(illumest::synth_uniform_noise_scene(p)));
    });
}

} // extern "C"
