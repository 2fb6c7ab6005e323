#ifndef ILLUMEST_ILLUMEST_H
#define ILLUMEST_ILLUMEST_H

/*
 * illumest: bright-region illuminant and light-direction estimation.
 *
 * Plain C interface over the C++ core. All objects are opaque handles owned
 * by the caller and released with the matching *_destroy function. Every
 * fallible call returns an ilm_status; on failure a one-line diagnostic is
 * available from ilm_last_error() on the calling thread.
 *
 * Conventions used in reports:
 *   - positions are (row, col) with row growing downwards;
 *   - the light direction is centroid - center, center = (height/2, width/2);
 *   - angle_deg is counter-clockwise from image-right, screen-up = 90.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ILLUMEST_BUILDING)
#    define ILM_API __declspec(dllexport)
#  else
#    define ILM_API __declspec(dllimport)
#  endif
#else
#  define ILM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ilm_status {
    ILM_OK = 0,
    ILM_ERR_INVALID_ARGUMENT = 1,
    ILM_ERR_DECODE = 2,
    ILM_ERR_IO = 3,
    ILM_ERR_EMPTY_SET = 4,
    ILM_ERR_DEGENERATE = 5,
    ILM_ERR_DEGENERATE_REFERENCE = 6,
    ILM_ERR_SIZE_MISMATCH = 7,
    ILM_ERR_TOO_LARGE = 8,
    ILM_ERR_NON_UNIFORM_WEIGHTS = 9,
    ILM_ERR_TOO_SMALL = 10,
    ILM_ERR_TOO_FEW_POINTS = 11,
    ILM_ERR_ZERO_VECTOR = 12,
    ILM_ERR_DIMENSION_MISMATCH = 13,
    ILM_ERR_NOT_AVAILABLE = 14, /* optional report field is absent */
    ILM_ERR_INTERNAL = 99
} ilm_status;

typedef struct ilm_options ilm_options;
typedef struct ilm_report ilm_report;
typedef struct ilm_batch ilm_batch;

ILM_API const char* ilm_version(void);
ILM_API const char* ilm_status_string(ilm_status status);
/* Message of the last failed call on this thread; "" if none. */
ILM_API const char* ilm_last_error(void);

/* Strings handed out by the library. */
ILM_API void ilm_string_free(char* s);

/* ---- analysis options ------------------------------------------------ */

/* Defaults: fixed threshold 200, blur 0.05, seed 0, k 2, subsample cap 4096,
 * normalized coordinates, empty bright set reported without a direction. */
ILM_API ilm_status ilm_options_create(ilm_options** out);
ILM_API void ilm_options_destroy(ilm_options* opts);

ILM_API ilm_status ilm_options_set_threshold(ilm_options* opts, int threshold);
/* Non-zero selects Otsu's threshold instead of the fixed one. */
ILM_API ilm_status ilm_options_set_auto_threshold(ilm_options* opts, int enabled);
ILM_API ilm_status ilm_options_set_blur(ilm_options* opts, double blur);
ILM_API ilm_status ilm_options_set_seed(ilm_options* opts, uint64_t seed);
ILM_API ilm_status ilm_options_set_k(ilm_options* opts, uint32_t k);
ILM_API ilm_status ilm_options_set_subsample_cap(ilm_options* opts, uint64_t cap);
ILM_API ilm_status ilm_options_set_normalize(ilm_options* opts, int enabled);
/* Non-zero: an empty bright set yields centroid (0,0) and a direction. */
ILM_API ilm_status ilm_options_set_paper_literal_empty(ilm_options* opts, int enabled);
ILM_API ilm_status ilm_options_set_max_iters(ilm_options* opts, int max_iters);
ILM_API ilm_status ilm_options_set_tol(ilm_options* opts, double tol);

/* ---- single image ------------------------------------------------------ */

ILM_API ilm_status ilm_analyze_file(const ilm_options* opts, const char* path, ilm_report** out);
/* PNG or JPEG bytes; label becomes the report's input_path. */
ILM_API ilm_status ilm_analyze_memory(const ilm_options* opts, const uint8_t* data, size_t size,
                                      const char* label, ilm_report** out);

ILM_API void ilm_report_destroy(ilm_report* report);

/* JSON text of the report, to be released with ilm_string_free. */
ILM_API ilm_status ilm_report_to_json(const ilm_report* report, int include_runtime,
                                      char** out_json);
ILM_API ilm_status ilm_report_from_json(const char* json, ilm_report** out);

ILM_API size_t ilm_report_n_bright(const ilm_report* report);
ILM_API int ilm_report_threshold(const ilm_report* report);
ILM_API int ilm_report_has_warning(const ilm_report* report);
ILM_API ilm_status ilm_report_centroid(const ilm_report* report, double* row, double* col);
ILM_API ilm_status ilm_report_direction(const ilm_report* report, double* d_row, double* d_col);
ILM_API ilm_status ilm_report_angle_deg(const ilm_report* report, double* angle_deg);
ILM_API ilm_status ilm_report_w2(const ilm_report* report, double* w2);
ILM_API ilm_status ilm_report_hausdorff(const ilm_report* report, double* pixels);

/* Writes the annotated PNG for the image the report was computed from. */
ILM_API ilm_status ilm_render_overlay(const char* image_path, const ilm_report* report,
                                      const char* out_png_path);

/* ---- batch ------------------------------------------------------------- */

/* Per-image failures do not fail the call; inspect items individually.
 * jobs = 0 uses every available processor. Output order = input order. */
ILM_API ilm_status ilm_batch_run(const ilm_options* opts, const char* const* paths, size_t count,
                                 unsigned jobs, ilm_batch** out);
ILM_API void ilm_batch_destroy(ilm_batch* batch);
ILM_API size_t ilm_batch_size(const ilm_batch* batch);
ILM_API ilm_status ilm_batch_item_status(const ilm_batch* batch, size_t index);
/* Borrowed; NULL when the item failed. Valid until ilm_batch_destroy. */
ILM_API const ilm_report* ilm_batch_item_report(const ilm_batch* batch, size_t index);
ILM_API const char* ilm_batch_item_path(const ilm_batch* batch, size_t index);
ILM_API const char* ilm_batch_item_error(const ilm_batch* batch, size_t index);
ILM_API ilm_status ilm_batch_to_json(const ilm_batch* batch, int include_runtime, char** out_json);

/* ---- synthetic scenes (8-bit grayscale PNG) ----------------------------- */

ILM_API ilm_status ilm_synth_blob_png(int width, int height, int center_row, int center_col,
                                      double sigma, int peak, int background,
                                      const char* out_path);
ILM_API ilm_status ilm_synth_noise_png(int width, int height, size_t n_bright, int bright_value,
                                       int background, uint64_t seed, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ILLUMEST_ILLUMEST_H */
