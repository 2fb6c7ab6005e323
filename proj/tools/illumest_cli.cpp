// illumest command-line front end. Uses only the public C interface.

#include <illumest/illumest.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError {
    std::string message;
};

void check_option(ilm_status st, const char* flag)
{
    if (st != ILM_OK)
        throw UsageError{std::string(flag) + ": " + ilm_last_error()};
}

struct AnalyzeArgs {
    std::vector<std::string> paths;
    std::string threshold = "200";
    double blur = 0.05;
    std::uint64_t seed = 0;
    unsigned k = 2;
    std::uint64_t subsample_cap = 4096;
    bool no_normalize = false;
    bool paper_literal_empty = false;
    std::optional<std::string> overlay; // "" = next to each input
    std::string json = "-";
    unsigned jobs = 0;
    int max_iters = 500;
    double tol = 1e-6;
    bool no_runtime = false;
};

struct OptionsHandle {
    ilm_options* ptr = nullptr;
    ~OptionsHandle() { ilm_options_destroy(ptr); }
};

struct BatchHandle {
    ilm_batch* ptr = nullptr;
    ~BatchHandle() { ilm_batch_destroy(ptr); }
};

void apply_threshold(ilm_options* opts, const std::string& text)
{
    if (text == "auto") {
        check_option(ilm_options_set_auto_threshold(opts, 1), "--threshold");
        return;
    }
    std::size_t used = 0;
    int value = -1;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size())
        throw UsageError{"--threshold: expected an integer in 0..255 or 'auto', got '" + text + "'"};
    check_option(ilm_options_set_threshold(opts, value), "--threshold");
}

fs::path overlay_path(const std::string& input, const std::string& dir)
{
    const fs::path in(input);
    const fs::path name = in.stem().string() + ".overlay.png";
    return dir.empty() ? in.parent_path() / name : fs::path(dir) / name;
}

bool write_output(const std::string& target, const std::string& text)
{
    if (target == "-") {
        std::cout << text << '\n';
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out << text << '\n';
    return static_cast<bool>(out);
}

int run_analyze(const AnalyzeArgs& a)
{
    OptionsHandle opts;
    if (ilm_options_create(&opts.ptr) != ILM_OK)
        throw UsageError{ilm_last_error()};
    apply_threshold(opts.ptr, a.threshold);
    check_option(ilm_options_set_blur(opts.ptr, a.blur), "--blur");
    check_option(ilm_options_set_seed(opts.ptr, a.seed), "--seed");
    check_option(ilm_options_set_k(opts.ptr, a.k), "--k");
    check_option(ilm_options_set_subsample_cap(opts.ptr, a.subsample_cap), "--subsample-cap");
    check_option(ilm_options_set_normalize(opts.ptr, a.no_normalize ? 0 : 1), "--no-normalize");
    check_option(ilm_options_set_paper_literal_empty(opts.ptr, a.paper_literal_empty ? 1 : 0),
                 "--paper-literal-empty");
    check_option(ilm_options_set_max_iters(opts.ptr, a.max_iters), "--max-iters");
    check_option(ilm_options_set_tol(opts.ptr, a.tol), "--tol");

    if (a.overlay && !a.overlay->empty()) {
        std::error_code ec;
        fs::create_directories(*a.overlay, ec);
        if (ec)
            throw UsageError{"--overlay: cannot create " + *a.overlay + ": " + ec.message()};
    }

    std::vector<const char*> paths;
    paths.reserve(a.paths.size());
    for (const std::string& p : a.paths)
        paths.push_back(p.c_str());

    BatchHandle batch;
    if (ilm_batch_run(opts.ptr, paths.data(), paths.size(), a.jobs, &batch.ptr) != ILM_OK) {
        std::cerr << "error: " << ilm_last_error() << '\n';
        return kExitFailure;
    }

    bool failed = false;
    const std::size_t n = ilm_batch_size(batch.ptr);
    for (std::size_t i = 0; i < n; ++i) {
        const char* path = ilm_batch_item_path(batch.ptr, i);
        const ilm_status st = ilm_batch_item_status(batch.ptr, i);
        if (st != ILM_OK) {
            failed = true;
            std::cerr << "error: " << path << ": " << ilm_status_string(st) << ": "
                      << ilm_batch_item_error(batch.ptr, i) << '\n';
            continue;
        }
        const ilm_report* report = ilm_batch_item_report(batch.ptr, i);
        if (ilm_report_has_warning(report))
            std::cerr << "warning: " << path << ": EmptyBrightSet (no pixel above threshold "
                      << ilm_report_threshold(report) << ")\n";
        if (a.overlay) {
            const fs::path out = overlay_path(path, *a.overlay);
            if (ilm_render_overlay(path, report, out.string().c_str()) != ILM_OK) {
                failed = true;
                std::cerr << "error: " << path << ": overlay: " << ilm_last_error() << '\n';
            }
        }
    }

    char* json = nullptr;
    if (ilm_batch_to_json(batch.ptr, a.no_runtime ? 0 : 1, &json) != ILM_OK) {
        std::cerr << "error: " << ilm_last_error() << '\n';
        return kExitFailure;
    }
    const bool written = write_output(a.json, json);
    ilm_string_free(json);
    if (!written) {
        std::cerr << "error: cannot write " << a.json << '\n';
        return kExitFailure;
    }
    return failed ? kExitFailure : kExitOk;
}

int report_synth(ilm_status st, const std::string& out)
{
    if (st == ILM_OK)
        return kExitOk;
    std::cerr << "error: " << out << ": " << ilm_last_error() << '\n';
    return st == ILM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bright-region light direction and clustering analysis"};
    app.set_version_flag("--version", std::string(ilm_version()));
    app.require_subcommand(1);

    AnalyzeArgs an;
    CLI::App* analyze = app.add_subcommand("analyze", "Analyze one or more PNG/JPEG images");
    analyze->add_option("paths", an.paths, "Input images")->required();
    analyze->add_option("--threshold", an.threshold, "Intensity threshold 0-255, or 'auto' (Otsu)")
        ->capture_default_str();
    analyze->add_option("--blur", an.blur, "Sinkhorn blur (length scale)")->capture_default_str();
    analyze->add_option("--seed", an.seed, "Seed for the reference draw and subsampling")
        ->capture_default_str();
    analyze->add_option("--k", an.k, "Number of clusters")->capture_default_str();
    analyze->add_option("--subsample-cap", an.subsample_cap, "Max points per cloud in transport")
        ->capture_default_str();
    analyze->add_flag("--no-normalize", an.no_normalize, "Use pixel coordinates in transport");
    analyze->add_flag("--paper-literal-empty", an.paper_literal_empty,
                      "Empty bright set reports centroid (0,0) and its direction");
    analyze
        ->add_option_function<std::vector<std::string>>(
            "--overlay",
            [&](const std::vector<std::string>& v) { an.overlay = v.empty() ? "" : v.front(); },
            "Write annotated PNGs into DIR (default: next to each input)")
        ->expected(0, 1)
        ->type_name("[DIR]");
    analyze->add_option("--json", an.json, "Report destination file, '-' for stdout")
        ->capture_default_str();
    analyze->add_option("--jobs", an.jobs, "Parallel images, 0 = all processors")
        ->capture_default_str();
    analyze->add_option("--max-iters", an.max_iters, "Sinkhorn iteration cap")->capture_default_str();
    analyze->add_option("--tol", an.tol, "Sinkhorn marginal tolerance")->capture_default_str();
    analyze->add_flag("--no-runtime", an.no_runtime, "Omit runtime_ms from the report");

    CLI::App* synth = app.add_subcommand("synth", "Write synthetic test scenes");
    synth->require_subcommand(1);

    int width = 128;
    int height = 128;
    int background = 10;
    std::string out;

    CLI::App* blob = synth->add_subcommand("blob", "Gaussian blob on a flat background");
    int row = 64;
    int col = 64;
    double sigma = 3.0;
    int peak = 255;
    blob->add_option("--width", width)->capture_default_str();
    blob->add_option("--height", height)->capture_default_str();
    blob->add_option("--row", row, "Blob center row")->capture_default_str();
    blob->add_option("--col", col, "Blob center column")->capture_default_str();
    blob->add_option("--sigma", sigma)->capture_default_str();
    blob->add_option("--peak", peak)->capture_default_str();
    blob->add_option("--background", background)->capture_default_str();
    blob->add_option("-o,--output", out, "Output PNG")->required();

    CLI::App* noise = synth->add_subcommand("noise", "Uniformly scattered bright pixels");
    std::size_t n_bright = 100;
    int bright = 255;
    std::uint64_t noise_seed = 0;
    noise->add_option("--width", width)->capture_default_str();
    noise->add_option("--height", height)->capture_default_str();
    noise->add_option("--n-bright", n_bright)->capture_default_str();
    noise->add_option("--bright-value", bright)->capture_default_str();
    noise->add_option("--background", background)->capture_default_str();
    noise->add_option("--seed", noise_seed)->capture_default_str();
    noise->add_option("-o,--output", out, "Output PNG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed())
            return run_analyze(an);
        if (blob->parsed())
            return report_synth(
                ilm_synth_blob_png(width, height, row, col, sigma, peak, background, out.c_str()),
                out);
        if (noise->parsed())
            return report_synth(ilm_synth_noise_png(width, height, n_bright, bright, background,
                                                    noise_seed, out.c_str()),
                                out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.message << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
