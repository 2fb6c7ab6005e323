#pragma once

#include "core/error.hpp"
#include "core/image.hpp"
#include "core/report.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace illumest {

struct AnalysisOptions {
    ThresholdMode threshold_mode = ThresholdMode::Fixed;
    int threshold = 200;
    double blur = 0.05;
    std::uint64_t seed = 0;
    std::size_t k = 2;
    std::size_t subsample_cap = 4096;
    bool normalize = true;
    bool paper_literal_empty = false;
    int max_iters = 500;
    double tol = 1e-6;

    void validate() const;
};

// decode -> grayscale -> threshold -> bright set -> direction -> reference
// -> Sinkhorn divergence -> auxiliary estimators.
IlluminationReport analyze_gray(const GrayImage& gray, const std::string& label,
                                const AnalysisOptions& opts);
IlluminationReport analyze_rgb(const RgbImage& img, const std::string& label,
                               const AnalysisOptions& opts);
IlluminationReport analyze_image(const std::filesystem::path& path, const AnalysisOptions& opts);

struct BatchEntry {
    std::string input_path;
    std::optional<IlluminationReport> report;
    std::optional<ErrorCode> error;
    std::string error_message;

    bool ok() const noexcept { return report.has_value(); }
};

// Reports in input order; failures are recorded per entry. jobs = 0 uses
// the hardware concurrency.
std::vector<BatchEntry> batch(const std::vector<std::filesystem::path>& paths,
                              const AnalysisOptions& opts, unsigned jobs = 0);

std::string batch_to_json(const std::vector<BatchEntry>& entries, bool include_runtime = true,
                          int indent = 2);

} // namespace illumest
