#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctseg/config.hpp"
#include "ctseg/entropy.hpp"
#include "ctseg/image.hpp"
#include "ctseg/metrics.hpp"

namespace ctseg {

struct PipelineResult {
    std::string image_id;
    bool no_lung = false; // artifact stripping found no lung candidate
    std::optional<ThresholdSet> thresholds;
    std::optional<double> fa_score;
    std::vector<double> fa_trace;
    std::vector<double> energy_trace;
    std::optional<GrayImage> threshold_image;
    BinaryMask lesion_mask;
    double elapsed_s = 0.0;
    std::optional<ConfusionMatrix> confusion_counts; // present iff gt was given
    std::optional<MetricsReport> metrics;            // present iff gt was given
};

// Full single-image run: strip, threshold search (with a per-image seed
// derived from fa.seed and image_id), MRF-EM, postprocessing, and scoring
// when ground truth is given. An image where stripping finds no lung
// yields a no_lung result with an empty mask (scored against gt over the
// whole image) instead of an error; other stage failures surface as
// StageError. Deterministic apart from elapsed_s.
PipelineResult run_pipeline(const GrayImage& img, const BinaryMask* gt,
                            const PipelineConfig& cfg, const std::string& image_id);

struct MetricSummary {
    int defined = 0; // results where the metric had a denominator
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct CorpusSummary {
    size_t images = 0;
    size_t scored = 0; // results that carried ground truth
    size_t no_lung = 0;
    MetricSummary jaccard, dice, accuracy, precision, sensitivity, specificity, npv;
};

// Mean/min/max per metric over the results that define it. Throws
// EmptyCorpusError on an empty list.
CorpusSummary aggregate_report(const std::vector<PipelineResult>& results);

// ----- report serialization --------------------------------------------

std::string result_to_json(const PipelineResult& r);
std::string summary_to_json(const CorpusSummary& s);

// Header: image,jaccard,dice,accuracy,precision,sensitivity,specificity,
// npv,elapsed_s — undefined metrics are empty cells.
std::string corpus_csv(const std::vector<PipelineResult>& results);

// Writes <id>_mask.pgm, <id>_overlay.ppm, <id>.json, and, when present,
// <id>_threshold.pgm, <id>_fa_trace.csv, <id>_em_trace.csv into out_dir.
void write_result_files(const std::string& out_dir, const GrayImage& original,
                        const PipelineResult& r);

// ----- batch ------------------------------------------------------------

struct BatchOptions {
    std::string input_dir;
    std::string gt_dir;  // empty: look for ground truth next to the inputs
    std::string out_dir;
    int jobs = 0; // 0 = one worker per available CPU
};

struct BatchOutcome {
    std::vector<PipelineResult> results;                   // ordered by image id
    std::vector<std::pair<std::string, std::string>> errors; // (image id, message)
};

// Process every <name>.pgm under input_dir (files named *_gt.pgm are
// ground truth, not inputs), pairing <name>.pgm with <name>_gt.pgm. Images
// run on a worker pool; per-image seeds make the outputs independent of
// scheduling. Writes per-image files, corpus.csv, summary.json and the
// effective config (run.config) into out_dir. Per-image failures are
// collected, not fatal.
BatchOutcome run_batch(const BatchOptions& opt, const PipelineConfig& cfg);

} // namespace ctseg
