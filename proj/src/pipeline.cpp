#include "ctseg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "ctseg/errors.hpp"
#include "ctseg/mrf.hpp"
#include "ctseg/postprocess.hpp"
#include "ctseg/preprocess.hpp"
#include "ctseg/rng.hpp"

namespace fs = std::filesystem;

namespace ctseg {

namespace {

// Re-badge module errors with the pipeline stage that raised them.
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.what());
    }
}

nlohmann::json opt_to_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

nlohmann::json metrics_to_json(const MetricsReport& m) {
    nlohmann::json j;
    j["jaccard"] = opt_to_json(m.jaccard);
    j["dice"] = opt_to_json(m.dice);
    j["accuracy"] = opt_to_json(m.accuracy);
    j["precision"] = opt_to_json(m.precision);
    j["sensitivity"] = opt_to_json(m.sensitivity);
    j["specificity"] = opt_to_json(m.specificity);
    j["npv"] = opt_to_json(m.npv);
    return j;
}

void append_cell(std::string& row, const std::optional<double>& v) {
    char buf[32];
    row += ',';
    if (v) {
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        row += buf;
    }
}

struct Accumulator {
    int defined = 0;
    double sum = 0.0;
    double min = 0.0;
    double max = 0.0;

    void add(const std::optional<double>& v) {
        if (!v) return;
        if (defined == 0) {
            min = max = *v;
        } else {
            min = std::min(min, *v);
            max = std::max(max, *v);
        }
        sum += *v;
        ++defined;
    }

    MetricSummary summary() const {
        MetricSummary s;
        s.defined = defined;
        if (defined > 0) {
            s.mean = sum / defined;
            s.min = min;
            s.max = max;
        }
        return s;
    }
};

nlohmann::json metric_summary_json(const MetricSummary& s) {
    nlohmann::json j;
    j["defined"] = s.defined;
    if (s.defined > 0) {
        j["mean"] = s.mean;
        j["min"] = s.min;
        j["max"] = s.max;
    } else {
        j["mean"] = nullptr;
        j["min"] = nullptr;
        j["max"] = nullptr;
    }
    return j;
}

} // namespace

PipelineResult run_pipeline(const GrayImage& img, const BinaryMask* gt,
                            const PipelineConfig& cfg, const std::string& image_id) {
    cfg.validate();
    if (cfg.threshold_k != 2)
        throw ConfigError("the segmentation pipeline needs threshold.k = 2 "
                          "(three classes: background, lung, lesion)");
    if (gt)
        require_same_shape(img.width, img.height, gt->width, gt->height,
                           "image vs ground truth");

    auto t0 = std::chrono::steady_clock::now();
    PipelineResult res;
    res.image_id = image_id;

    StripResult stripped;
    bool have_lung = true;
    try {
        stripped = strip_artifacts(img, cfg.strip);
    } catch (const EmptyRegionError&) {
        have_lung = false;
    } catch (const DegenerateHistogramError&) {
        have_lung = false;
    }

    if (have_lung) {
        const BinaryMask& roi = stripped.lung_roi;
        Histogram hist = stage("threshold", [&] {
            return compute_histogram(stripped.lung,
                                     cfg.threshold_scope == Scope::roi ? &roi : nullptr);
        });
        FireflyParams fa_params = cfg.fa;
        fa_params.seed = derive_seed(cfg.fa.seed, image_id);
        FaResult fa = stage("threshold",
                            [&] { return fa_optimize(hist, cfg.threshold_k, fa_params); });
        res.thresholds = fa.cuts;
        res.fa_score = fa.score;
        res.fa_trace = std::move(fa.trace);
        res.threshold_image =
            stage("threshold", [&] { return apply_thresholds(stripped.lung, fa.cuts, roi); });

        SegmentResult seg = stage("segment", [&] {
            LabelField init = initialize_labels(stripped.lung, fa.cuts, roi);
            return segment(stripped.lung, init, cfg.mrf, roi,
                           band_midpoint_params(fa.cuts, cfg.mrf.variance_floor));
        });
        res.energy_trace = std::move(seg.energy_trace);

        res.lesion_mask = stage("extract", [&] {
            BinaryMask mask = extract_lesion_mask(seg.labels, seg.params, roi);
            if (cfg.post_smooth) mask = morphological_smooth(mask);
            return remove_small_components(mask, cfg.post_min_component_area);
        });

        if (gt) {
            ConfusionMatrix cm = stage("score", [&] {
                return confusion(res.lesion_mask, *gt,
                                 cfg.metrics_scope == Scope::roi ? &roi : nullptr);
            });
            res.confusion_counts = cm;
            res.metrics = stage("score", [&] { return compute_metrics(cm); });
        }
    } else {
        // No separable lung: report an empty mask rather than failing, so
        // corpus runs keep going (scoring always over the whole image; the
        // lung scope does not exist here).
        res.no_lung = true;
        res.lesion_mask = BinaryMask::create(img.width, img.height);
        if (gt) {
            ConfusionMatrix cm = confusion(res.lesion_mask, *gt, nullptr);
            res.confusion_counts = cm;
            res.metrics = compute_metrics(cm);
        }
    }

    res.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

CorpusSummary aggregate_report(const std::vector<PipelineResult>& results) {
    if (results.empty()) throw EmptyCorpusError("no pipeline results to aggregate");
    CorpusSummary s;
    s.images = results.size();
    Accumulator jac, dic, acc, pre, sen, spe, npv;
    for (const PipelineResult& r : results) {
        if (r.no_lung) ++s.no_lung;
        if (!r.metrics) continue;
        ++s.scored;
        jac.add(r.metrics->jaccard);
        dic.add(r.metrics->dice);
        acc.add(r.metrics->accuracy);
        pre.add(r.metrics->precision);
        sen.add(r.metrics->sensitivity);
        spe.add(r.metrics->specificity);
        npv.add(r.metrics->npv);
    }
    s.jaccard = jac.summary();
    s.dice = dic.summary();
    s.accuracy = acc.summary();
    s.precision = pre.summary();
    s.sensitivity = sen.summary();
    s.specificity = spe.summary();
    s.npv = npv.summary();
    return s;
}

std::string result_to_json(const PipelineResult& r) {
    nlohmann::json j;
    j["image"] = r.image_id;
    j["no_lung"] = r.no_lung;
    if (r.thresholds)
        j["thresholds"] = r.thresholds->cuts;
    else
        j["thresholds"] = nullptr;
    j["fa_score"] = opt_to_json(r.fa_score);
    j["energy_trace"] = r.energy_trace;
    j["elapsed_s"] = r.elapsed_s;
    j["lesion_pixels"] = r.lesion_mask.count();
    if (r.confusion_counts) {
        nlohmann::json c;
        c["tp"] = r.confusion_counts->tp;
        c["tn"] = r.confusion_counts->tn;
        c["fp"] = r.confusion_counts->fp;
        c["fn"] = r.confusion_counts->fn;
        j["confusion"] = c;
    } else {
        j["confusion"] = nullptr;
    }
    j["metrics"] = r.metrics ? metrics_to_json(*r.metrics) : nlohmann::json(nullptr);
    return j.dump(2) + "\n";
}

std::string summary_to_json(const CorpusSummary& s) {
    nlohmann::json j;
    j["images"] = s.images;
    j["scored"] = s.scored;
    j["no_lung"] = s.no_lung;
    nlohmann::json m;
    m["jaccard"] = metric_summary_json(s.jaccard);
    m["dice"] = metric_summary_json(s.dice);
    m["accuracy"] = metric_summary_json(s.accuracy);
    m["precision"] = metric_summary_json(s.precision);
    m["sensitivity"] = metric_summary_json(s.sensitivity);
    m["specificity"] = metric_summary_json(s.specificity);
    m["npv"] = metric_summary_json(s.npv);
    j["metrics"] = m;
    return j.dump(2) + "\n";
}

std::string corpus_csv(const std::vector<PipelineResult>& results) {
    std::string out =
        "image,jaccard,dice,accuracy,precision,sensitivity,specificity,npv,elapsed_s\n";
    char buf[32];
    for (const PipelineResult& r : results) {
        std::string row = r.image_id;
        if (r.metrics) {
            append_cell(row, r.metrics->jaccard);
            append_cell(row, r.metrics->dice);
            append_cell(row, r.metrics->accuracy);
            append_cell(row, r.metrics->precision);
            append_cell(row, r.metrics->sensitivity);
            append_cell(row, r.metrics->specificity);
            append_cell(row, r.metrics->npv);
        } else {
            row += ",,,,,,,";
        }
        std::snprintf(buf, sizeof buf, ",%.3f", r.elapsed_s);
        row += buf;
        row += '\n';
        out += row;
    }
    return out;
}

void write_result_files(const std::string& out_dir, const GrayImage& original,
                        const PipelineResult& r) {
    fs::path dir(out_dir);
    auto path = [&dir](const std::string& name) { return (dir / name).string(); };
    write_file(path(r.image_id + "_mask.pgm"), save_pgm(mask_to_image(r.lesion_mask)));
    write_file(path(r.image_id + "_overlay.ppm"), save_overlay_ppm(original, r.lesion_mask));
    if (r.threshold_image)
        write_file(path(r.image_id + "_threshold.pgm"), save_pgm(*r.threshold_image));
    if (!r.fa_trace.empty())
        write_file(path(r.image_id + "_fa_trace.csv"), fa_trace_csv(r.fa_trace));
    if (!r.energy_trace.empty())
        write_file(path(r.image_id + "_em_trace.csv"), energy_trace_csv(r.energy_trace));
    write_file(path(r.image_id + ".json"), result_to_json(r));
}

BatchOutcome run_batch(const BatchOptions& opt, const PipelineConfig& cfg) {
    cfg.validate();
    if (!fs::is_directory(opt.input_dir))
        throw IoError("input directory not found: " + opt.input_dir);

    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(opt.input_dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != ".pgm") continue;
        if (p.stem().string().ends_with("_gt")) continue; // ground truth, not input
        inputs.push_back(p);
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty())
        throw EmptyCorpusError("no .pgm images found in " + opt.input_dir);

    fs::create_directories(opt.out_dir);
    write_file((fs::path(opt.out_dir) / "run.config").string(), cfg.canonical_dump());

    const fs::path gt_dir = opt.gt_dir.empty() ? fs::path(opt.input_dir) : fs::path(opt.gt_dir);
    const size_t n = inputs.size();

    std::vector<PipelineResult> slots(n);
    std::vector<uint8_t> ok(n, 0);
    std::mutex err_mutex;
    std::vector<std::pair<std::string, std::string>> errors;

    unsigned hw = std::thread::hardware_concurrency();
    size_t jobs = opt.jobs > 0 ? size_t(opt.jobs) : size_t(hw > 0 ? hw : 1);
    jobs = std::min(jobs, n);

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            const std::string id = inputs[i].stem().string();
            try {
                GrayImage img = load_pgm(read_file(inputs[i].string()));
                std::optional<BinaryMask> gt;
                fs::path gt_path = gt_dir / (id + "_gt.pgm");
                if (fs::exists(gt_path))
                    gt = mask_from_image(load_pgm(read_file(gt_path.string())));
                PipelineResult res = run_pipeline(img, gt ? &*gt : nullptr, cfg, id);
                write_result_files(opt.out_dir, img, res);
                slots[i] = std::move(res);
                ok[i] = 1;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                errors.emplace_back(id, e.what());
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    BatchOutcome outcome;
    for (size_t i = 0; i < n; ++i)
        if (ok[i]) outcome.results.push_back(std::move(slots[i]));
    std::sort(errors.begin(), errors.end());
    outcome.errors = std::move(errors);

    write_file((fs::path(opt.out_dir) / "corpus.csv").string(), corpus_csv(outcome.results));
    if (!outcome.results.empty())
        write_file((fs::path(opt.out_dir) / "summary.json").string(),
                   summary_to_json(aggregate_report(outcome.results)));
    return outcome;
}

} // namespace ctseg
