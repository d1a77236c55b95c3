#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctseg/config.hpp"
#include "ctseg/errors.hpp"
#include "ctseg/image.hpp"
#include "ctseg/metrics.hpp"
#include "ctseg/phantom.hpp"
#include "ctseg/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

ctseg::PipelineConfig make_config(const std::string& config_path,
                                  const std::vector<std::string>& overrides) {
    ctseg::PipelineConfig cfg;
    if (!config_path.empty()) cfg.apply_file(config_path);
    for (const std::string& s : overrides) cfg.apply_override(s);
    cfg.validate();
    return cfg;
}

ctseg::GrayImage load_image(const std::string& path) {
    return ctseg::load_pgm(ctseg::read_file(path));
}

int cmd_segment(const std::string& input, const std::string& gt_path,
                const std::string& config_path, const std::string& out_dir,
                const std::vector<std::string>& overrides) {
    ctseg::PipelineConfig cfg = make_config(config_path, overrides);
    ctseg::GrayImage img = load_image(input);
    std::optional<ctseg::BinaryMask> gt;
    if (!gt_path.empty()) gt = ctseg::mask_from_image(load_image(gt_path));

    std::string id = fs::path(input).stem().string();
    fs::create_directories(out_dir);
    ctseg::write_file((fs::path(out_dir) / "run.config").string(), cfg.canonical_dump());

    ctseg::PipelineResult res = ctseg::run_pipeline(img, gt ? &*gt : nullptr, cfg, id);
    ctseg::write_result_files(out_dir, img, res);
    std::fputs(ctseg::result_to_json(res).c_str(), stdout);
    return 0;
}

int cmd_batch(const ctseg::BatchOptions& opt, const std::string& config_path,
              const std::vector<std::string>& overrides) {
    ctseg::PipelineConfig cfg = make_config(config_path, overrides);
    ctseg::BatchOutcome outcome = ctseg::run_batch(opt, cfg);
    std::printf("%zu image(s) processed, %zu failed; reports in %s\n", outcome.results.size(),
                outcome.errors.size(), opt.out_dir.c_str());
    for (const auto& [id, message] : outcome.errors)
        std::fprintf(stderr, "%s: %s\n", id.c_str(), message.c_str());
    return outcome.errors.empty() ? 0 : 4;
}

int cmd_score(const std::string& pred_path, const std::string& gt_path) {
    ctseg::BinaryMask pred = ctseg::mask_from_image(load_image(pred_path));
    ctseg::BinaryMask gt = ctseg::mask_from_image(load_image(gt_path));
    ctseg::ConfusionMatrix cm = ctseg::confusion(pred, gt);
    ctseg::MetricsReport m = ctseg::compute_metrics(cm);

    auto onum = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    nlohmann::json j;
    j["confusion"] = {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
    j["metrics"] = {{"jaccard", onum(m.jaccard)},         {"dice", onum(m.dice)},
                    {"accuracy", onum(m.accuracy)},       {"precision", onum(m.precision)},
                    {"sensitivity", onum(m.sensitivity)}, {"specificity", onum(m.specificity)},
                    {"npv", onum(m.npv)}};
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_phantom_generate(const std::string& spec_path, const std::string& out_dir,
                         const std::string& name, const std::vector<std::string>& overrides) {
    ctseg::PipelineConfig cfg = make_config(spec_path, overrides);
    ctseg::PhantomImage ph = ctseg::generate_phantom(cfg.phantom);
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    ctseg::write_file((dir / (name + ".pgm")).string(), ctseg::save_pgm(ph.image));
    ctseg::write_file((dir / (name + "_gt.pgm")).string(),
                      ctseg::save_pgm(ctseg::mask_to_image(ph.lesion_truth)));
    ctseg::write_file((dir / (name + "_lung.pgm")).string(),
                      ctseg::save_pgm(ctseg::mask_to_image(ph.lung_truth)));
    std::printf("wrote %s.pgm, %s_gt.pgm, %s_lung.pgm in %s\n", name.c_str(), name.c_str(),
                name.c_str(), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lesion extraction from lung CT slices: artifact stripping, "
                 "firefly-optimized entropy thresholding, MRF-EM labeling, scoring"};
    app.require_subcommand(1);

    std::string input, gt_path, config_path, out_dir, pred_path, name = "phantom";
    std::vector<std::string> overrides;
    ctseg::BatchOptions batch_opt;

    CLI::App* seg = app.add_subcommand("segment", "Segment one image");
    seg->add_option("--input", input, "input slice (.pgm)")->required();
    seg->add_option("--gt", gt_path, "ground-truth lesion mask (.pgm)");
    seg->add_option("--config", config_path, "config file");
    seg->add_option("--out-dir", out_dir, "output directory")->required();
    seg->add_option("--set", overrides, "config override key=value");

    CLI::App* bat = app.add_subcommand("batch", "Segment a directory of images");
    bat->add_option("--input-dir", batch_opt.input_dir, "directory of .pgm slices")->required();
    bat->add_option("--gt-dir", batch_opt.gt_dir,
                    "directory of <name>_gt.pgm masks (default: input dir)");
    bat->add_option("--config", config_path, "config file");
    bat->add_option("--out-dir", batch_opt.out_dir, "output directory")->required();
    bat->add_option("--jobs", batch_opt.jobs, "worker count (default: all CPUs)");
    bat->add_option("--set", overrides, "config override key=value");

    CLI::App* sco = app.add_subcommand("score", "Score a mask against ground truth");
    sco->add_option("--pred", pred_path, "predicted mask (.pgm)")->required();
    sco->add_option("--gt", gt_path, "ground-truth mask (.pgm)")->required();

    CLI::App* ph = app.add_subcommand("phantom", "Synthetic test images");
    ph->require_subcommand(1);
    CLI::App* gen = ph->add_subcommand("generate", "Write a phantom slice with ground truth");
    gen->add_option("--spec", config_path, "config file (phantom.* keys)");
    gen->add_option("--out-dir", out_dir, "output directory")->required();
    gen->add_option("--name", name, "output basename (default: phantom)");
    gen->add_option("--set", overrides, "config override key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // bad usage is a config error
    }

    try {
        if (seg->parsed()) return cmd_segment(input, gt_path, config_path, out_dir, overrides);
        if (bat->parsed()) return cmd_batch(batch_opt, config_path, overrides);
        if (sco->parsed()) return cmd_score(pred_path, gt_path);
        if (ph->parsed() && gen->parsed())
            return cmd_phantom_generate(config_path, out_dir, name, overrides);
        std::fputs("no subcommand selected\n", stderr);
        return 2;
    } catch (const ctseg::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ctseg::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const ctseg::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 3;
    } catch (const ctseg::UnsupportedDepthError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 3;
    } catch (const ctseg::SizeError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 3;
    } catch (const ctseg::EmptyCorpusError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "processing error: %s\n", e.what());
        return 4;
    }
}
