#pragma once

#include <string>

#include "ctseg/firefly.hpp"
#include "ctseg/mrf.hpp"
#include "ctseg/phantom.hpp"
#include "ctseg/preprocess.hpp"

namespace ctseg {

// Which pixels feed a computation: the whole image or only the lung roi.
enum class Scope { image, roi };

// Flat key = value configuration for the whole pipeline. '#' starts a
// comment line; unknown keys are rejected; every key has a default, so an
// empty file is a valid config. Values set later win, except the
// repeatable keys (phantom.lung, phantom.lesion) where the first
// assignment replaces the default list and subsequent ones append.
struct PipelineConfig {
    StripConfig strip;
    int threshold_k = 2;
    Scope threshold_scope = Scope::image; // histogram fed to the cut search
    FireflyParams fa;                     // fa.seed doubles as the batch seed
    MrfConfig mrf;
    long post_min_component_area = 16;
    bool post_smooth = true;
    Scope metrics_scope = Scope::image;
    PhantomSpec phantom;

    // Apply one "key = value" assignment. Throws ConfigError on unknown
    // keys or unparseable values.
    void apply(const std::string& key, const std::string& value);

    // Parse config-file text; `source` names the file in error messages.
    void apply_text(const std::string& text, const std::string& source);

    // Read and parse a config file (IoError if unreadable).
    void apply_file(const std::string& path);

    // One CLI-style "key=value" override.
    void apply_override(const std::string& assignment);

    // Range-check every section. Throws ConfigError.
    void validate() const;

    // Every key in a fixed order, parseable back into an identical config.
    std::string canonical_dump() const;

  private:
    bool lungs_replaced_ = false;
    bool lesions_replaced_ = false;
};

} // namespace ctseg
