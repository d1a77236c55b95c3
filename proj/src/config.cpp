#include "ctseg/config.hpp"

#include <charconv>
#include <vector>

#include "ctseg/errors.hpp"
#include "ctseg/image.hpp"

namespace ctseg {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
    throw ConfigError("bad value '" + value + "' for " + key + " (expected " + expected + ")");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, const char* expected) {
    T out{};
    const char* first = value.data();
    const char* last = first + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) bad_value(key, value, expected);
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    return parse_number<int>(key, value, "integer");
}

long parse_long(const std::string& key, const std::string& value) {
    return parse_number<long>(key, value, "integer");
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    return parse_number<uint64_t>(key, value, "unsigned integer");
}

double parse_double(const std::string& key, const std::string& value) {
    return parse_number<double>(key, value, "number");
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    bad_value(key, value, "on|off");
}

Scope parse_scope(const std::string& key, const std::string& value) {
    if (value == "image") return Scope::image;
    if (value == "roi") return Scope::roi;
    bad_value(key, value, "image|roi");
}

std::vector<double> parse_list(const std::string& key, const std::string& value, size_t n,
                               const char* shape) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= value.size()) {
        size_t comma = value.find(',', pos);
        size_t end = comma == std::string::npos ? value.size() : comma;
        out.push_back(parse_double(key, trim(value.substr(pos, end - pos))));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != n) bad_value(key, value, shape);
    return out;
}

int checked_intensity(const std::string& key, double v) {
    int i = int(v);
    if (double(i) != v || i < 0 || i > 255)
        throw ConfigError(key + ": intensity must be an integer in [0,255]");
    return i;
}

const char* scope_name(Scope s) { return s == Scope::image ? "image" : "roi"; }

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    if (key == "strip.min_lung_area_frac") strip.min_lung_area_frac = parse_double(key, value);
    else if (key == "strip.hole_fill_area") strip.hole_fill_area = parse_u64(key, value);
    else if (key == "threshold.k") threshold_k = parse_int(key, value);
    else if (key == "threshold.scope") threshold_scope = parse_scope(key, value);
    else if (key == "fa.population") fa.population = parse_int(key, value);
    else if (key == "fa.iterations") fa.iterations = parse_int(key, value);
    else if (key == "fa.beta0") fa.beta0 = parse_double(key, value);
    else if (key == "fa.gamma") fa.gamma = parse_double(key, value);
    else if (key == "fa.alpha0") fa.alpha0 = parse_double(key, value);
    else if (key == "fa.alpha_decay") fa.alpha_decay = parse_double(key, value);
    else if (key == "fa.seed") fa.seed = parse_u64(key, value);
    else if (key == "mrf.beta") mrf.beta = parse_double(key, value);
    else if (key == "mrf.em_iterations") mrf.em_iterations = parse_int(key, value);
    else if (key == "mrf.icm_sweeps") mrf.icm_sweeps_per_em = parse_int(key, value);
    else if (key == "mrf.rel_tolerance") mrf.rel_tolerance = parse_double(key, value);
    else if (key == "mrf.variance_floor") mrf.variance_floor = parse_double(key, value);
    else if (key == "post.min_component_area") post_min_component_area = parse_long(key, value);
    else if (key == "post.smooth") post_smooth = parse_bool(key, value);
    else if (key == "metrics.scope") metrics_scope = parse_scope(key, value);
    else if (key == "phantom.width") phantom.width = parse_int(key, value);
    else if (key == "phantom.height") phantom.height = parse_int(key, value);
    else if (key == "phantom.seed") phantom.seed = parse_u64(key, value);
    else if (key == "phantom.ambient_sigma") phantom.ambient_sigma = parse_double(key, value);
    else if (key == "phantom.ring") {
        auto v = parse_list(key, value, 6, "cx,cy,inner,outer,intensity,sigma");
        phantom.ring = RingSpec{v[0], v[1], v[2], v[3], checked_intensity(key, v[4]), v[5]};
    } else if (key == "phantom.lung") {
        auto v = parse_list(key, value, 4, "cx,cy,rx,ry");
        if (!lungs_replaced_) {
            phantom.lungs.clear();
            lungs_replaced_ = true;
        }
        phantom.lungs.push_back(EllipseSpec{v[0], v[1], v[2], v[3]});
    } else if (key == "phantom.lung_intensity") {
        phantom.lung_intensity = parse_int(key, value);
    } else if (key == "phantom.lung_sigma") {
        phantom.lung_sigma = parse_double(key, value);
    } else if (key == "phantom.lesion") {
        auto v = parse_list(key, value, 5, "cx,cy,r,intensity,sigma");
        if (!lesions_replaced_) {
            phantom.lesions.clear();
            lesions_replaced_ = true;
        }
        phantom.lesions.push_back(BlobSpec{v[0], v[1], v[2], checked_intensity(key, v[3]), v[4]});
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void PipelineConfig::apply_text(const std::string& text, const std::string& source) {
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        size_t end = nl == std::string::npos ? text.size() : nl;
        std::string line = trim(text.substr(pos, end - pos));
        ++line_no;
        if (!line.empty() && line[0] != '#') {
            size_t eq = line.find('=');
            try {
                if (eq == std::string::npos)
                    throw ConfigError("expected 'key = value'");
                apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            } catch (const ConfigError& e) {
                throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
}

void PipelineConfig::apply_file(const std::string& path) {
    std::vector<uint8_t> bytes = read_file(path);
    apply_text(std::string(bytes.begin(), bytes.end()), path);
}

void PipelineConfig::apply_override(const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    apply(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void PipelineConfig::validate() const {
    if (!(strip.min_lung_area_frac > 0.0 && strip.min_lung_area_frac < 1.0))
        throw ConfigError("strip.min_lung_area_frac must be in (0, 1)");
    if (threshold_k < 1 || threshold_k > 253)
        throw ConfigError("threshold.k must be in [1, 253]");
    fa.validate();
    mrf.validate();
    if (post_min_component_area < 0)
        throw ConfigError("post.min_component_area must be >= 0");
    phantom.validate();
}

std::string PipelineConfig::canonical_dump() const {
    std::string out;
    auto kv = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("strip.min_lung_area_frac", fmt_double(strip.min_lung_area_frac));
    kv("strip.hole_fill_area", std::to_string(strip.hole_fill_area));
    kv("threshold.k", std::to_string(threshold_k));
    kv("threshold.scope", scope_name(threshold_scope));
    kv("fa.population", std::to_string(fa.population));
    kv("fa.iterations", std::to_string(fa.iterations));
    kv("fa.beta0", fmt_double(fa.beta0));
    kv("fa.gamma", fmt_double(fa.gamma));
    kv("fa.alpha0", fmt_double(fa.alpha0));
    kv("fa.alpha_decay", fmt_double(fa.alpha_decay));
    kv("fa.seed", std::to_string(fa.seed));
    kv("mrf.beta", fmt_double(mrf.beta));
    kv("mrf.em_iterations", std::to_string(mrf.em_iterations));
    kv("mrf.icm_sweeps", std::to_string(mrf.icm_sweeps_per_em));
    kv("mrf.rel_tolerance", fmt_double(mrf.rel_tolerance));
    kv("mrf.variance_floor", fmt_double(mrf.variance_floor));
    kv("post.min_component_area", std::to_string(post_min_component_area));
    kv("post.smooth", post_smooth ? "on" : "off");
    kv("metrics.scope", scope_name(metrics_scope));
    kv("phantom.width", std::to_string(phantom.width));
    kv("phantom.height", std::to_string(phantom.height));
    kv("phantom.seed", std::to_string(phantom.seed));
    kv("phantom.ambient_sigma", fmt_double(phantom.ambient_sigma));
    kv("phantom.ring", fmt_double(phantom.ring.cx) + "," + fmt_double(phantom.ring.cy) + "," +
                           fmt_double(phantom.ring.inner) + "," + fmt_double(phantom.ring.outer) +
                           "," + std::to_string(phantom.ring.intensity) + "," +
                           fmt_double(phantom.ring.sigma));
    for (const EllipseSpec& e : phantom.lungs)
        kv("phantom.lung", fmt_double(e.cx) + "," + fmt_double(e.cy) + "," + fmt_double(e.rx) +
                               "," + fmt_double(e.ry));
    kv("phantom.lung_intensity", std::to_string(phantom.lung_intensity));
    kv("phantom.lung_sigma", fmt_double(phantom.lung_sigma));
    for (const BlobSpec& b : phantom.lesions)
        kv("phantom.lesion", fmt_double(b.cx) + "," + fmt_double(b.cy) + "," + fmt_double(b.r) +
                                 "," + std::to_string(b.intensity) + "," + fmt_double(b.sigma));
    return out;
}

} // namespace ctseg
