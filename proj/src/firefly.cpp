#include "ctseg/firefly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ctseg/errors.hpp"
#include "ctseg/rng.hpp"

namespace ctseg {

namespace {

constexpr double kLoCut = 1.0;
constexpr double kHiCut = 254.0;

// Keep a real-valued position a valid ordered cut vector: clamp to the
// box, sort ascending, push coincident coordinates apart by +1 (collisions
// happen at the clamp rails), walking back down if that runs past 254.
// Sorted positions make the coordinate-wise attraction pairing canonical
// (d-th smallest cut moves toward d-th smallest cut).
void normalize_position(std::vector<double>& pos) {
    for (double& c : pos) c = std::clamp(c, kLoCut, kHiCut);
    std::sort(pos.begin(), pos.end());
    for (size_t i = 1; i < pos.size(); ++i) {
        if (pos[i] <= pos[i - 1]) pos[i] = pos[i - 1] + 1.0;
    }
    if (pos.back() > kHiCut) {
        pos.back() = kHiCut;
        for (size_t i = pos.size() - 1; i-- > 0;) {
            if (pos[i] >= pos[i + 1]) pos[i] = pos[i + 1] - 1.0;
        }
    }
}

// Evaluation quantizes a copy of the position: round, clamp, sort
// ascending, then the same +1 separation (rounding can re-collide
// neighboring cuts even when the reals are distinct). The result is always
// a valid strictly increasing cut vector.
std::vector<int> quantize(const std::vector<double>& position) {
    std::vector<int> cuts(position.size());
    for (size_t i = 0; i < position.size(); ++i) {
        double v = std::clamp(position[i], kLoCut, kHiCut);
        cuts[i] = int(std::llround(v));
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] <= cuts[i - 1]) cuts[i] = cuts[i - 1] + 1;
    }
    if (cuts.back() > int(kHiCut)) {
        cuts.back() = int(kHiCut);
        for (size_t i = cuts.size() - 1; i-- > 0;) {
            if (cuts[i] >= cuts[i + 1]) cuts[i] = cuts[i + 1] - 1;
        }
    }
    return cuts;
}

} // namespace

void FireflyParams::validate() const {
    if (population < 2) throw ConfigError("fa.population must be >= 2");
    if (iterations < 1) throw ConfigError("fa.iterations must be >= 1");
    if (!(beta0 > 0.0)) throw ConfigError("fa.beta0 must be > 0");
    if (!(gamma > 0.0)) throw ConfigError("fa.gamma must be > 0");
    if (!(alpha0 >= 0.0)) throw ConfigError("fa.alpha0 must be >= 0");
    if (!(alpha_decay > 0.0 && alpha_decay <= 1.0))
        throw ConfigError("fa.alpha_decay must be in (0, 1]");
}

FaResult fa_optimize(const Histogram& hist, int k, const FireflyParams& params) {
    params.validate();
    if (hist.total == 0) throw Error("fa_optimize: histogram is empty");
    if (k < 1) throw Error("fa_optimize: k must be >= 1");
    if (k > 253) throw Error("fa_optimize: k too large for the intensity range");

    auto evaluate = [&](const std::vector<double>& pos) {
        ThresholdSet t;
        t.cuts = quantize(pos);
        return std::pair<double, std::vector<int>>(shannon_objective(hist, t), t.cuts);
    };

    Rng rng(params.seed);
    const int P = params.population;

    std::vector<Firefly> swarm(static_cast<size_t>(P));
    for (auto& f : swarm) {
        f.position.resize(size_t(k));
        for (double& c : f.position) c = rng.uniform(kLoCut, kHiCut);
        normalize_position(f.position);
    }

    std::vector<int> best_cuts;
    double best_score = -1.0;
    auto score_all = [&]() {
        for (auto& f : swarm) {
            auto [s, cuts] = evaluate(f.position);
            f.brightness = s;
            if (s > best_score) { // strict: first achiever stays the incumbent
                best_score = s;
                best_cuts = cuts;
            }
        }
    };
    score_all();

    FaResult res;
    res.trace.reserve(size_t(params.iterations));

    double alpha = params.alpha0;
    std::vector<double> snapshot(static_cast<size_t>(P));
    for (int it = 0; it < params.iterations; ++it) {
        // Movement decisions use the brightness values from the previous
        // evaluation; positions update in place as the sweep progresses.
        for (int i = 0; i < P; ++i) snapshot[size_t(i)] = swarm[size_t(i)].brightness;

        for (int i = 0; i < P; ++i) {
            for (int j = 0; j < P; ++j) {
                if (snapshot[size_t(j)] <= snapshot[size_t(i)]) continue;
                double d2 = 0.0;
                for (int d = 0; d < k; ++d) {
                    double diff = swarm[size_t(j)].position[size_t(d)] -
                                  swarm[size_t(i)].position[size_t(d)];
                    d2 += diff * diff;
                }
                double attract = params.beta0 * std::exp(-params.gamma * d2);
                for (int d = 0; d < k; ++d) {
                    double& c = swarm[size_t(i)].position[size_t(d)];
                    double pull = swarm[size_t(j)].position[size_t(d)] - c;
                    c += attract * pull + alpha * rng.normal();
                }
                normalize_position(swarm[size_t(i)].position);
            }
        }

        score_all(); // refreshes brightness and the global best (elitism)
        res.trace.push_back(best_score);
        alpha *= params.alpha_decay;
    }

    res.cuts = ThresholdSet::validated(best_cuts);
    res.score = best_score;
    return res;
}

std::string fa_trace_csv(const std::vector<double>& trace) {
    std::string out = "iteration,best_score\n";
    char buf[64];
    for (size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g\n", i, trace[i]);
        out += buf;
    }
    return out;
}

} // namespace ctseg
