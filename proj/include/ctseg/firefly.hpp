#pragma once

#include <cstdint>
#include <vector>

#include "ctseg/entropy.hpp"

namespace ctseg {

struct FireflyParams {
    int population = 20;
    int iterations = 100;
    double beta0 = 1.0;            // attraction at zero distance
    double gamma = 1.0 / 65025.0;  // 1/(L-1)^2 keeps attraction O(1) across the box
    double alpha0 = 10.0;          // initial random-walk scale, in intensity units
    double alpha_decay = 0.97;     // per-iteration multiplier on alpha
    uint64_t seed = 1;

    void validate() const; // throws ConfigError on out-of-range values
};

// One candidate solution: a real-valued cut vector and the score of its
// rounded form.
struct Firefly {
    std::vector<double> position;
    double brightness = 0.0;
};

struct FaResult {
    ThresholdSet cuts;
    double score = 0.0;
    std::vector<double> trace; // best score seen up to each iteration, non-decreasing
};

// Firefly search over cut vectors, maximizing shannon_objective. Fully
// deterministic for a given (histogram, k, params): update order is firefly
// index major, coordinate minor, and every random draw comes from one
// seeded stream. The returned score always equals
// shannon_objective(returned cuts) and can never exceed the exhaustive
// optimum for the same histogram.
FaResult fa_optimize(const Histogram& hist, int k, const FireflyParams& params);

// "iteration,best_score" rows, one per iteration.
std::string fa_trace_csv(const std::vector<double>& trace);

} // namespace ctseg
