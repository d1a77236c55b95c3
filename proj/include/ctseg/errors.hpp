#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ctseg {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (bad magic, garbage header, invalid dimensions).
class FormatError : public Error {
public:
    using Error::Error;
};

// Well-formed file at a bit depth we do not handle (maxval != 255).
class UnsupportedDepthError : public Error {
public:
    using Error::Error;
};

// Pixel payload shorter than the header promises.
class SizeError : public Error {
public:
    using Error::Error;
};

// Two rasters that must share a shape do not.
class DimensionError : public Error {
public:
    using Error::Error;
};

// An operation was asked to work on a region with no pixels in it.
class EmptyRegionError : public Error {
public:
    using Error::Error;
};

// Confusion matrix with all counts zero.
class EmptyScopeError : public Error {
public:
    using Error::Error;
};

// Aggregation over an empty result list.
class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

// Histogram that cannot be split (fewer than two distinct nonzero bins).
class DegenerateHistogramError : public Error {
public:
    using Error::Error;
};

// Exhaustive threshold search requested beyond its tractable range.
class OracleScopeError : public Error {
public:
    using Error::Error;
};

// Two classes tie on the criterion used to pick the lesion class.
class AmbiguousClassError : public Error {
public:
    using Error::Error;
};

// Invalid generator geometry (lesion outside lung, bad radii, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

// Bad key, bad value, or inconsistent settings in a config source.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure (open/read/write).
class IoError : public Error {
public:
    using Error::Error;
};

// Wraps an error thrown inside a pipeline stage with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& msg)
        : Error("[" + stage + "] " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace ctseg
