#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbiou {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (non-positive box size, b1 >= b2, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InsufficientHistory : public Error {
public:
    InsufficientHistory() : Error("motion window holds fewer than two observations") {}
};

class OutOfOrderFrame : public Error {
public:
    OutOfOrderFrame(long frame, long previous)
        : Error("frame " + std::to_string(frame) + " does not follow frame " + std::to_string(previous)),
          frame_(frame), previous_(previous) {}

    long frame() const noexcept { return frame_; }
    long previous() const noexcept { return previous_; }

private:
    long frame_;
    long previous_;
};

class MissingFeatures : public Error {
public:
    explicit MissingFeatures(long tracklet_id)
        : Error("tracklet " + std::to_string(tracklet_id) + " carries no appearance features"),
          tracklet_id_(tracklet_id) {}

    long tracklet_id() const noexcept { return tracklet_id_; }

private:
    long tracklet_id_;
};

class InconsistentCluster : public Error {
public:
    InconsistentCluster(long cluster_id, long frame)
        : Error("cluster " + std::to_string(cluster_id) + " holds two observations at frame " +
                std::to_string(frame)) {}
};

class NoGroundTruth : public Error {
public:
    NoGroundTruth() : Error("ground truth is required but none was supplied") {}
};

/// Malformed input record. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(line ? "line " + std::to_string(line) + ": " + reason : reason), line_(line),
          reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

}  // namespace cbiou
