#pragma once

#include <stdexcept>
#include <string>

namespace gridplan {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rejected input file content: malformed JSON, unknown keys, missing fields.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (rules, cases, scenarios, search settings).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Topology precondition violated: unsupplied bus, meshed feeder, invalid network.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// Measure catalog or measure application problem (conflicting targets, unknown ids).
class MeasureError : public Error {
public:
    using Error::Error;
};

}
