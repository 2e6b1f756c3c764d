#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace boostkit {

/// Bad or inconsistent command-line arguments / configuration (CLI exit 2).
class ArgError : public std::runtime_error {
public:
    explicit ArgError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problems with the data itself: unparseable cells, incompatible response,
/// constant columns, missing files (CLI exit 3).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failure: singular systems, divergent estimates (CLI exit 4).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Canonical number formatting for all TSV/CSV output. One code path keeps
/// reports byte-identical across thread counts and repeated runs.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace boostkit
