#pragma once

#include <stdexcept>
#include <string>

namespace hopeclf {

// Malformed input, bad configuration, broken model files. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimizer and training failures. CLI exit code 3.
class TrainError : public std::runtime_error {
public:
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hopeclf
