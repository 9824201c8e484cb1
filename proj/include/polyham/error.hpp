#pragma once

#include <stdexcept>
#include <string>

namespace polyham {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Arguments outside the domain where a closed form is valid (λ ≤ 1 for 1/r², ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Two radial bases whose λ values are not related by the pairing needed for an operator.
class PairingError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class MissingCoefficient : public Error {
public:
    explicit MissingCoefficient(std::string key)
        : Error("missing CG coefficient: " + key), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

}  // namespace polyham
