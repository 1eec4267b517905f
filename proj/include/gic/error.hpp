#pragma once

#include <stdexcept>
#include <string>

namespace gic {

// Base for every error the library raises. Callers that only need a
// diagnostic can catch this; the subclasses exist so tests and the CLI can
// tell failure modes apart.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidBudgetError : public Error {
public:
    using Error::Error;
};

class ContradictoryDirectionError : public Error {
public:
    using Error::Error;
};

class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

class NumericInputError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IngestionError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

} // namespace gic
