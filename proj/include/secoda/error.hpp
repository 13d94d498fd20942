#pragma once

#include <stdexcept>
#include <string>

namespace secoda {

// Root of every exception the library throws. The command-line front end maps
// IoError to exit code 3 and every other Error to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed delimited text or otherwise unusable input data.
class InputError : public Error {
public:
    using Error::Error;
};

// Duplicate or unknown column names, unparsable schema text.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Unknown column name or case id.
class LookupError : public Error {
public:
    using Error::Error;
};

// Out-of-range arguments (arity < 1, unknown dataset name, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// A numeric column without a single non-missing value cannot be discretized.
class EmptyColumnError : public Error {
public:
    using Error::Error;
};

// Inconsistent EngineConfig.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Detection task without positives or without negatives.
class TaskError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace secoda
