#pragma once
// Error hierarchy. The three broad families map onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, ModelError -> 4.

#include <stdexcept>
#include <string>

namespace repsig {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

struct ModelError : Error {
    using Error::Error;
};

// ingest
struct EmptyInput : DataError {
    using DataError::DataError;
};
struct MissingMau : DataError {
    using DataError::DataError;
};
struct InsufficientRecords : DataError {
    using DataError::DataError;
};

// noise metrics
struct EmptySample : DataError {
    using DataError::DataError;
};
struct UnlabelledRecord : DataError {
    using DataError::DataError;
};

// statistics
struct StatError : Error {
    using Error::Error;
};
struct InsufficientSample : StatError {
    using StatError::StatError;
};
struct DegenerateVariance : StatError {
    using StatError::StatError;
};
struct SampleTooSmall : StatError {
    using StatError::StatError;
};
struct DegenerateSample : StatError {
    using StatError::StatError;
};
struct CyclicOrder : StatError {
    using StatError::StatError;
};

// classifier
struct TooFewInstances : ModelError {
    using ModelError::ModelError;
};
struct DegenerateTargets : ModelError {
    using ModelError::ModelError;
};
struct EmptyTestSet : ModelError {
    using ModelError::ModelError;
};

}  // namespace repsig
