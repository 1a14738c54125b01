#pragma once

#include <stdexcept>
#include <string>

namespace topicret {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data: bad files, inconsistent dimensions, degenerate
/// inputs the computation cannot proceed with.
class DataError : public Error {
public:
    using Error::Error;
};

/// Failure talking to a remote embedding provider.
class RemoteError : public Error {
public:
    using Error::Error;
};

/// Clusters whose geometry makes an index undefined (coincident centroids,
/// zero total scatter).
class DegenerateClustersError : public DataError {
public:
    using DataError::DataError;
};

} // namespace topicret
