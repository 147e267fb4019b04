#pragma once

#include <stdexcept>
#include <string>

namespace surveyscope {

// Error categories map onto CLI exit codes: config=2, data=3, remote=4.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RemoteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- data errors ---

class BaselineZeroError : public DataError {
public:
    using DataError::DataError;
};

class DimensionMismatchError : public DataError {
public:
    using DataError::DataError;
};

class EmptyTextError : public DataError {
public:
    EmptyTextError(const std::string& what, std::size_t index)
        : DataError(what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class MissingAspectError : public DataError {
public:
    using DataError::DataError;
};

class MissingFeatureError : public DataError {
public:
    using DataError::DataError;
};

class ZeroMassError : public DataError {
public:
    using DataError::DataError;
};

class LengthMismatchError : public DataError {
public:
    using DataError::DataError;
};

class MissingScoreError : public DataError {
public:
    using DataError::DataError;
};

class EmptyComponentError : public DataError {
public:
    using DataError::DataError;
};

class UnpairedSurveyError : public DataError {
public:
    using DataError::DataError;
};

class MissingRubricError : public DataError {
public:
    using DataError::DataError;
};

class MissingWeightsError : public DataError {
public:
    using DataError::DataError;
};

// Replay-mode lookup miss: the run asked for a request that was never recorded.
class TranscriptMissError : public DataError {
public:
    using DataError::DataError;
};

// --- remote errors ---

class TransportError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class ProtocolError : public RemoteError {
public:
    using RemoteError::RemoteError;
};

class QuotaExceededError : public RemoteError {
public:
    QuotaExceededError(const std::string& what, int retry_after_seconds)
        : RemoteError(what), retry_after_(retry_after_seconds) {}
    int retry_after_seconds() const { return retry_after_; }

private:
    int retry_after_;
};

}  // namespace surveyscope
