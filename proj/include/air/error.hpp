#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace air {

/// Base of every error raised by the library. Callers that only need a
/// diagnostic can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An error tied to a line of an input file (1-based).
class LineError : public Error {
public:
    LineError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class MalformedRule : public LineError {
public:
    using LineError::LineError;
};

class MalformedLine : public LineError {
public:
    using LineError::LineError;
};

class DuplicateQueryId : public LineError {
public:
    using LineError::LineError;
};

class DuplicateDocId : public Error {
public:
    explicit DuplicateDocId(const std::string& id) : Error("duplicate document id: " + id) {}
};

class CommitAlreadyDone : public Error {
public:
    CommitAlreadyDone() : Error("index builder already committed") {}
};

class IoFailure : public Error {
public:
    using Error::Error;
};

class FormatVersionMismatch : public Error {
public:
    using Error::Error;
};

class CorruptIndex : public Error {
public:
    using Error::Error;
};

class InvalidPage : public Error {
public:
    using Error::Error;
};

class InvalidOptions : public Error {
public:
    using Error::Error;
};

class ContractViolation : public Error {
public:
    using Error::Error;
};

class MissingQrels : public Error {
public:
    explicit MissingQrels(const std::string& query_id)
        : Error("no relevance judgments for query " + query_id) {}
};

class QuerySetMismatch : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

}  // namespace air
