#pragma once

#include <stdexcept>
#include <string>

namespace lpo {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed <edit> tagging in a proposal-model reply. Feeds the retry policy.
class TagParseError : public Error {
public:
    enum class Kind { UnbalancedTags, NoSpans, SpanTooLong };

    TagParseError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Bad dataset file contents. Carries the 1-based line number when known.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, long line = -1) : Error(msg), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Transport or provider failure after the retry budget is exhausted.
// recoverable() distinguishes transient failures (a run may continue with
// partial results) from deterministic ones (replay drift) that abort the run.
class ProviderError : public Error {
public:
    explicit ProviderError(const std::string& msg, bool recoverable = true)
        : Error(msg), recoverable_(recoverable) {}
    bool recoverable() const { return recoverable_; }

private:
    bool recoverable_;
};

// Replay mode was asked for a request that was never recorded.
class CacheMissError : public ProviderError {
public:
    explicit CacheMissError(const std::string& digest)
        : ProviderError("replay cache miss for request digest " + digest,
                        /*recoverable=*/false),
          digest_(digest) {}
    const std::string& digest() const { return digest_; }

private:
    std::string digest_;
};

// Edit-scope identification failed every retry and fallback is disabled.
class TagIdentificationFailed : public Error {
public:
    explicit TagIdentificationFailed(const std::string& msg) : Error(msg) {}
};

// Every proposal reply for a candidate was rejected.
class EmptyProposalSet : public Error {
public:
    explicit EmptyProposalSet(const std::string& msg) : Error(msg) {}
};

// Invalid run configuration (bad value, missing path, unknown strategy...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Requested sample or split size is impossible.
class SizeError : public Error {
public:
    explicit SizeError(const std::string& msg) : Error(msg) {}
};

}  // namespace lpo
