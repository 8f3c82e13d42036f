#pragma once

#include <stdexcept>
#include <string>

namespace gonio {

// Every recoverable failure in the library derives from Error so callers
// (the CLI in particular) can separate input problems from internal bugs.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// audio_ingest
class NotStereo : public Error {
public:
    explicit NotStereo(int channels)
        : Error("not a stereo file (" + std::to_string(channels) + " channels)"), channels_(channels) {}
    int channels() const noexcept { return channels_; }

private:
    int channels_;
};

class UnsupportedEncoding : public Error {
public:
    using Error::Error;
};

class CorruptFile : public Error {
public:
    using Error::Error;
};

// framing
class TooShort : public Error {
public:
    using Error::Error;
};

// feature_store
class EmptyInput : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// som
class ZeroVariance : public Error {
public:
    explicit ZeroVariance(std::size_t dim)
        : Error("feature dimension " + std::to_string(dim) + " has zero variance"), dim_(dim) {}
    std::size_t dimension() const noexcept { return dim_; }

private:
    std::size_t dim_;
};

class EmptyData : public Error {
public:
    using Error::Error;
};

class DimOutOfRange : public Error {
public:
    using Error::Error;
};

} // namespace gonio
