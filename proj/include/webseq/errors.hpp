#pragma once

#include <stdexcept>
#include <string>

namespace webseq {

/// Base class for every error this library reports.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// log ingestion
class MalformedLine : public Error {
public:
  explicit MalformedLine(const std::string& msg) : Error("malformed line: " + msg) {}
};
class UnsupportedFormat : public Error {
public:
  explicit UnsupportedFormat(const std::string& msg) : Error("unsupported format: " + msg) {}
};

// sessionization
class UnsortedInput : public Error {
public:
  explicit UnsortedInput(const std::string& msg) : Error("unsorted input: " + msg) {}
};
class UnknownId : public Error {
public:
  explicit UnknownId(const std::string& msg) : Error("unknown id: " + msg) {}
};
class EmptyFile : public Error {
public:
  explicit EmptyFile(const std::string& msg) : Error("empty file: " + msg) {}
};

// mining
class TooLarge : public Error {
public:
  explicit TooLarge(const std::string& msg) : Error("too large for exhaustive oracle: " + msg) {}
};

// cyclic analysis
class NoTimestamps : public Error {
public:
  explicit NoTimestamps(const std::string& msg) : Error("no real timestamps: " + msg) {}
};
class PairUnobserved : public Error {
public:
  explicit PairUnobserved(const std::string& msg) : Error("pair unobserved: " + msg) {}
};

// rule depository
class BadHeader : public Error {
public:
  explicit BadHeader(const std::string& msg) : Error("bad header: " + msg) {}
};
class DuplicatePair : public Error {
public:
  explicit DuplicatePair(const std::string& msg) : Error("duplicate rule pair: " + msg) {}
};
class NonPositivePeriod : public Error {
public:
  explicit NonPositivePeriod(const std::string& msg) : Error("invalid period: " + msg) {}
};

// simulation
class UnsortedStream : public Error {
public:
  explicit UnsortedStream(const std::string& msg) : Error("unsorted stream: " + msg) {}
};

}  // namespace webseq
