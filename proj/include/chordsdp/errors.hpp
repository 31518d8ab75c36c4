#pragma once

#include <stdexcept>
#include <string>

namespace chordsdp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSquareLength : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

class NotChordal : public Error {
 public:
  using Error::Error;
};

class DisconnectedCliqueGraph : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class UncoveredEntry : public Error {
 public:
  using Error::Error;
};

class OverlapMismatch : public Error {
 public:
  using Error::Error;
};

class MissingNeighborPayload : public Error {
 public:
  using Error::Error;
};

/// A message arrived from an agent that is not a neighbor.
class UnexpectedPayload : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent problem file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace chordsdp
