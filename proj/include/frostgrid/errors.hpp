#pragma once

#include <stdexcept>
#include <string>

namespace frostgrid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Instance generation produced no usable candidate site, or k exceeds the site count.
class InfeasibleInstance : public Error {
 public:
  using Error::Error;
};

class InfeasibleParameters : public Error {
 public:
  using Error::Error;
};

class NoSpanningTree : public Error {
 public:
  using Error::Error;
};

/// A name or index in external data does not resolve against the model.
class MappingError : public Error {
 public:
  using Error::Error;
};

class ExportError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PlacementError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure or a model the built-in solver cannot handle.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace frostgrid
