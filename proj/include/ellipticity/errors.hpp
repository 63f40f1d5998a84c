#pragma once

#include <stdexcept>
#include <string>

namespace ellipticity {

// Base class for every error raised by the library. Callers that only care
// about "bad input vs. bug" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input tensor whose symmetry orbit spreads further than the allowed tolerance.
class SymmetryViolation : public Error {
 public:
  SymmetryViolation(const std::string& what, double spread)
      : Error(what), spread_(spread) {}
  double spread() const noexcept { return spread_; }

 private:
  double spread_;
};

class AsymmetricInput : public Error {
 public:
  AsymmetricInput(const std::string& what, double asymmetry)
      : Error(what), asymmetry_(asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

class InvalidOptions : public Error {
 public:
  using Error::Error;
};

class InvalidEpsilon : public Error {
 public:
  using Error::Error;
};

// Raised by a case checker handed a decomposition with the wrong (r, q) shape.
class CaseMismatch : public Error {
 public:
  CaseMismatch(const std::string& what, int case_id) : Error(what), case_id_(case_id) {}
  int case_id() const noexcept { return case_id_; }

 private:
  int case_id_;
};

class SingularDirection : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownGenerator : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

}  // namespace ellipticity
