#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dta {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Too few studies for the requested estimation step.
class InsufficientStudies : public Error {
 public:
  InsufficientStudies(std::size_t have, std::size_t need)
      : Error("need at least " + std::to_string(need) + " studies, got " + std::to_string(have)),
        have_(have),
        need_(need) {}

  std::size_t have() const { return have_; }
  std::size_t need() const { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

/// All observations coincide, so the likelihood carries no information on Sigma.
class DegenerateDataset : public Error {
 public:
  using Error::Error;
};

/// The corrected threshold x(1 + h) is not positive.
class RegionUndefined : public Error {
 public:
  explicit RegionUndefined(double h)
      : Error("corrected region undefined: 1 + h = " + std::to_string(1.0 + h) + " <= 0"), h_(h) {}

  double h() const { return h_; }

 private:
  double h_;
};

}  // namespace dta
