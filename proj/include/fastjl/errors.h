#ifndef FASTJL_ERRORS_H_
#define FASTJL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fastjl {

// Root of every error the library throws. The CLI maps subclasses to exit
// codes (see tools/cli.cc).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented contract (non power of two, bad block layout,
// non symmetric input to the eigensolver, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Numeric parameter outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Work or memory guard tripped, or an IO failure.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// A private release was requested on input that fails the spectral floor.
class PrivacyPreconditionError : public Error {
 public:
  PrivacyPreconditionError(const std::string& what, double sigma_min,
                           double threshold)
      : Error(what), sigma_min_(sigma_min), threshold_(threshold) {}
  double sigma_min() const { return sigma_min_; }
  double threshold() const { return threshold_; }

 private:
  double sigma_min_;
  double threshold_;
};

}  // namespace fastjl

#endif  // FASTJL_ERRORS_H_
