#pragma once

#include <stdexcept>
#include <string>

namespace vsos {

// Exit classes for the CLI: every thrown error maps to exactly one code.
enum class ErrorClass : int {
  Schema = 2,          // config / input shape problems
  Dimension = 3,       // dimension mismatches and size guards
  Degenerate = 4,      // singular matrices, zero denominators, degenerate weights
  NonConvergence = 5,  // iterative solver failed to reach tolerance
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& msg)
      : std::runtime_error(msg), cls_(cls) {}
  ErrorClass error_class() const { return cls_; }
  int exit_code() const { return static_cast<int>(cls_); }

 private:
  ErrorClass cls_;
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& m) : Error(ErrorClass::Schema, m) {}
};
struct UnknownKeyError : Error {
  explicit UnknownKeyError(const std::string& m) : Error(ErrorClass::Schema, m) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error(ErrorClass::Dimension, m) {}
};
struct PatchTooLarge : Error {
  explicit PatchTooLarge(const std::string& m) : Error(ErrorClass::Dimension, m) {}
};
struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct SingularDenominator : Error {
  explicit SingularDenominator(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct DegenerateWeights : Error {
  explicit DegenerateWeights(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct ZeroPartitionFunction : Error {
  explicit ZeroPartitionFunction(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct RootOfUnity : Error {
  explicit RootOfUnity(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct ZeroC1 : Error {
  explicit ZeroC1(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct ZeroDenominator : Error {
  explicit ZeroDenominator(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct ZeroComponent : Error {
  explicit ZeroComponent(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct RankDeficient : Error {
  explicit RankDeficient(const std::string& m) : Error(ErrorClass::Degenerate, m) {}
};
struct NonConvergence : Error {
  explicit NonConvergence(const std::string& m) : Error(ErrorClass::NonConvergence, m) {}
};

}  // namespace vsos
