#ifndef SCFEM_ERRORS_HPP
#define SCFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scfem {

// Invalid parameters or violated configuration invariants.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A requested quantity does not exist under the given parameter regime.
class ConditionNotMet : public std::runtime_error {
public:
  explicit ConditionNotMet(const std::string& msg) : std::runtime_error(msg) {}
};

class NoRealRoot : public ConditionNotMet {
public:
  explicit NoRealRoot(const std::string& msg) : ConditionNotMet(msg) {}
};

class NoCriticalMesh : public ConditionNotMet {
public:
  explicit NoCriticalMesh(const std::string& msg) : ConditionNotMet(msg) {}
};

class NoAdmissibleRatio : public ConditionNotMet {
public:
  explicit NoAdmissibleRatio(const std::string& msg) : ConditionNotMet(msg) {}
};

// Two independent evaluation routes disagreed, or an intermediate left its
// mathematically guaranteed range. Indicates a bug, not bad user input.
class ConsistencyError : public std::logic_error {
public:
  explicit ConsistencyError(const std::string& msg) : std::logic_error(msg) {}
};

class DegenerateNormalization : public ConsistencyError {
public:
  explicit DegenerateNormalization(const std::string& msg) : ConsistencyError(msg) {}
};

// An exactly singular pivot during a linear solve; carries the mode index.
class SingularSystem : public std::runtime_error {
public:
  SingularSystem(const std::string& msg, int mode) : std::runtime_error(msg), mode_(mode) {}
  int mode() const { return mode_; }

private:
  int mode_;
};

}  // namespace scfem

#endif
