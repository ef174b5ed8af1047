#ifndef LOADSCHED_ERRORS_HPP
#define LOADSCHED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loadsched {

// Error classes map 1:1 to CLI exit codes (see exit_code()).
enum class ErrorClass {
    Config = 2,      // bad or inconsistent configuration values
    Validation = 3,  // bad arguments / out-of-range indices / malformed files
    Capability = 4,  // input exceeds a guarded size limit (e.g. exact solver)
    Calibration = 5, // measurements yield no valid model parameters
    Storage = 6,     // store I/O, format or budget failures
    Internal = 7,    // broken internal invariant (always a bug)
};

class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

  private:
    ErrorClass cls_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorClass::Config, w) {}
};
struct ValidationError : Error {
    explicit ValidationError(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct CapabilityError : Error {
    explicit CapabilityError(const std::string& w) : Error(ErrorClass::Capability, w) {}
};
struct CalibrationError : Error {
    explicit CalibrationError(const std::string& w) : Error(ErrorClass::Calibration, w) {}
};
struct StorageError : Error {
    explicit StorageError(const std::string& w) : Error(ErrorClass::Storage, w) {}
};
struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error(ErrorClass::Internal, w) {}
};

} // namespace loadsched

#endif
