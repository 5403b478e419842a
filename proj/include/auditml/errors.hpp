#pragma once

#include <stdexcept>
#include <string>

namespace auditml {

// Coarse classes map to CLI exit codes: usage/config -> 2, data -> 3,
// training/convergence -> 4.
enum class ErrorClass { config, data, train };

// All library failures are thrown as Error. `category` is the short
// machine-parsable tag printed as error[category]: by the CLI
// (e.g. "schema", "consistency", "stratification").
class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string category, const std::string& message)
      : std::runtime_error(message), cls_(cls), category_(std::move(category)) {}

  ErrorClass error_class() const { return cls_; }
  const std::string& category() const { return category_; }

  int exit_code() const {
    switch (cls_) {
      case ErrorClass::config: return 2;
      case ErrorClass::data: return 3;
      case ErrorClass::train: return 4;
    }
    return 1;
  }

  static Error config(const std::string& category, const std::string& msg) {
    return Error(ErrorClass::config, category, msg);
  }
  static Error data(const std::string& category, const std::string& msg) {
    return Error(ErrorClass::data, category, msg);
  }
  static Error train(const std::string& category, const std::string& msg) {
    return Error(ErrorClass::train, category, msg);
  }

 private:
  ErrorClass cls_;
  std::string category_;
};

}  // namespace auditml
