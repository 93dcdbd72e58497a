#pragma once

#include <stdexcept>
#include <string>

namespace head {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inputs are individually valid but contradict each other
/// (e.g. a relation naming an object that is not in the prompt).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ScheduleError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The expected-time series diverges: no attempt can ever be accepted.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid input data. Carries the record index and field
/// when known so that ingestion problems can be located.
class DataError : public Error {
 public:
  DataError(std::string message, long record = -1, std::string field = {})
      : Error(format(message, record, field)),
        record_(record),
        field_(std::move(field)) {}

  long record() const noexcept { return record_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& message, long record,
                            const std::string& field) {
    std::string out;
    if (record >= 0) out += "record " + std::to_string(record);
    if (!field.empty()) out += (out.empty() ? "field '" : ", field '") + field + "'";
    if (!out.empty()) out += ": ";
    return out + message;
  }

  long record_;
  std::string field_;
};

}  // namespace head
