#ifndef XLTPROJECT_ERROR_HPP
#define XLTPROJECT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xltproject {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input bytes could not be parsed. `line` and `column` are 1-based; 0 means
/// "not applicable" (JSON records carry the record index in `record`).
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column = 0,
             std::size_t record = npos)
      : Error(format(msg, line, column, record)), line_(line), column_(column),
        record_(record) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t record() const noexcept { return record_; }

private:
  static std::string format(const std::string& msg, std::size_t line,
                            std::size_t column, std::size_t record) {
    std::string out = "parse error";
    if (record != npos) out += " at record " + std::to_string(record);
    if (line != 0) out += " at line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + msg;
  }

  std::size_t line_;
  std::size_t column_;
  std::size_t record_;
};

/// Well-formed input that violates a semantic contract (BIO validity,
/// dimensionality, bounds, filter/direction compatibility, ...). `index` names
/// the offending sentence or record when there is one.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg, std::size_t index = npos)
      : Error(index == npos ? "validation error: " + msg
                            : "validation error at index " + std::to_string(index) +
                                  ": " + msg),
        message_(msg), index_(index) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t index() const noexcept { return index_; }
  /// The message without the "validation error at index N" prefix.
  const std::string& message() const noexcept { return message_; }

private:
  std::string message_;
  std::size_t index_;
};

/// File system failure (missing input, unwritable output).
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace xltproject

#endif // XLTPROJECT_ERROR_HPP
