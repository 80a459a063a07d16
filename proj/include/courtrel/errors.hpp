#ifndef COURTREL_ERRORS_HPP
#define COURTREL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace courtrel {

// Error categories map 1:1 to CLI exit codes (input=2, pattern=3, internal=4).
enum class ErrorCategory { Input, Pattern, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& message)
      : Error(ErrorCategory::Input, message) {}
};

class MalformedRecord : public InputError {
 public:
  MalformedRecord(std::size_t line, const std::string& message)
      : InputError("malformed record at line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DanglingCase : public InputError {
 public:
  explicit DanglingCase(const std::string& case_id)
      : InputError("utterance references unknown case \"" + case_id + "\""),
        case_id_(case_id) {}
  const std::string& case_id() const { return case_id_; }

 private:
  std::string case_id_;
};

class MissingVote : public InputError {
 public:
  MissingVote(const std::string& case_id, const std::string& justice_id)
      : InputError("case \"" + case_id + "\" has no vote for speaking justice \"" +
                   justice_id + "\""),
        case_id_(case_id),
        justice_id_(justice_id) {}
  const std::string& case_id() const { return case_id_; }
  const std::string& justice_id() const { return justice_id_; }

 private:
  std::string case_id_;
  std::string justice_id_;
};

class PretagMismatch : public InputError {
 public:
  using InputError::InputError;
};

class SampleTooLarge : public InputError {
 public:
  using InputError::InputError;
};

class EmptyTable : public InputError {
 public:
  EmptyTable() : InputError("contingency table is empty (N = 0)") {}
};

class InfeasibleSpec : public InputError {
 public:
  using InputError::InputError;
};

class PatternError : public Error {
 public:
  explicit PatternError(const std::string& message)
      : Error(ErrorCategory::Pattern, message) {}
};

class PatternSyntax : public PatternError {
 public:
  PatternSyntax(std::size_t line, std::size_t column, const std::string& message)
      : PatternError("pattern syntax error at " + std::to_string(line) + ":" +
                     std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DuplicateId : public PatternError {
 public:
  explicit DuplicateId(const std::string& id)
      : PatternError("duplicate pattern id \"" + id + "\"") {}
};

class MissingSlot : public PatternError {
 public:
  MissingSlot(std::size_t line, const std::string& which)
      : PatternError("pattern at line " + std::to_string(line) +
                     " is missing or repeats the " + which + " noun-phrase slot") {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& message)
      : Error(ErrorCategory::Internal, message) {}
};

}  // namespace courtrel

#endif
