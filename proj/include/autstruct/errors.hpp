#ifndef AUTSTRUCT_ERRORS_HPP_
#define AUTSTRUCT_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace autstruct {

  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Bad arguments: mismatched alphabets, unknown labels, etc.
  class UsageError : public Error {
   public:
    using Error::Error;
  };

  class ParseError : public Error {
   public:
    ParseError(std::string const& what, std::size_t line = 0)
        : Error(line == 0 ? what
                          : "line " + std::to_string(line) + ": " + what),
          _line(line) {}

    std::size_t line() const noexcept {
      return _line;
    }

   private:
    std::size_t _line;
  };

  // A construction exceeded its configured state budget.
  class BudgetExceeded : public Error {
   public:
    BudgetExceeded(std::string operation, std::size_t budget)
        : Error(operation + ": state budget of " + std::to_string(budget)
                + " exceeded"),
          _operation(std::move(operation)),
          _budget(budget) {}

    std::string const& operation() const noexcept {
      return _operation;
    }
    std::size_t budget() const noexcept {
      return _budget;
    }

   private:
    std::string _operation;
    std::size_t _budget;
  };

}  // namespace autstruct

#endif  // AUTSTRUCT_ERRORS_HPP_
