#pragma once

#include <stdexcept>
#include <string>

namespace dtml {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexical or grammatical error in formula or file text.
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Raised during satisfaction: unknown action model, unmapped variable, ...
struct EvalError : Error {
  using Error::Error;
};

// Structural problem with a model, action model or update result.
struct ModelError : Error {
  using Error::Error;
};

}  // namespace dtml
