#include "hmlkit/error.hpp"

#include <utility>

namespace hmlkit {

namespace {

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)),
      message_(std::move(message)),
      line_(line),
      column_(column) {}

}  // namespace hmlkit
