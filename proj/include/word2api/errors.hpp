#pragma once

#include <stdexcept>
#include <string>

namespace word2api {

/// A queried term is absent from the vocabulary a method operates on.
class OovError : public std::runtime_error {
 public:
  OovError(const std::string& term, const std::string& vocabulary)
      : std::runtime_error("term '" + term + "' not in " + vocabulary),
        term_(term) {}

  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

/// A line-oriented input file does not match its format.
class FileFormatError : public std::runtime_error {
 public:
  FileFormatError(const std::string& file, std::size_t line,
                  const std::string& what)
      : std::runtime_error(file + ": line " + std::to_string(line) + ": " +
                           what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Invalid configuration (flag or parameter values); reported before any work.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace word2api
