#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfront {

/// Bad input data (malformed files, inconsistent identifiers).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t offset, std::string uid)
      : DataError(what + " (byte " + std::to_string(offset) +
                  (uid.empty() ? std::string() : ", uid '" + uid + "'") + ")"),
        offset_(offset),
        uid_(std::move(uid)) {}

  std::size_t offset() const { return offset_; }
  const std::string& uid() const { return uid_; }

 private:
  std::size_t offset_;
  std::string uid_;
};

}  // namespace rfront
