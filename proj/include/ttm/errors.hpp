#pragma once

#include <stdexcept>
#include <string>

namespace ttm {

// Malformed documents, unknown identifiers, structural problems in inputs.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A query or operation outside its domain (departure before the period,
// regularizing twice, window outside the data period, ...).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ttm
