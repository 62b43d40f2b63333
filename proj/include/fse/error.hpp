// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fse {

// Failure categories. Kept distinct so callers (and the CLI exit-code
// mapping) can tell configuration, data and verification problems apart.
enum class errc {
  malformed_header,
  unsupported_depth,
  truncated_payload,
  io_failure,
  dimension_mismatch,
  bad_argument,
  empty_selection,
  no_support,
  symmetry_violation,
  realness_violation,
  never_issued,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_header: return "malformed_header";
    case errc::unsupported_depth: return "unsupported_depth";
    case errc::truncated_payload: return "truncated_payload";
    case errc::io_failure: return "io_failure";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::bad_argument: return "bad_argument";
    case errc::empty_selection: return "empty_selection";
    case errc::no_support: return "no_support";
    case errc::symmetry_violation: return "symmetry_violation";
    case errc::realness_violation: return "realness_violation";
    case errc::never_issued: return "never_issued";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) raise(code, what);
}

}  // namespace fse
