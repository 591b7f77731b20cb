// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signvoice {

// Every failure raised by the library carries one of these codes so callers
// and tests can distinguish causes without parsing messages.
enum class Errc {
  io,
  bad_magic,
  unsupported_version,
  truncated,
  rank_too_large,
  bad_format,
  shape_mismatch,
  invalid_argument,
  missing_index,
  wrong_window_length,
  label_out_of_range,
  too_short,
  empty_input,
  zero_norm_reference,
  non_finite,
  no_forward_pass,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace signvoice
