// Copyright 2026 The SignVoice Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "signvoice/core/error.hpp"

namespace signvoice {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::io: return "io";
    case Errc::bad_magic: return "bad_magic";
    case Errc::unsupported_version: return "unsupported_version";
    case Errc::truncated: return "truncated";
    case Errc::rank_too_large: return "rank_too_large";
    case Errc::bad_format: return "bad_format";
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::missing_index: return "missing_index";
    case Errc::wrong_window_length: return "wrong_window_length";
    case Errc::label_out_of_range: return "label_out_of_range";
    case Errc::too_short: return "too_short";
    case Errc::empty_input: return "empty_input";
    case Errc::zero_norm_reference: return "zero_norm_reference";
    case Errc::non_finite: return "non_finite";
    case Errc::no_forward_pass: return "no_forward_pass";
  }
  return "unknown";
}

}  // namespace signvoice
