#pragma once

#include <string>
#include <vector>

#include "mukleene/rset.hpp"

namespace mukleene {

// 64-bit FNV-1a of the given bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

std::string window_str(const RIv& w);
RIv window_from_str(const std::string& s);

// Replayable record of one realiser run: which realiser, which input (by
// content digest), the output payload, and the oracle windows consulted in
// order. Serialization is byte-stable: sorted keys, fixed indentation.
struct RealiserReport {
  std::string realiser;
  std::string input_digest;
  std::string payload;  // JSON object text
  std::vector<RIv> query_log;
  long precision = 0;

  std::string canonical_text() const;
  static RealiserReport parse(const std::string& text);
};

}  // namespace mukleene
