#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "segdiag/errors.hpp"

namespace segdiag {

// Malformed UTF-8; `byte_offset` points at the offending byte within the
// decoded buffer.
class Utf8Error : public ValidationError {
 public:
  Utf8Error(const std::string& what, std::size_t byte_offset)
      : ValidationError(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Decodes UTF-8 bytes into Unicode scalar values. Rejects overlong forms,
// surrogates and values above U+10FFFF.
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view chars);
std::string utf8_encode(char32_t c);

// Number of scalar values in a valid UTF-8 string.
std::size_t utf8_length(std::string_view bytes);

// Unicode White_Space property (word separators in segmented text).
bool is_unicode_space(char32_t c);

}  // namespace segdiag
