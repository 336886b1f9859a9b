#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copent/dataset.hpp"

namespace copent {

// Decodes an IBM System/360 hexadecimal double (big-endian): sign bit,
// 7-bit base-16 exponent biased by 64, 56-bit fraction. Returns nullopt for
// SAS missing codes ('.', '_' or 'A'-'Z' followed by seven zero bytes).
// Fraction bits beyond the 53 an IEEE double can hold are truncated toward
// zero; every other value decodes exactly.
std::optional<double> ibm_to_ieee(std::span<const std::uint8_t, 8> bytes);

// Variant for XPORT numerics stored in fewer than 8 bytes (2..8): the
// missing low-order bytes are zero.
std::optional<double> ibm_to_ieee(std::span<const std::uint8_t> bytes);

struct XptVariable {
  std::string name;
  std::string label;
  bool numeric = true;
  std::size_t length = 0;
  std::size_t position = 0;
};

struct XptMember {
  std::string name;
  std::vector<XptVariable> variables;
  Dataset data;
  std::vector<std::string> warnings;
};

// Parses the first member of a SAS Transport (XPORT v5) library. Character
// variables become fully-missing columns and add a warning, so column
// positions stay aligned with the source file.
XptMember parse_xpt(std::span<const std::uint8_t> bytes);
XptMember read_xpt(const std::filesystem::path& path);

}  // namespace copent
