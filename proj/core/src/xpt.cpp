#include "copent/xpt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>

#include "copent/error.hpp"

namespace copent {

namespace {

constexpr std::size_t kRecord = 80;

constexpr std::string_view kLibraryHeader =
    "HEADER RECORD*******LIBRARY HEADER RECORD!!!!!!!000000000000000000000000000000";
constexpr std::string_view kLibraryV8Header = "HEADER RECORD*******LIBV8   HEADER RECORD!!!!!!!";
constexpr std::string_view kMemberHeader = "HEADER RECORD*******MEMBER  HEADER RECORD!!!!!!!";
constexpr std::string_view kDescriptorHeader = "HEADER RECORD*******DSCRPTR HEADER RECORD!!!!!!!";
constexpr std::string_view kNamestrHeader = "HEADER RECORD*******NAMESTR HEADER RECORD!!!!!!!";
constexpr std::string_view kObsHeader = "HEADER RECORD*******OBS     HEADER RECORD!!!!!!!";

std::string_view text_at(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t len) {
  return {reinterpret_cast<const char*>(bytes.data()) + offset, len};
}

std::string rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\0')) s.remove_suffix(1);
  return std::string(s);
}

std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::size_t parse_digits(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error("xpt: malformed " + std::string(what) + " field '" + std::string(s) + "'");
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

void expect_record(std::span<const std::uint8_t> bytes, std::size_t offset, std::string_view prefix,
                   std::string_view what) {
  if (offset + kRecord > bytes.size())
    throw Error("xpt: truncated file, missing " + std::string(what) + " header");
  if (text_at(bytes, offset, prefix.size()) != prefix)
    throw Error("xpt: expected " + std::string(what) + " header at byte " + std::to_string(offset));
}

bool all_blank(std::span<const std::uint8_t> b) {
  return std::all_of(b.begin(), b.end(), [](std::uint8_t c) { return c == ' '; });
}

}  // namespace

std::optional<double> ibm_to_ieee(std::span<const std::uint8_t, 8> bytes) {
  const std::uint8_t first = bytes[0];
  const bool tail_zero = std::all_of(bytes.begin() + 1, bytes.end(), [](std::uint8_t b) { return b == 0; });
  if (tail_zero && (first == '.' || first == '_' || (first >= 'A' && first <= 'Z'))) return std::nullopt;

  std::uint64_t bits = 0;
  for (std::uint8_t b : bytes) bits = (bits << 8) | b;

  const bool negative = (bits >> 63) != 0;
  const int exponent = static_cast<int>((bits >> 56) & 0x7F) - 64;
  std::uint64_t fraction = bits & 0x00FF'FFFF'FFFF'FFFFull;
  if (fraction == 0) return negative ? -0.0 : 0.0;

  // value = fraction * 2^-56 * 16^exponent; keep at most 53 significant bits.
  int scale = 4 * exponent - 56;
  const int width = std::bit_width(fraction);
  if (width > 53) {
    fraction >>= (width - 53);
    scale += width - 53;
  }
  const double magnitude = std::ldexp(static_cast<double>(fraction), scale);
  return negative ? -magnitude : magnitude;
}

std::optional<double> ibm_to_ieee(std::span<const std::uint8_t> bytes) {
  if (bytes.empty() || bytes.size() > 8) throw Error("xpt: numeric length must be 1-8 bytes");
  std::array<std::uint8_t, 8> full{};
  std::copy(bytes.begin(), bytes.end(), full.begin());
  return ibm_to_ieee(std::span<const std::uint8_t, 8>(full));
}

XptMember parse_xpt(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRecord) throw Error("xpt: bad signature (file shorter than one header record)");
  if (text_at(bytes, 0, kLibraryV8Header.size()) == kLibraryV8Header)
    throw Error("xpt: XPORT v8/v9 libraries are not supported (v5 only)");
  if (text_at(bytes, 0, kLibraryHeader.size()) != kLibraryHeader)
    throw Error("xpt: bad signature (not a SAS XPORT v5 library)");

  // Library header, two real-header records, then the first member.
  std::size_t off = 3 * kRecord;
  expect_record(bytes, off, kMemberHeader, "MEMBER");
  const std::size_t descriptor_size = parse_digits(text_at(bytes, off + 74, 4), "descriptor size");
  if (descriptor_size != 140 && descriptor_size != 136)
    throw Error("xpt: unsupported namestr size " + std::to_string(descriptor_size));
  off += kRecord;
  expect_record(bytes, off, kDescriptorHeader, "DSCRPTR");
  off += kRecord;
  if (off + 2 * kRecord > bytes.size()) throw Error("xpt: truncated member descriptor");

  XptMember member;
  member.name = rtrim(text_at(bytes, off + 8, 8));
  off += 2 * kRecord;

  expect_record(bytes, off, kNamestrHeader, "NAMESTR");
  const std::size_t n_vars = parse_digits(text_at(bytes, off + 54, 4), "variable count");
  off += kRecord;

  const std::size_t namestr_bytes = n_vars * descriptor_size;
  const std::size_t namestr_padded = (namestr_bytes + kRecord - 1) / kRecord * kRecord;
  if (off + namestr_padded > bytes.size()) throw Error("xpt: truncated variable descriptors");
  std::size_t stride = 0;
  for (std::size_t v = 0; v < n_vars; ++v) {
    auto d = bytes.subspan(off + v * descriptor_size, descriptor_size);
    XptVariable var;
    const std::uint16_t type = be16(d, 0);
    if (type != 1 && type != 2) throw Error("xpt: variable " + std::to_string(v + 1) + " has unknown type");
    var.numeric = type == 1;
    var.length = be16(d, 4);
    var.name = rtrim(text_at(d, 8, 8));
    var.label = rtrim(text_at(d, 16, 40));
    var.position = be32(d, 84);
    if (var.length == 0) throw Error("xpt: variable '" + var.name + "' has zero length");
    if (var.numeric && (var.length < 2 || var.length > 8))
      throw Error("xpt: numeric variable '" + var.name + "' has invalid length " + std::to_string(var.length));
    if (var.position != stride)
      throw Error("xpt: descriptor/stride mismatch at variable '" + var.name + "' (position " +
                  std::to_string(var.position) + ", expected " + std::to_string(stride) + ")");
    stride += var.length;
    member.variables.push_back(std::move(var));
  }
  off += namestr_padded;

  expect_record(bytes, off, kObsHeader, "OBS");
  off += kRecord;

  // Observations run to the next member header or end of file.
  std::size_t end = bytes.size();
  for (std::size_t p = off; p + kRecord <= bytes.size(); p += kRecord) {
    if (text_at(bytes, p, kMemberHeader.size()) == kMemberHeader) {
      end = p;
      break;
    }
  }
  auto payload = bytes.subspan(off, end - off);

  std::size_t n_obs = 0;
  if (stride > 0) {
    n_obs = payload.size() / stride;
    if (!all_blank(payload.subspan(n_obs * stride))) throw Error("xpt: truncated observation record");
    // Blank rows starting inside the final 80-byte record are padding.
    while (n_obs > 0 && (n_obs - 1) * stride + kRecord > payload.size() &&
           all_blank(payload.subspan((n_obs - 1) * stride, stride)))
      --n_obs;
  } else if (!all_blank(payload)) {
    throw Error("xpt: observations present for a member without variables");
  }

  std::vector<Column> columns;
  columns.reserve(member.variables.size());
  for (const XptVariable& var : member.variables) {
    Column col{var.name, std::vector<double>(n_obs), std::vector<bool>(n_obs, true)};
    if (var.numeric) {
      for (std::size_t r = 0; r < n_obs; ++r) {
        auto v = ibm_to_ieee(payload.subspan(r * stride + var.position, var.length));
        if (v) {
          col.values[r] = *v;
          col.missing[r] = false;
        }
      }
    } else {
      member.warnings.push_back("character variable '" + var.name + "' loaded as a missing column");
    }
    columns.push_back(std::move(col));
  }
  member.data = Dataset(std::move(columns), n_obs);
  return member;
}

XptMember read_xpt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_xpt(bytes);
}

}  // namespace copent
