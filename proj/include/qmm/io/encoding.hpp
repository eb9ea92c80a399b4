#pragma once

// Base64 and SHA-256 backed by OpenSSL, plus the binary64 matrix payload.

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <string>
#include <vector>

#include "qmm/core/types.hpp"

namespace qmm::io {

static_assert(std::endian::native == std::endian::little, "payload codec assumes a little-endian host");

inline std::string base64_encode(const std::vector<unsigned char>& bytes) {
  if (bytes.empty()) return {};
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

/// Strict decoding: the input must be canonical padded base64 without whitespace.
inline std::vector<unsigned char> base64_decode(const std::string& text) {
  if (text.empty()) return {};
  if (text.size() % 4 != 0) throw FormatError("base64: length is not a multiple of 4");
  std::vector<unsigned char> out(text.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw FormatError("base64: invalid character");
  std::size_t pad = 0;
  if (text.back() == '=') ++pad;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  if (base64_encode(out) != text) throw FormatError("base64: non-canonical encoding");
  return out;
}

inline std::string sha256_hex(const void* data, std::size_t size) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data, size, md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

inline std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

inline constexpr std::string_view kMatrixEncoding = "c128le-base64";

/// Row-major (re, im) binary64 pairs, little-endian, base64.
inline std::string encode_matrix(const Matrix& m) {
  std::vector<unsigned char> bytes(static_cast<std::size_t>(m.size()) * 16);
  unsigned char* p = bytes.data();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real();
      const double im = m(r, c).imag();
      std::memcpy(p, &re, 8);
      std::memcpy(p + 8, &im, 8);
      p += 16;
    }
  return base64_encode(bytes);
}

inline Matrix decode_matrix(const std::string& payload, Index dim) {
  const std::vector<unsigned char> bytes = base64_decode(payload);
  if (bytes.size() != static_cast<std::size_t>(dim * dim) * 16)
    throw FormatError(fmt::format("payload holds {} bytes, expected {} for a {}x{} matrix", bytes.size(),
                                  dim * dim * 16, dim, dim));
  Matrix m(dim, dim);
  const unsigned char* p = bytes.data();
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) {
      double re = 0.0;
      double im = 0.0;
      std::memcpy(&re, p, 8);
      std::memcpy(&im, p + 8, 8);
      m(r, c) = Complex(re, im);
      p += 16;
    }
  return m;
}

}  // namespace qmm::io
