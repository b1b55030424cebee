#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

struct evp_md_st;

namespace mhf {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws std::invalid_argument on odd length or a non-hex digit.
Bytes from_hex(const std::string& hex);

struct OracleConfig {
  std::size_t w = 256;          ///< label length in bits
  std::string hash = "SHA256";  ///< OpenSSL digest name
};

/// H : {0,1}* -> {0,1}^w, the named digest truncated to w bits. XOF digests
/// (SHAKE128/256) are squeezed to exactly w bits.
class Oracle {
 public:
  /// Throws std::invalid_argument for an unknown digest, w not a positive
  /// multiple of 8, or w longer than a fixed-length digest.
  explicit Oracle(OracleConfig cfg);

  Bytes operator()(std::span<const std::uint8_t> query) const;
  const OracleConfig& config() const { return cfg_; }
  std::size_t label_bytes() const { return cfg_.w / 8; }

 private:
  OracleConfig cfg_;
  const evp_md_st* md_;
  bool xof_;
};

}  // namespace mhf
