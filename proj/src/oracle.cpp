#include "mhf/oracle.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace mhf {

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

Bytes from_hex(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("hex string of odd length");
  auto digit = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(digit(hex[2 * i]) << 4 | digit(hex[2 * i + 1]));
  return out;
}

Oracle::Oracle(OracleConfig cfg) : cfg_(std::move(cfg)) {
  const EVP_MD* md = EVP_get_digestbyname(cfg_.hash.c_str());
  if (!md) throw std::invalid_argument("unknown hash '" + cfg_.hash + "'");
  if (cfg_.w == 0 || cfg_.w % 8) throw std::invalid_argument("w must be a positive multiple of 8");
  xof_ = (EVP_MD_get_flags(md) & EVP_MD_FLAG_XOF) != 0;
  if (!xof_ && cfg_.w > 8 * static_cast<std::size_t>(EVP_MD_get_size(md))) {
    throw std::invalid_argument("w=" + std::to_string(cfg_.w) + " exceeds the output of " + cfg_.hash);
  }
  md_ = md;
}

Bytes Oracle::operator()(std::span<const std::uint8_t> query) const {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md_, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), query.data(), query.size()) != 1) {
    throw std::runtime_error("digest failure in " + cfg_.hash);
  }
  Bytes out;
  if (xof_) {
    out.resize(label_bytes());
    if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) throw std::runtime_error("XOF failure");
    return out;
  }
  out.resize(EVP_MAX_MD_SIZE);
  unsigned len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1) throw std::runtime_error("digest failure");
  out.resize(label_bytes());
  return out;
}

}  // namespace mhf
