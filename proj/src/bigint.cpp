#include "aggsim/bigint.hpp"

#include <boost/integer/mod_inverse.hpp>

#include <cctype>

#include "aggsim/errors.hpp"
#include "aggsim/random_source.hpp"

namespace aggsim {

BigInt mod_exp(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
  if (modulus < 2) throw InvalidParams("mod_exp: modulus must be >= 2");
  if (exponent < 0) throw InvalidParams("mod_exp: negative exponent");
  BigInt b = base % modulus;
  if (b < 0) b += modulus;
  return boost::multiprecision::powm(b, exponent, modulus);
}

BigInt mod_inverse(const BigInt& a, const BigInt& modulus) {
  if (modulus < 2) throw InvalidParams("mod_inverse: modulus must be >= 2");
  BigInt r = a % modulus;
  if (r < 0) r += modulus;
  BigInt inv = boost::integer::mod_inverse(r, modulus);
  if (inv == 0) throw NotInvertible("mod_inverse: gcd(a, modulus) != 1");
  return inv;
}

namespace {

// One Miller-Rabin round for witness a; n odd, n-1 = d * 2^s.
bool mr_round(const BigInt& n, const BigInt& a, const BigInt& d, unsigned s) {
  BigInt x = mod_exp(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_probable_prime(const BigInt& n, RandomSource& rng, int rounds) {
  if (n < 2) return false;
  for (int small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == small) return true;
    if (n % small == 0) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (int i = 0; i < rounds; ++i) {
    BigInt a = 2 + rng.uniform_below(n - 3);  // witness in [2, n-2]
    if (!mr_round(n, a, d, s)) return false;
  }
  return true;
}

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(v) + 1;
}

std::vector<std::uint8_t> to_bytes(const BigInt& v) {
  if (v < 0) throw InvalidParams("to_bytes: negative value");
  std::vector<std::uint8_t> out((bit_length(v) + 7) / 8);
  BigInt x = v;
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<std::uint8_t>(x & 0xff);
    x >>= 8;
  }
  return out;
}

BigInt from_bytes(std::span<const std::uint8_t> bytes) {
  BigInt v = 0;
  for (std::uint8_t b : bytes) {
    v <<= 8;
    v |= b;
  }
  return v;
}

std::string to_hex(const BigInt& v) {
  if (v < 0) throw InvalidParams("to_hex: negative value");
  if (v == 0) return "0";
  static const char digits[] = "0123456789abcdef";
  std::string out;
  BigInt x = v;
  while (x != 0) {
    out.push_back(digits[static_cast<unsigned>(x & 0xf)]);
    x >>= 4;
  }
  return {out.rbegin(), out.rend()};
}

BigInt from_hex(const std::string& s) {
  if (s.empty()) throw ParseError("from_hex: empty string");
  BigInt v = 0;
  for (char c : s) {
    int digit;
    if (c >= '0' && c <= '9')
      digit = c - '0';
    else if (c >= 'a' && c <= 'f')
      digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      digit = c - 'A' + 10;
    else
      throw ParseError(std::string("from_hex: bad digit '") + c + "'");
    v = (v << 4) | digit;
  }
  return v;
}

}  // namespace aggsim
