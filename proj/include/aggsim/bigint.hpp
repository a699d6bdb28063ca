#ifndef AGGSIM_BIGINT_HPP
#define AGGSIM_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aggsim {

using BigInt = boost::multiprecision::cpp_int;

class RandomSource;

/// base^exponent mod modulus by square-and-multiply. Requires modulus >= 2
/// and exponent >= 0.
BigInt mod_exp(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

/// Multiplicative inverse of a mod modulus (extended Euclid).
/// Throws NotInvertible when gcd(a, modulus) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& modulus);

/// Miller-Rabin with `rounds` bases drawn from rng.
bool is_probable_prime(const BigInt& n, RandomSource& rng, int rounds = 64);

// Number of bits in the magnitude; 0 for 0.
std::size_t bit_length(const BigInt& v);

// Big-endian magnitude bytes with no leading zero byte; 0 encodes empty.
std::vector<std::uint8_t> to_bytes(const BigInt& v);
BigInt from_bytes(std::span<const std::uint8_t> bytes);

// Lowercase hex, no leading zeros, "0" for zero.
std::string to_hex(const BigInt& v);
BigInt from_hex(const std::string& s);

}  // namespace aggsim

#endif
