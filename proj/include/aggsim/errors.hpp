#ifndef AGGSIM_ERRORS_HPP
#define AGGSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aggsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// algebra
struct NoPrimeFound : Error {
  explicit NoPrimeFound(const std::string& what) : Error(what) {}
};
struct NotInvertible : Error {
  explicit NotInvertible(const std::string& what) : Error(what) {}
};
struct InvalidParams : Error {
  explicit InvalidParams(const std::string& what) : Error(what) {}
};

// ring / protocols
struct SubgroupViolation : Error {
  explicit SubgroupViolation(const std::string& what) : Error(what) {}
};
struct NotSetUp : Error {
  explicit NotSetUp(const std::string& what) : Error(what) {}
};
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error(what) {}
};
struct MissingCiphertext : Error {
  explicit MissingCiphertext(const std::string& what) : Error(what) {}
};
struct MalformedAggregate : Error {
  explicit MalformedAggregate(const std::string& what) : Error(what) {}
};

// polynomial orchestration
struct InsecureTerm : Error {
  explicit InsecureTerm(const std::string& what) : Error(what) {}
};
struct TooFewSumParticipants : Error {
  explicit TooFewSumParticipants(const std::string& what) : Error(what) {}
};

// simulated network
struct UnknownRecipient : Error {
  explicit UnknownRecipient(const std::string& what) : Error(what) {}
};

// file formats
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace aggsim

#endif
