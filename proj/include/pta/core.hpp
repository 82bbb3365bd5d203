#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pta {

// Exact rational scalar used for all time quantities and solver arithmetic.
// No floating point anywhere: guard checks at boundary values (x == 3*p2)
// must be decided exactly.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class Rel { Lt, Le, Gt, Ge };

const char* rel_symbol(Rel r);
Rel parse_rel(const std::string& s);  // throws std::invalid_argument
Rel rel_flip(Rel r);                  // effect of negating both sides
bool rel_is_strict(Rel r);
bool rel_holds(const Rat& lhs, Rel r, const Rat& rhs);

std::string rat_to_string(const Rat& q);
// Accepts "3", "-7", "15/2". Throws FormatError on anything else.
Rat rat_from_string(const std::string& s);

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg), line(line_), column(column_) {}
};

struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed strategy or trace files.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pta
