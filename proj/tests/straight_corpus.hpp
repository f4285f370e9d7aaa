#pragma once

#include <string>
#include <vector>

#include "gcae/corpus.hpp"

namespace straight {

// Methods built only from declarations, assignments, arithmetic and calls to
// other methods: no branch, loop, return or self-call tokens.
inline std::vector<gcae::corpus::MethodText> methods(std::size_t count) {
  static const char* const kStatements[] = {
      "int c = a + b ;",  "c = c * 2 ;",          "a = b - c ;",
      "print ( c ) ;",    "b += a ;",             "long d = a * b + c ;",
      "c = ( a + b ) / 3 ;", "log ( a , b ) ;",   "a ++ ;",
      "boolean e = a < b ;", "String s = \"x\" ;", "c = a % 5 ;",
  };
  constexpr std::size_t kCount = sizeof kStatements / sizeof kStatements[0];
  std::vector<gcae::corpus::MethodText> out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::string name = "step" + std::to_string(k);
    std::string body = "void " + name + " ( int a , int b ) { int c = 0 ; ";
    const std::size_t length = 2 + k % 5;
    for (std::size_t s = 0; s < length; ++s) body += kStatements[(k * 7 + s * 5) % kCount] + std::string(" ");
    body += "}";
    out.push_back({name, body, "straight:" + std::to_string(k)});
  }
  return out;
}

}  // namespace straight
