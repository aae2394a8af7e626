#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace jdtest {

// Random expression over coordinates x, y, z built from the full grammar;
// log and sqrt only see positive arguments and division only 1 + square.
inline std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 10);
  std::uniform_int_distribution<int> var(0, 2);
  std::uniform_real_distribution<double> lit(-2.0, 2.0);
  const char* names[] = {"x", "y", "z"};
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick(rng)) {
    case 0:
    case 1: return names[var(rng)];
    case 2: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", std::abs(lit(rng)));
      return buf;
    }
    case 3: return "(" + sub() + " + " + sub() + ")";
    case 4: return "(" + sub() + " - " + sub() + ")";
    case 5: return "(" + sub() + ")*(" + sub() + ")";
    case 6: return "sin(" + sub() + ")";
    case 7: return "cos(" + sub() + ")";
    case 8: return "exp((" + sub() + ")/3)";
    case 9: return "(" + sub() + ")/(1 + (" + sub() + ")^2)";
    default: return "log(2 + sin(" + sub() + "))";
  }
}

}  // namespace jdtest
