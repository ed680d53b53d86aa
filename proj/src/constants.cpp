#include <stdexcept>

#include "sct/geometry.hpp"

namespace sct {

GeometryConstants constants(const Rational& epsilon, const Rational& p, const Rational& delta, const Rational& L_S) {
  if (epsilon < 0) throw std::invalid_argument("constants: epsilon must be >= 0");
  if (p < 1) throw std::invalid_argument("constants: p must be >= 1");
  if (delta <= 0) throw std::invalid_argument("constants: delta must be positive");
  if (L_S < 500) throw std::invalid_argument("constants: L_S must be at least 500");
  GeometryConstants c;
  c.epsilon = epsilon;
  c.p = p;
  c.delta = delta;
  c.L_S = L_S;
  c.L = 18 * epsilon + 25;
  Rational b = 9 * epsilon + 4;
  c.N = b * b * b * (8 * p + 100);
  c.inj_lower = delta / c.N;
  c.nu_upper = c.N * (2 + c.L / delta);
  c.A_upper = 10 * L_S * L_S * c.N * c.N * c.N * (c.L + 5 * delta);
  c.notes.push_back("L_S is a configuration parameter: only a lower bound of 500 and a stability inequality are known");
  c.notes.push_back("e(G,X), n_p and N_1 have no closed form and are left symbolic");
  return c;
}

std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  auto d = denominator(r);
  if (d == 1) return numerator(r).str();
  return numerator(r).str() + "/" + d.str();
}

nlohmann::json to_json(const GeometryConstants& c) {
  return {{"epsilon", to_string(c.epsilon)},
          {"p", to_string(c.p)},
          {"delta", to_string(c.delta)},
          {"L_S", to_string(c.L_S)},
          {"L", to_string(c.L)},
          {"N", to_string(c.N)},
          {"inj_lower", to_string(c.inj_lower)},
          {"nu_upper", to_string(c.nu_upper)},
          {"A_upper", to_string(c.A_upper)},
          {"e", "symbolic"},
          {"n_p", "symbolic"},
          {"notes", c.notes}};
}

}  // namespace sct
