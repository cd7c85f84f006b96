// Library walk-through: parse a 1-form, take d, and check Stokes on one microcube.

#include <iostream>

#include "nilforms/nilforms.hpp"

int main() {
  using namespace nilforms;

  DifferentialForm w = parse_form("-y*dx + x*dy + x*y*z*dz", 3).form;
  DifferentialForm dw = d_formula(w);
  std::cout << "w  = " << to_string(w) << "\n";
  std::cout << "dw = " << to_string(dw) << "\n";

  Vector<Rational> base{1, Rational(1, 2), -2};
  std::vector<Vector<Rational>> tangents{{1, 2, 0}, {0, 1, 3}};
  auto report = verify<Rational>(w, base, tangents);
  std::cout << "boundary integral: " << report.lhs << "\n";
  std::cout << "integral of dw:    " << report.rhs << "\n";
  std::cout << (report.pass ? "equal" : "different") << "\n";

  std::cout << "curl(-y, x, 0) = " << to_string(curl(VectorField3{{parse_scalar("-y", 3), parse_scalar("x", 3), parse_scalar("0", 3)}}))
            << "\n";
  return report.pass ? 0 : 1;
}
