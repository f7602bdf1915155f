#include "qpigeon/report.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <system_error>

namespace qpigeon {

void Report::add(CheckResult check) {
  pass = pass && check.pass;
  checks.push_back(std::move(check));
}

std::string format_real(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_value(double value) {
  if (value == 0.0) return "0";  // fold -0.0 into 0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_complex(Complex value) {
  std::string out = format_value(value.real());
  const double im = value.imag();
  out += im == 0.0 || !std::signbit(im) ? '+' : '-';
  out += format_value(std::abs(im));
  out += 'i';
  return out;
}

CheckResult make_check(std::string name, double expected, double actual,
                       double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.expected = format_value(expected);
  c.actual = format_value(actual);
  c.tolerance = tolerance;
  c.pass = std::abs(expected - actual) <= tolerance;
  return c;
}

CheckResult make_check(std::string name, Complex expected, Complex actual,
                       double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.expected = format_complex(expected);
  c.actual = format_complex(actual);
  c.tolerance = tolerance;
  c.pass = std::abs(expected - actual) <= tolerance;
  return c;
}

}  // namespace qpigeon
