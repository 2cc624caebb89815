#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sepeq {

// Exact complex rational a + b*i with arbitrary-precision components.
struct GQ {
  mpq_class re, im;

  GQ() : re(0), im(0) {}
  GQ(long r) : re(r), im(0) {}
  GQ(long num, long den) : re(num, den), im(0) { re.canonicalize(); }
  GQ(const mpq_class& r) : re(r), im(0) {}
  GQ(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

  static GQ i() { return GQ(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  GQ operator-() const { return GQ(-re, -im); }
  GQ operator+(const GQ& o) const { return GQ(re + o.re, im + o.im); }
  GQ operator-(const GQ& o) const { return GQ(re - o.re, im - o.im); }
  GQ operator*(const GQ& o) const {
    return GQ(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  GQ operator/(const GQ& o) const {
    mpq_class n2 = o.re * o.re + o.im * o.im;
    if (n2 == 0) throw std::domain_error("GQ: division by zero");
    return GQ((re * o.re + im * o.im) / n2, (im * o.re - re * o.im) / n2);
  }
  GQ& operator+=(const GQ& o) { re += o.re; im += o.im; return *this; }
  GQ& operator-=(const GQ& o) { re -= o.re; im -= o.im; return *this; }
  GQ& operator*=(const GQ& o) { *this = *this * o; return *this; }
  GQ& operator/=(const GQ& o) { *this = *this / o; return *this; }

  bool operator==(const GQ& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GQ& o) const { return !(*this == o); }

  GQ pow(long k) const {
    if (k == 0) return GQ(1);
    if (k < 0) return GQ(1) / pow(-k);
    GQ base = *this, acc(1);
    long e = k;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  // norm^2 = a^2 + b^2 (a rational; used for magnitude comparisons).
  mpq_class norm2() const { return re * re + im * im; }

  std::string str() const {
    if (im == 0) return re.get_str();
    if (re == 0) return im.get_str() + "*i";
    std::string s = re.get_str();
    if (im > 0) s += "+";
    return s + im.get_str() + "*i";
  }
};

inline GQ operator*(long a, const GQ& b) { return GQ(a) * b; }
inline GQ operator+(long a, const GQ& b) { return GQ(a) + b; }
inline GQ operator-(long a, const GQ& b) { return GQ(a) - b; }

// Parses "n", "n/d", decimal "0.25", with optional leading '-'.
// Pure-imaginary / complex literals are handled by the expression parser.
GQ gq_from_decimal(const std::string& s);

std::size_t gq_hash(const GQ& v);

}  // namespace sepeq
