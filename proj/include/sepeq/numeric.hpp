#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "sepeq/rational.hpp"

namespace sepeq {

// RAII arbitrary-precision real (MPFR, round-to-nearest throughout).
class MpReal {
 public:
  explicit MpReal(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }
  MpReal(const MpReal& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_swap(x_, o.x_); }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) { mpfr_set_prec(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept { mpfr_swap(x_, o.x_); return *this; }
  ~MpReal() { mpfr_clear(x_); }

  static MpReal from_mpq(const mpq_class& q, mpfr_prec_t prec) {
    MpReal r(prec);
    mpfr_set_q(r.x_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  static MpReal from_double(double d, mpfr_prec_t prec) {
    MpReal r(prec);
    mpfr_set_d(r.x_, d, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
  mpfr_ptr raw() { return x_; }
  mpfr_srcptr raw() const { return x_; }

  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  bool is_nan() const { return mpfr_nan_p(x_) != 0; }
  int sign() const { return mpfr_sgn(x_); }
  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

  friend MpReal operator+(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN); return r; }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN); return r; }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN); return r; }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { MpReal r(std::max(a.prec(), b.prec())); mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN); return r; }
  MpReal operator-() const { MpReal r(prec()); mpfr_neg(r.x_, x_, MPFR_RNDN); return r; }

  bool operator<(const MpReal& o) const { return mpfr_cmp(x_, o.x_) < 0; }
  bool operator>(const MpReal& o) const { return mpfr_cmp(x_, o.x_) > 0; }
  bool operator<=(const MpReal& o) const { return mpfr_cmp(x_, o.x_) <= 0; }

  MpReal abs() const { MpReal r(prec()); mpfr_abs(r.x_, x_, MPFR_RNDN); return r; }
  MpReal sqrt() const { MpReal r(prec()); mpfr_sqrt(r.x_, x_, MPFR_RNDN); return r; }

  // Scientific notation with `digits` significant digits; deterministic.
  std::string str(int digits = 24) const;

 private:
  mpfr_t x_;
};

// Complex number over MpReal.
class MpComplex {
 public:
  MpComplex() : re_(128), im_(128) {}
  explicit MpComplex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
  MpComplex(MpReal re, MpReal im) : re_(std::move(re)), im_(std::move(im)) {}

  static MpComplex from_gq(const GQ& q, mpfr_prec_t prec) {
    return MpComplex(MpReal::from_mpq(q.re, prec), MpReal::from_mpq(q.im, prec));
  }
  static MpComplex from_double(double re, double im, mpfr_prec_t prec) {
    return MpComplex(MpReal::from_double(re, prec), MpReal::from_double(im, prec));
  }

  const MpReal& re() const { return re_; }
  const MpReal& im() const { return im_; }
  mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }
  bool is_nan() const { return re_.is_nan() || im_.is_nan(); }

  friend MpComplex operator+(const MpComplex& a, const MpComplex& b) { return MpComplex(a.re_ + b.re_, a.im_ + b.im_); }
  friend MpComplex operator-(const MpComplex& a, const MpComplex& b) { return MpComplex(a.re_ - b.re_, a.im_ - b.im_); }
  friend MpComplex operator*(const MpComplex& a, const MpComplex& b) {
    return MpComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend MpComplex operator/(const MpComplex& a, const MpComplex& b);
  MpComplex operator-() const { return MpComplex(-re_, -im_); }

  // |z| (exact hypot at working precision).
  MpReal abs() const;
  // Principal square root.
  MpComplex sqrt() const;
  // exp(z) = e^re (cos im + i sin im).
  MpComplex exp() const;
  // Integer power by squaring (negative allowed).
  MpComplex pow(long k) const;

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  std::string str(int digits = 24) const { return re_.str(digits) + " " + im_.str(digits); }

 private:
  MpReal re_, im_;
};

}  // namespace sepeq
