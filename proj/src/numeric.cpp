#include "sepeq/numeric.hpp"

#include <cstdio>
#include <vector>

namespace sepeq {

std::string MpReal::str(int digits) const {
  if (mpfr_nan_p(x_)) return "nan";
  if (mpfr_inf_p(x_)) return mpfr_sgn(x_) > 0 ? "inf" : "-inf";
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%dRe", digits - 1);
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), fmt, x_);
  return std::string(buf.data());
}

MpComplex operator/(const MpComplex& a, const MpComplex& b) {
  MpReal n2 = b.re_ * b.re_ + b.im_ * b.im_;
  return MpComplex((a.re_ * b.re_ + a.im_ * b.im_) / n2,
                   (a.im_ * b.re_ - a.re_ * b.im_) / n2);
}

MpReal MpComplex::abs() const {
  MpReal r(prec());
  mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
  return r;
}

MpComplex MpComplex::sqrt() const {
  mpfr_prec_t p = prec();
  if (im_.is_zero()) {
    if (re_.sign() >= 0) return MpComplex(re_.sqrt(), MpReal(p));
    MpReal r(p);
    mpfr_neg(r.raw(), re_.raw(), MPFR_RNDN);
    return MpComplex(MpReal(p), r.sqrt());
  }
  // t = sqrt((|z| + |re|)/2); branch chosen so that Re(sqrt) >= 0.
  MpReal az = abs();
  MpReal are = re_.abs();
  MpReal two = MpReal::from_double(2.0, p);
  MpReal t = ((az + are) / two).sqrt();
  MpReal half_im = im_ / (two * t);
  if (re_.sign() >= 0) return MpComplex(t, half_im);
  MpReal rr = im_.abs() / (two * t);
  MpReal ii = im_.sign() >= 0 ? t : -t;
  return MpComplex(rr, ii);
}

MpComplex MpComplex::exp() const {
  mpfr_prec_t p = prec();
  MpReal er(p), c(p), s(p);
  mpfr_exp(er.raw(), re_.raw(), MPFR_RNDN);
  mpfr_sin_cos(s.raw(), c.raw(), im_.raw(), MPFR_RNDN);
  return MpComplex(er * c, er * s);
}

MpComplex MpComplex::pow(long k) const {
  if (k == 0) return MpComplex::from_double(1.0, 0.0, prec());
  bool neg = k < 0;
  unsigned long e = neg ? (unsigned long)(-k) : (unsigned long)k;
  MpComplex base = *this;
  MpComplex acc = MpComplex::from_double(1.0, 0.0, prec());
  while (e > 0) {
    if (e & 1ul) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  if (neg) return MpComplex::from_double(1.0, 0.0, prec()) / acc;
  return acc;
}

GQ gq_from_decimal(const std::string& s) {
  std::string t = s;
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  if (t.empty()) throw std::invalid_argument("empty numeric literal");
  auto dot = t.find('.');
  mpq_class q;
  if (dot == std::string::npos) {
    if (t.find('/') != std::string::npos) {
      q = mpq_class(t);
      q.canonicalize();
    } else {
      q = mpq_class(mpz_class(t, 10));
    }
  } else {
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (ip.empty()) ip = "0";
    mpz_class num(ip + fp, 10);
    mpz_class den(1);
    for (std::size_t k = 0; k < fp.size(); ++k) den *= 10;
    q = mpq_class(num, den);
    q.canonicalize();
  }
  if (neg) q = -q;
  return GQ(q);
}

std::size_t gq_hash(const GQ& v) {
  auto h = [](const mpq_class& q) {
    std::size_t acc = 1469598103934665603ull;
    auto mix = [&acc](const mpz_class& z) {
      std::size_t s = mpz_fdiv_ui(z.get_mpz_t(), 1000000007ul);
      if (mpz_sgn(z.get_mpz_t()) < 0) s = ~s;
      acc = (acc ^ s) * 1099511628211ull;
    };
    mix(q.get_num());
    mix(q.get_den());
    return acc;
  };
  return h(v.re) * 31 + h(v.im);
}

}  // namespace sepeq
