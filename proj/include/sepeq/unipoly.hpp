#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "sepeq/numeric.hpp"
#include "sepeq/rational.hpp"

namespace sepeq {

// Dense univariate polynomial over the Gaussian rationals, coefficient order
// c[0] + c[1] x + c[2] x^2 + ...
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<GQ> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly constant(const GQ& v) { return UniPoly({v}); }
  static UniPoly x() { return UniPoly({GQ(0), GQ(1)}); }

  const std::vector<GQ>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const GQ& coeff(int k) const {
    static const GQ kZero;
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : kZero;
  }
  GQ lead() const { return c_.empty() ? GQ(0) : c_.back(); }

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator-() const;
  UniPoly scaled(const GQ& s) const;
  UniPoly shifted(int k) const;  // multiply by x^k

  // Euclidean division (GQ is a field): *this = q*d + r with deg r < deg d.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  GQ eval(const GQ& x) const;
  MpComplex eval(const MpComplex& x) const;

  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  std::string str(const std::string& var = "x") const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<GQ> c_;
};

UniPoly gcd(const UniPoly& a, const UniPoly& b);  // monic gcd

// Squarefree decomposition: returns [(factor, multiplicity)] with factors
// monic, squarefree, pairwise coprime, and product(factor^multiplicity)
// equal to the monic part of the input.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p);

// Multiplicity of x0 as a root (0 if not a root).
int root_multiplicity(const UniPoly& p, const GQ& x0);

// --- Real-root machinery (requires all coefficients real) ---

bool all_real_coeffs(const UniPoly& p);

// Number of distinct real roots in (a, b] via Sturm's theorem.
int sturm_count(const std::vector<UniPoly>& chain, const mpq_class& a, const mpq_class& b);
std::vector<UniPoly> sturm_chain(const UniPoly& p);

// All distinct real roots, each to |error| < 2^-bits, ascending.
std::vector<MpReal> real_roots(const UniPoly& p, mpfr_prec_t bits = 128);

// All complex roots (with multiplicity) by the Durand-Kerner iteration.
std::vector<MpComplex> complex_roots(const UniPoly& p, mpfr_prec_t prec = 128);

// --- Rational-function reconstruction ---

// Recovers f = num/den (den monic, coprime) in one variable from an exact
// black-box evaluator.  `probe(x)` returns f(x) or nullopt at a pole/unlucky
// point.  Degrees are grown from the hints until dn+dd+8 fresh verification
// points all agree.  Throws if nothing fits below the caps.
struct RationalFunction {
  UniPoly num, den;
  GQ eval(const GQ& x) const;
};
RationalFunction reconstruct_rational(
    const std::function<std::optional<GQ>(const GQ&)>& probe, int deg_num_hint, int deg_den_hint,
    int deg_cap, std::uint64_t seed);

}  // namespace sepeq
