#include "sepeq/unipoly.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sepeq/linalg.hpp"
#include "sepeq/rng.hpp"

namespace sepeq {

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<GQ> r(std::max(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (k < c_.size()) r[k] = r[k] + c_[k];
    if (k < o.c_.size()) r[k] = r[k] + o.c_[k];
  }
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator-() const {
  std::vector<GQ> r(c_.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = -c_[k];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly();
  std::vector<GQ> r(c_.size() + o.c_.size() - 1);
  for (std::size_t a = 0; a < c_.size(); ++a) {
    if (c_[a].is_zero()) continue;
    for (std::size_t b = 0; b < o.c_.size(); ++b) r[a + b] = r[a + b] + c_[a] * o.c_[b];
  }
  return UniPoly(std::move(r));
}

UniPoly UniPoly::scaled(const GQ& s) const {
  std::vector<GQ> r(c_.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = c_[k] * s;
  return UniPoly(std::move(r));
}

UniPoly UniPoly::shifted(int k) const {
  if (is_zero()) return UniPoly();
  std::vector<GQ> r(static_cast<std::size_t>(k), GQ(0));
  r.insert(r.end(), c_.begin(), c_.end());
  return UniPoly(std::move(r));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  UniPoly rem = *this;
  std::vector<GQ> q;
  if (degree() >= d.degree()) q.assign(static_cast<std::size_t>(degree() - d.degree()) + 1, GQ(0));
  GQ dl_inv = GQ(1) / d.lead();
  while (!rem.is_zero() && rem.degree() >= d.degree()) {
    int shift = rem.degree() - d.degree();
    GQ f = rem.lead() * dl_inv;
    q[static_cast<std::size_t>(shift)] = f;
    rem = rem - d.scaled(f).shifted(shift);
  }
  return {UniPoly(std::move(q)), rem};
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<GQ> r(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) r[k - 1] = c_[k] * GQ(static_cast<long>(k));
  return UniPoly(std::move(r));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(GQ(1) / lead());
}

GQ UniPoly::eval(const GQ& x) const {
  GQ acc;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
  return acc;
}

MpComplex UniPoly::eval(const MpComplex& x) const {
  MpComplex acc = MpComplex::from_double(0, 0, x.prec());
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + MpComplex::from_gq(c_[k], x.prec());
  return acc;
}

std::string UniPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << c_[k].str() << ")";
    if (k >= 1) os << "*" << var;
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = x.divmod(y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.monic();
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& p) {
  std::vector<std::pair<UniPoly, int>> out;
  if (p.degree() <= 0) return out;
  UniPoly f = p.monic();
  UniPoly fp = f.derivative();
  UniPoly a0 = gcd(f, fp);
  UniPoly b = f.divmod(a0).first;
  UniPoly c = fp.divmod(a0).first;
  UniPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    UniPoly ai = gcd(b, d);
    if (ai.degree() > 0) out.emplace_back(ai, i);
    b = b.divmod(ai).first;
    c = d.divmod(ai).first;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

int root_multiplicity(const UniPoly& p, const GQ& x0) {
  if (p.is_zero()) throw std::domain_error("root multiplicity of the zero polynomial");
  UniPoly lin({-x0, GQ(1)});
  UniPoly cur = p;
  int m = 0;
  while (!cur.is_zero() && cur.eval(x0).is_zero()) {
    cur = cur.divmod(lin).first;
    ++m;
  }
  return m;
}

bool all_real_coeffs(const UniPoly& p) {
  for (const auto& c : p.coeffs())
    if (c.im != 0) return false;
  return true;
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
  std::vector<UniPoly> chain;
  UniPoly sf = p.divmod(gcd(p, p.derivative())).first;  // squarefree part
  chain.push_back(sf);
  chain.push_back(sf.derivative());
  while (!chain.back().is_zero() && chain.back().degree() >= 0) {
    UniPoly r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
    if (chain.back().degree() == 0) break;
  }
  return chain;
}

namespace {

int sign_of(const mpq_class& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int sign_changes_at(const std::vector<UniPoly>& chain, const mpq_class& x) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    GQ v = p.eval(GQ(x));
    int s = sign_of(v.re);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int sturm_count(const std::vector<UniPoly>& chain, const mpq_class& a, const mpq_class& b) {
  return sign_changes_at(chain, a) - sign_changes_at(chain, b);
}

std::vector<MpReal> real_roots(const UniPoly& p, mpfr_prec_t bits) {
  std::vector<MpReal> roots;
  if (p.degree() <= 0) return roots;
  if (!all_real_coeffs(p)) throw std::domain_error("real_roots requires real coefficients");
  std::vector<UniPoly> chain = sturm_chain(p);
  const UniPoly& sf = chain[0];
  // Cauchy bound on |root|.
  mpq_class bound = 1;
  for (int k = 0; k < sf.degree(); ++k) {
    mpq_class t = abs(sf.coeff(k).re / sf.lead().re);
    if (t > bound) bound = t;
  }
  bound += 1;
  struct Interval { mpq_class a, b; int count; };
  std::vector<Interval> work{{-bound, bound, sturm_count(chain, -bound, bound)}};
  std::vector<Interval> isolated;
  while (!work.empty()) {
    Interval iv = work.back();
    work.pop_back();
    if (iv.count == 0) continue;
    if (iv.count == 1) { isolated.push_back(iv); continue; }
    mpq_class mid = (iv.a + iv.b) / 2;
    int left = sturm_count(chain, iv.a, mid);
    work.push_back({iv.a, mid, left});
    work.push_back({mid, iv.b, iv.count - left});
  }
  // Bisect each isolated interval down to the requested width. Sturm counts
  // (a, b], so the root stays in whichever half still reports count 1.
  mpq_class width_target = mpq_class(1);
  for (mpfr_prec_t k = 0; k < bits; ++k) width_target /= 2;
  for (auto& iv : isolated) {
    while (iv.b - iv.a > width_target) {
      mpq_class mid = (iv.a + iv.b) / 2;
      if (sturm_count(chain, iv.a, mid) == 1)
        iv.b = mid;
      else
        iv.a = mid;
    }
    roots.push_back(MpReal::from_mpq(((iv.a + iv.b) / 2), bits + 32));
  }
  std::sort(roots.begin(), roots.end(), [](const MpReal& a, const MpReal& b) { return a < b; });
  return roots;
}

std::vector<MpComplex> complex_roots(const UniPoly& p, mpfr_prec_t prec) {
  std::vector<MpComplex> roots;
  int n = p.degree();
  if (n <= 0) return roots;
  const mpfr_prec_t wp = prec + 64;
  // Monic coefficients in floating point.
  std::vector<MpComplex> c(static_cast<std::size_t>(n) + 1, MpComplex::from_double(0, 0, wp));
  GQ lead_inv = GQ(1) / p.lead();
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = MpComplex::from_gq(p.coeff(k) * lead_inv, wp);
  auto eval_monic = [&](const MpComplex& z) {
    MpComplex acc = MpComplex::from_double(1, 0, wp);
    for (int k = n - 1; k >= 0; --k) acc = acc * z + c[static_cast<std::size_t>(k)];
    return acc;
  };
  // Deterministic spiral of starting points inside the root bound.
  MpReal bound = MpReal::from_double(0, wp);
  for (int k = 0; k < n; ++k) {
    MpReal t = c[static_cast<std::size_t>(k)].abs();
    if (t > bound) bound = t;
  }
  bound = bound + MpReal::from_double(1.0, wp);
  std::vector<MpComplex> z;
  MpComplex seed = MpComplex::from_double(0.4, 0.9, wp);
  MpComplex cur = MpComplex::from_double(0.3, 0.2, wp);
  for (int k = 0; k < n; ++k) {
    cur = cur * seed + MpComplex::from_double(0.13 * (k + 1), 0.07, wp);
    MpReal m = cur.abs();
    MpComplex scaled = cur / MpComplex(m, MpReal::from_double(0, wp));
    MpReal radius = bound * MpReal::from_double(0.3 + 0.5 * (k + 1.0) / n, wp);
    z.push_back(scaled * MpComplex(radius, MpReal::from_double(0, wp)));
  }
  MpReal eps = MpReal::from_double(2.0, wp);
  {
    // eps = 2^-(prec)
    MpReal half = MpReal::from_double(0.5, wp);
    eps = MpReal::from_double(1.0, wp);
    for (mpfr_prec_t k = 0; k < prec; ++k) eps = eps * half;
  }
  for (int iter = 0; iter < 4000; ++iter) {
    MpReal max_step = MpReal::from_double(0, wp);
    for (int k = 0; k < n; ++k) {
      MpComplex denom = MpComplex::from_double(1, 0, wp);
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        denom = denom * (z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)]);
      }
      if (denom.is_zero()) {
        z[static_cast<std::size_t>(k)] =
            z[static_cast<std::size_t>(k)] + MpComplex::from_double(1e-3 * (k + 1), 1e-3, wp);
        max_step = bound;
        continue;
      }
      MpComplex step = eval_monic(z[static_cast<std::size_t>(k)]) / denom;
      z[static_cast<std::size_t>(k)] = z[static_cast<std::size_t>(k)] - step;
      MpReal s = step.abs();
      if (s > max_step) max_step = s;
    }
    if (!(max_step > eps)) break;
  }
  return z;
}

GQ RationalFunction::eval(const GQ& x) const {
  GQ d = den.eval(x);
  if (d.is_zero()) throw std::domain_error("rational function evaluated at pole");
  return num.eval(x) / d;
}

RationalFunction reconstruct_rational(
    const std::function<std::optional<GQ>(const GQ&)>& probe, int deg_num_hint, int deg_den_hint,
    int deg_cap, std::uint64_t seed) {
  Rng rng(seed);
  int dn = std::max(0, deg_num_hint);
  int dd = std::max(0, deg_den_hint);
  for (;;) {
    const int unknowns = dn + dd + 2;
    // Gather unknowns + a verification margin of distinct sample points.
    const int wanted = unknowns + dn + dd + 8;
    std::vector<std::pair<GQ, GQ>> samples;
    std::set<std::pair<std::string, std::string>> seen;
    int attempts = 0;
    while (static_cast<int>(samples.size()) < wanted && attempts < wanted * 30) {
      ++attempts;
      GQ x = rng.gaussian(4000);
      auto key = std::make_pair(x.re.get_str(), x.im.get_str());
      if (seen.count(key)) continue;
      std::optional<GQ> v = probe(x);
      if (!v) continue;
      seen.insert(key);
      samples.emplace_back(x, *v);
    }
    if (static_cast<int>(samples.size()) < wanted)
      throw std::runtime_error("rational reconstruction: not enough usable sample points");

    MatGQ m;
    for (int s = 0; s < unknowns; ++s) {
      const auto& [x, fx] = samples[static_cast<std::size_t>(s)];
      std::vector<GQ> row;
      GQ xp(1);
      for (int k = 0; k <= dn; ++k) { row.push_back(xp); xp = xp * x; }
      xp = GQ(1);
      for (int k = 0; k <= dd; ++k) { row.push_back(-(fx * xp)); xp = xp * x; }
      m.push_back(std::move(row));
    }
    auto basis = exact_nullspace(std::move(m), unknowns);
    bool ok = false;
    RationalFunction rf;
    for (const auto& v : basis) {
      std::vector<GQ> nc(v.begin(), v.begin() + dn + 1);
      std::vector<GQ> dc(v.begin() + dn + 1, v.end());
      UniPoly num(std::move(nc)), den(std::move(dc));
      if (den.is_zero()) continue;
      UniPoly g = gcd(num, den);
      if (g.degree() > 0) {
        num = num.divmod(g).first;
        den = den.divmod(g).first;
      }
      GQ s = GQ(1) / den.lead();
      num = num.scaled(s);
      den = den.monic();
      bool verified = true;
      for (int s2 = unknowns; s2 < wanted; ++s2) {
        const auto& [x, fx] = samples[static_cast<std::size_t>(s2)];
        GQ dv = den.eval(x);
        if (dv.is_zero() || !(num.eval(x) / dv - fx).is_zero()) { verified = false; break; }
      }
      if (verified) { rf.num = num; rf.den = den; ok = true; break; }
    }
    if (ok) return rf;
    if (dn >= deg_cap && dd >= deg_cap)
      throw std::runtime_error("rational reconstruction: degree cap exceeded");
    dn = std::min(deg_cap, dn + 2);
    dd = std::min(deg_cap, dd + 2);
  }
}

}  // namespace sepeq
