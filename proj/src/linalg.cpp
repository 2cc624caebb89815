#include "sepeq/linalg.hpp"

namespace sepeq {

std::vector<int> exact_rref(MatGQ& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(m[r], m[sel]);
    GQ inv = GQ(1) / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      GQ f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<GQ>> exact_nullspace(MatGQ m, int ncols) {
  for (auto& row : m) row.resize(static_cast<std::size_t>(ncols), GQ(0));
  std::vector<int> pivots = exact_rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<GQ>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<GQ> v(static_cast<std::size_t>(ncols), GQ(0));
    v[static_cast<std::size_t>(f)] = GQ(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = -m[r][static_cast<std::size_t>(f)];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<GQ>> exact_solve(MatGQ a, std::vector<GQ> b) {
  const int rows = static_cast<int>(a.size());
  int cols = 0;
  for (const auto& row : a) cols = std::max(cols, static_cast<int>(row.size()));
  for (int i = 0; i < rows; ++i) {
    a[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cols), GQ(0));
    a[static_cast<std::size_t>(i)].push_back(b[static_cast<std::size_t>(i)]);
  }
  std::vector<int> pivots = exact_rref(a);
  // Inconsistent iff some pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<GQ> x(static_cast<std::size_t>(cols), GQ(0));
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[static_cast<std::size_t>(pivots[r])] = a[r][static_cast<std::size_t>(cols)];
  return x;
}

std::optional<std::vector<MpComplex>> numeric_solve(MatC a, std::vector<MpComplex> b,
                                                    const MpReal& tol) {
  const int rows = static_cast<int>(a.size());
  int cols = 0;
  for (const auto& row : a) cols = std::max(cols, static_cast<int>(row.size()));
  const mpfr_prec_t prec = tol.prec();
  for (int i = 0; i < rows; ++i) {
    a[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(cols),
                                          MpComplex::from_double(0, 0, prec));
    a[static_cast<std::size_t>(i)].push_back(b[static_cast<std::size_t>(i)]);
  }
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    MpReal best = MpReal::from_double(0, prec);
    for (int i = r; i < rows; ++i) {
      MpReal mag = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].abs();
      if (sel < 0 || mag > best) { sel = i; best = mag; }
    }
    if (sel < 0 || !(best > tol)) continue;
    std::swap(a[static_cast<std::size_t>(r)], a[static_cast<std::size_t>(sel)]);
    MpComplex inv = MpComplex::from_double(1, 0, prec) /
                    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int j = c; j <= cols; ++j)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      MpComplex f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (!(f.abs() > MpReal::from_double(0, prec))) continue;
      for (int j = c; j <= cols; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
            f * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    pivot_col.push_back(c);
    ++r;
  }
  // Rows past the last pivot must have negligible RHS.
  for (int i = r; i < rows; ++i)
    if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols)].abs() > tol)
      return std::nullopt;
  std::vector<MpComplex> x(static_cast<std::size_t>(cols), MpComplex::from_double(0, 0, prec));
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    x[static_cast<std::size_t>(pivot_col[k])] = a[k][static_cast<std::size_t>(cols)];
  return x;
}

std::vector<std::vector<MpComplex>> numeric_nullspace(MatC m, int ncols, const MpReal& tol) {
  const mpfr_prec_t prec = tol.prec();
  for (auto& row : m) row.resize(static_cast<std::size_t>(ncols), MpComplex::from_double(0, 0, prec));
  const int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < ncols && r < rows; ++c) {
    int sel = -1;
    MpReal best = MpReal::from_double(0, prec);
    for (int i = r; i < rows; ++i) {
      MpReal mag = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].abs();
      if (sel < 0 || mag > best) { sel = i; best = mag; }
    }
    if (sel < 0 || !(best > tol)) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(sel)]);
    MpComplex inv = MpComplex::from_double(1, 0, prec) /
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int j = c; j < ncols; ++j)
      m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
          m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      MpComplex f = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      for (int j = c; j < ncols; ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
            f * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<MpComplex>> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<MpComplex> v(static_cast<std::size_t>(ncols), MpComplex::from_double(0, 0, prec));
    v[static_cast<std::size_t>(f)] = MpComplex::from_double(1, 0, prec);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      v[static_cast<std::size_t>(pivot_col[k])] =
          MpComplex::from_double(0, 0, prec) - m[k][static_cast<std::size_t>(f)];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace sepeq
