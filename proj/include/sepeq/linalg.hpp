#pragma once

#include <optional>
#include <vector>

#include "sepeq/numeric.hpp"
#include "sepeq/rational.hpp"

namespace sepeq {

using MatGQ = std::vector<std::vector<GQ>>;

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> exact_rref(MatGQ& m);

// Basis of the right nullspace of an n x k matrix (k = ncols; rows may be
// ragged-free). Each basis vector has length ncols.
std::vector<std::vector<GQ>> exact_nullspace(MatGQ m, int ncols);

// A particular solution of A x = b (free variables set to zero), or nullopt
// when the system is inconsistent.
std::optional<std::vector<GQ>> exact_solve(MatGQ a, std::vector<GQ> b);

using MatC = std::vector<std::vector<MpComplex>>;

// Gaussian elimination with partial pivoting; pivots below `tol` are treated
// as zero. Returns a particular solution or nullopt when inconsistent.
std::optional<std::vector<MpComplex>> numeric_solve(MatC a, std::vector<MpComplex> b,
                                                    const MpReal& tol);

// Right-nullspace basis with magnitude-`tol` rank decisions.
std::vector<std::vector<MpComplex>> numeric_nullspace(MatC m, int ncols, const MpReal& tol);

}  // namespace sepeq
