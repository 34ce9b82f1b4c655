#pragma once

#include <optional>
#include <vector>

#include "mwd/design.hpp"
#include "mwd/gf.hpp"

namespace mwd {

// L_i(x, y) = 1 iff y - x lies in the cyclotomic class C_i, rows and columns
// in element-encoding order; Lbig is the block matrix ((L_{i-j}))_{i,j}.
struct CyclotomicMatrixSet {
  std::vector<IntMatrix> L;
  IntMatrix Lbig;
};

CyclotomicMatrixSet cyclotomic_matrices(const Cyclotomy& cy);

// All three builders verify the incidence identities they are supposed to
// satisfy before returning, so a returned design is a checked object.
//
// d1: units F* x F ordered by (enc a, enc b); h block factors p_0..p_{h-1}
// with representatives p_i in C_i (default p_i = g^i); level of p_i on (a,b)
// is a p_i + b; treatment of (a,b) is (b, i) for a in C_i, encoded i*s+enc b.
Design build_d1_star(const FiniteField& field, int h,
                     const std::optional<std::vector<std::int64_t>>& representatives = std::nullopt);

// d2: units (a,b,j) with a in C_j or a = 0, ordered by (enc a, enc b, j);
// block factors indexed by the elements of C_0; level of factor alpha on
// (a,b,j) is a*alpha + b; treatment is (b, j).
Design build_d2_star(const FiniteField& field, int h);

// d3 (s = 3 mod 4): units (a,b,i) with a in C_0 or a = 0 and i in {0,1},
// ordered by (enc a, enc b, i); block factors are the paired squares W plus
// one (s+1)-level factor named "inf" whose extra level s stands for the
// point at infinity; treatment is (b, i).
Design build_d3_star(const FiniteField& field);

}  // namespace mwd
