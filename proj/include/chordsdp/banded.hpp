#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chordsdp/sdp_problem.hpp"
#include "chordsdp/symmat.hpp"

namespace chordsdp {

/// N diagonal blocks of size n, consecutive blocks sharing rho indices.
struct BandedSpec {
  std::size_t N = 10;
  std::size_t n = 8;
  std::size_t rho = 3;
  std::size_t m = 5;
  std::uint64_t seed = 42;
};

/// nN - rho(N - 1). Throws InvalidSpec.
std::size_t banded_dimension(const BandedSpec& spec);

/// True when (i, j) lies inside some diagonal block.
bool in_band(const BandedSpec& spec, std::size_t i, std::size_t j);

struct BandedInstance {
  SdpProblem problem;
  SymMatrix feasible;  // X_f = W + kappa I
  double kappa;
};

/// Random banded SDP.
///
/// Matrices are drawn in the order A_1..A_m, W, U from one SplitMix64 stream;
/// each matrix fills its band column by column, top to bottom over the upper
/// triangle, with uniform(0,1) values. Then
///   kappa = 1 + max row sum of |W|,  X_f = W + kappa I,  b_k = <A_k, X_f>,
///   C = U + (1 + max row sum of |U|) I.
/// The shift on C keeps the cost positive definite, which bounds the problem.
/// Throws InvalidSpec unless N >= 1 and 1 <= rho < n.
BandedInstance gen_banded(const BandedSpec& spec);

}  // namespace chordsdp
