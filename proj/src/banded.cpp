#include "chordsdp/banded.hpp"

#include <string>

#include "chordsdp/errors.hpp"
#include "chordsdp/rng.hpp"

namespace chordsdp {

namespace {

void check(const BandedSpec& spec) {
  if (spec.N < 1) throw InvalidSpec("banded spec: N must be at least 1");
  if (spec.n < 1) throw InvalidSpec("banded spec: n must be at least 1");
  if (spec.rho < 1 || spec.rho >= spec.n)
    throw InvalidSpec("banded spec: need 1 <= rho < n, got rho = " + std::to_string(spec.rho));
}

SymMatrix draw(const BandedSpec& spec, std::size_t dim, SplitMix64& rng) {
  SymMatrix out(dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r <= c; ++r)
      if (in_band(spec, r, c)) out.set(r, c, rng.uniform());
  return out;
}

SymMatrix shifted(SymMatrix x, double shift) {
  for (std::size_t i = 0; i < x.dim(); ++i) x.set(i, i, x(i, i) + shift);
  return x;
}

}  // namespace

std::size_t banded_dimension(const BandedSpec& spec) {
  check(spec);
  return spec.n * spec.N - spec.rho * (spec.N - 1);
}

bool in_band(const BandedSpec& spec, std::size_t i, std::size_t j) {
  const std::size_t lo = i < j ? i : j;
  const std::size_t hi = i < j ? j : i;
  const std::size_t stride = spec.n - spec.rho;
  // the last block starting at or before lo
  std::size_t block = lo / stride;
  if (block > spec.N - 1) block = spec.N - 1;
  return hi < block * stride + spec.n;
}

BandedInstance gen_banded(const BandedSpec& spec) {
  const std::size_t dim = banded_dimension(spec);
  SplitMix64 rng(spec.seed);

  std::vector<SymMatrix> a;
  a.reserve(spec.m);
  for (std::size_t k = 0; k < spec.m; ++k) a.push_back(draw(spec, dim, rng));
  const SymMatrix w = draw(spec, dim, rng);
  const SymMatrix u = draw(spec, dim, rng);

  const double kappa = 1.0 + w.max_abs_row_sum();
  SymMatrix feasible = shifted(w, kappa);
  std::vector<double> b;
  b.reserve(spec.m);
  for (const auto& ak : a) b.push_back(inner(ak, feasible));
  SymMatrix cost = shifted(u, 1.0 + u.max_abs_row_sum());

  return BandedInstance{SdpProblem(std::move(cost), std::move(a), std::move(b)), std::move(feasible), kappa};
}

}  // namespace chordsdp
