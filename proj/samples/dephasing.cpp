// A qubit dephased by a two-level environment: as <0~|1~> decays the
// coherence in the computational basis is traded for entanglement, and the
// sum never exceeds ln 2.

#include <cstdio>

#include "qmono/qmono.hpp"

int main() {
  using namespace qmono;
  const double p = 0.8;
  const Matrix basis = Matrix::Identity(2, 2);
  const MeasureDescriptor coherence = MeasureDescriptor::coherence(basis);
  const EntanglementEvaluator ent(coherence);

  std::printf("%8s %12s %12s %12s\n", "overlap", "coherence", "E_F", "sum/ln2");
  for (int k = 10; k >= 0; --k) {
    const double overlap = k / 10.0;
    const DensityMatrix rho = dephasing_state({p, overlap, 2, 0.0});
    const auto r = check_resource_monogamy(rho, {2, 2}, coherence, ent);
    std::printf("%8.2f %12.6f %12.6f %12.6f\n", overlap, r.terms[0].second, r.terms[1].second, r.lhs / kLn2);
  }
  std::printf("long-time E_F = h(%.1f) = %.6f nats\n", p, binary_entropy(p));
}
