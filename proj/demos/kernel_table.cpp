// Prints closed-form kernel values next to their truncated basis expansions
// on a short list of points, one row per point.  A quick visual check that
// the series really reproduces the kernel.

#include <cstdio>
#include <vector>

#include "hcs/hermite.hpp"
#include "hcs/rkhs.hpp"

using hcs::Cplx;

int main() {
  const double alpha = 0.5;
  hcs::BasisSpec h1;
  h1.family = hcs::BasisFamily::HolHermiteH1D;
  h1.alpha = alpha;
  hcs::KernelSpec closed{hcs::KernelKind::VanEM1D, hcs::AlphaParam(alpha)};

  std::vector<std::pair<Cplx, Cplx>> pts = {
      {{0.0, 0.0}, {0.0, 0.0}},
      {{0.5, 0.0}, {0.5, 0.0}},
      {{0.3, 0.4}, {-0.2, 0.1}},
      {{1.0, -0.5}, {0.7, 0.6}},
  };

  std::printf("deformed kernel, alpha = %.2f, 80-term partial sums\n", alpha);
  std::printf("%-22s %-28s %-28s %s\n", "point pair", "closed form", "partial sum", "difference");
  for (const auto& [z, w] : pts) {
    Cplx exact = hcs::closed_kernel(closed, z, w);
    hcs::ZarembaResult sum = hcs::zaremba_kernel(h1, z, w, 80);
    std::printf("(%5.2f%+5.2fi, %5.2f%+5.2fi)  %13.10f%+13.10fi  %13.10f%+13.10fi  %.2e\n",
                z.real(), z.imag(), w.real(), w.imag(), exact.real(), exact.imag(),
                sum.value->real(), sum.value->imag(), std::abs(*sum.value - exact));
  }
  return 0;
}
