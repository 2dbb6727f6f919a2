#pragma once

// Spectrum entropies (all in nats) and majorization.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "qmono/qcore.hpp"

namespace qmono {

class EntropyKind {
 public:
  enum class Family { VonNeumann, Renyi, Tsallis, Binary };

  static EntropyKind von_neumann() { return EntropyKind(Family::VonNeumann, 1.0); }
  static EntropyKind binary() { return EntropyKind(Family::Binary, 1.0); }

  /// Order-1 requests collapse to von Neumann.
  static EntropyKind renyi(double alpha) {
    check_order(alpha);
    return alpha == 1.0 ? von_neumann() : EntropyKind(Family::Renyi, alpha);
  }
  static EntropyKind tsallis(double q) {
    check_order(q);
    return q == 1.0 ? von_neumann() : EntropyKind(Family::Tsallis, q);
  }

  Family family() const { return family_; }
  double order() const { return order_; }

  std::string name() const {
    switch (family_) {
      case Family::VonNeumann: return "vn";
      case Family::Binary: return "binary";
      case Family::Renyi: return "renyi:" + format_order();
      case Family::Tsallis: return "tsallis:" + format_order();
    }
    return "?";
  }

 private:
  EntropyKind(Family f, double order) : family_(f), order_(order) {}

  static void check_order(double order) {
    if (!(order > 0.0) || !std::isfinite(order))
      throw Error(ErrorCode::BadOrder, "entropy order must be positive");
  }

  std::string format_order() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", order_);
    return buf;
  }

  Family family_;
  double order_;
};

inline double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "binary entropy needs p in [0, 1]");
  return -xlogx(p) - xlogx(1.0 - p);
}

inline double shannon(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s -= xlogx(v);
  return s;
}

/// Entropy of a spectrum. The Binary family evaluates h at the largest entry.
inline double entropy(const Spectrum& spec, const EntropyKind& kind) {
  const auto p = spec.probs();
  switch (kind.family()) {
    case EntropyKind::Family::VonNeumann:
      return std::max(0.0, shannon(p));
    case EntropyKind::Family::Binary:
      return binary_entropy(std::clamp(p[0], 0.0, 1.0));
    case EntropyKind::Family::Renyi: {
      const double a = kind.order();
      double sum = 0.0;
      for (double v : p)
        if (v > 0.0) sum += std::pow(v, a);
      return std::max(0.0, std::log(sum) / (1.0 - a));
    }
    case EntropyKind::Family::Tsallis: {
      const double q = kind.order();
      double sum = 0.0;
      for (double v : p)
        if (v > 0.0) sum += std::pow(v, q);
      return std::max(0.0, (1.0 - sum) / (q - 1.0));
    }
  }
  return 0.0;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy(hermitian_spectrum(rho), EntropyKind::von_neumann());
}

/// True iff every partial sum of `a` dominates that of `b` (1e-12 slack),
/// after zero-padding to a common length.
inline bool majorizes(const Spectrum& a, const Spectrum& b) {
  const std::size_t n = std::max(a.size(), b.size());
  const auto pa = a.padded(n);
  const auto pb = b.padded(n);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += pa[i];
    sb += pb[i];
    if (sa < sb - 1e-12) return false;
  }
  return true;
}

inline constexpr double kLn2 = std::numbers::ln2;

inline double nats_to_bits(double nats) { return nats / kLn2; }

}  // namespace qmono
