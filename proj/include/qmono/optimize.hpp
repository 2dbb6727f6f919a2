#pragma once

// Derivative-free local search (GSL nmsimplex2) and a Givens-rotation
// parametrization of the unitary group.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "qmono/qcore.hpp"

namespace qmono {

struct NelderMeadOptions {
  double initial_step = 0.3;
  double size_tol = 1e-8;
  int max_iter = 4000;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = kInf;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

struct GslObjective {
  const std::function<double(std::span<const double>)>* fn;
};

inline double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* obj = static_cast<GslObjective*>(params);
  const double val = (*obj->fn)(std::span<const double>(v->data, v->size));
  return std::isfinite(val) ? val : GSL_POSINF;
}

inline void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace detail

/// Minimize `fn` from `x0`. One-dimensional problems are handled by the
/// same simplex code.
inline MinimizeResult nelder_mead(const std::function<double(std::span<const double>)>& fn,
                                  std::vector<double> x0, const NelderMeadOptions& opts = {}) {
  detail::silence_gsl();
  MinimizeResult res;
  const std::size_t n = x0.size();
  if (n == 0) {
    res.value = fn(std::span<const double>());
    res.converged = true;
    return res;
  }
  detail::GslObjective obj{&fn};
  gsl_multimin_function f{&detail::gsl_trampoline, n, &obj};

  using VecPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
  VecPtr x(gsl_vector_alloc(n), &gsl_vector_free);
  VecPtr step(gsl_vector_alloc(n), &gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(step.get(), opts.initial_step);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &f, x.get(), step.get());

  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < opts.max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), opts.size_tol);
  }
  res.iterations = iter;
  res.converged = status == GSL_SUCCESS;
  res.value = s->fval;
  res.x.assign(s->x->data, s->x->data + n);
  return res;
}

/// Number of angles used by `givens_unitary` for dimension d.
constexpr int givens_parameter_count(int d) { return d * (d - 1); }

/// Product over pairs (k < l) of rotations acting on rows k, l:
///   [ cos t            -e^{i phi} sin t ]
///   [ e^{-i phi} sin t  cos t           ]
/// Parameters are consumed as (t, phi) per pair. Together with a diagonal
/// phase (irrelevant for conjugation of states diagonal in the starting
/// frame) this covers U(d).
inline Matrix givens_unitary(int d, std::span<const double> params) {
  Matrix u = Matrix::Identity(d, d);
  std::size_t p = 0;
  for (int k = 0; k < d; ++k) {
    for (int l = k + 1; l < d; ++l) {
      const double t = params[p++];
      const double phi = params[p++];
      const double c = std::cos(t), s = std::sin(t);
      const cplx e = std::polar(1.0, phi);
      for (int j = 0; j < d; ++j) {
        const cplx a = u(k, j), b = u(l, j);
        u(k, j) = c * a - e * s * b;
        u(l, j) = std::conj(e) * s * a + c * b;
      }
    }
  }
  return u;
}

}  // namespace qmono
