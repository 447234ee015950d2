#pragma once

namespace gcorr {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
/// Continued-fraction evaluation, accurate to ~1e-14 over the ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

/// Inverse of I_x(a, b) in x for p in [0, 1] (Newton with bisection fallback).
double incomplete_beta_inv(double a, double b, double p);

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

/// Upper tail P(T > t) of Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

}  // namespace gcorr
