#pragma once

namespace clonometry {

// Every numerical gate in the library reads its threshold from this record,
// so a global rescale touches exactly one place.
struct Tolerances {
  double exact_algebra = 1e-12;     // identities that hold to rounding
  double hermiticity = 1e-12;
  double trace_one = 1e-10;
  double psd_floor = -1e-10;        // most negative admissible eigenvalue
  double unitarity = 1e-8;
  double projector_defect = 1e-10;  // |P^2 - P|
  double quadrature = 1e-6;         // sphere / phase-space quadrature residuals
  double truncation_trace = 2e-3;   // admissible trace deficit of truncated channels
  double scale = 1.0;

  double operator()(double base) const { return base * scale; }
};

Tolerances& tolerances();
double tol(double base);
void set_tolerance_scale(double s);

// Reads CLONOMETRY_TOLERANCE_SCALE from the environment; 1.0 when unset or invalid.
double tolerance_scale_from_env();

}  // namespace clonometry
