#pragma once

namespace geoflow {

// Carlson symmetric integrals by duplication, relative accuracy about 1e-15.
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);
// p > 0 only; the principal-value case is reduced to p > 0 by the callers below.
double carlson_rj(double x, double y, double z, double p);
double carlson_rc(double x, double y);

enum class EllipticKind { K, E, Pi };

// Complete integrals in the parameter m = k^2. Pi uses the characteristic n with the integrand
// 1 / ((1 - n sin^2) sqrt(1 - m sin^2)); n > 1 returns the Cauchy principal value.
double ellint_k(double m);
double ellint_e(double m);
double ellint_pi(double n, double m);
double elliptic_complete(EllipticKind kind, double m, double n = 0.0);

}  // namespace geoflow
