#ifndef APOINTLAB_H
#define APOINTLAB_H

#include <stddef.h>
#include <stdint.h>

/*
 Status codes shared by all entry points.
 */
typedef enum ApStatus {
  AP_STATUS_OK = 0,
  AP_STATUS_NULL_POINTER = 1,
  AP_STATUS_INVALID_ARGUMENT = 2,
  AP_STATUS_POLE = 3,
  AP_STATUS_OUT_OF_RANGE = 4,
  AP_STATUS_NUMERICAL = 5,
  AP_STATUS_NOT_SUPPORTED = 6,
  AP_STATUS_IO = 7,
  AP_STATUS_PANIC = 99,
} ApStatus;

/*
 Opaque list of a-points.
 */
typedef struct ApPointSet ApPointSet;

/*
 Opaque truncated Dirichlet series.
 */
typedef struct ApSeries ApSeries;

/*
 A complex number as two doubles.
 */
typedef struct ApComplex {
  double re;
  double im;
} ApComplex;

/*
 One a-point `beta + i gamma` with its residual `|zeta(rho) - a|`.
 */
typedef struct ApPoint {
  double beta;
  double gamma;
  double residual;
} ApPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *ap_last_error(void);

/*
 Static name of a status code.
 */
const char *ap_status_name(enum ApStatus status);

/*
 `zeta(s)` with default evaluation parameters.

 # Safety
 `out` must be null or valid for writes.
 */
enum ApStatus ap_zeta(struct ApComplex s, struct ApComplex *out);

/*
 `Delta(s) = 2 (2 pi)^(s-1) sin(pi s / 2) Gamma(1 - s)`.

 # Safety
 `out` must be null or valid for writes.
 */
enum ApStatus ap_delta(struct ApComplex s, struct ApComplex *out);

/*
 Chebyshev `psi(x)`; zero for `x < 2`.
 */
double ap_psi(double x);

/*
 The `sigma > 1` with `zeta(sigma) - 1 = |a - 1|`.

 # Safety
 `out` must be null or valid for writes.
 */
enum ApStatus ap_sigma_star(struct ApComplex a, double *out);

/*
 All a-points with `0 < gamma <= t_max` in the default search window.

 # Safety
 `out` must be null or valid for writes. On success `*out` owns a handle
 to be released with `ap_point_set_free`.
 */
enum ApStatus ap_point_set_compute(struct ApComplex a, double t_max, struct ApPointSet **out);

/*
 Number of points, or 0 for a null handle.

 # Safety
 `set` must be null or a live handle.
 */
size_t ap_point_set_len(const struct ApPointSet *set);

/*
 Point `index` in ascending ordinate order.

 # Safety
 `set` must be null or a live handle; `out` must be null or valid for writes.
 */
enum ApStatus ap_point_set_get(const struct ApPointSet *set, size_t index, struct ApPoint *out);

/*
 # Safety
 `set` must be null or a handle not yet freed.
 */
void ap_point_set_free(struct ApPointSet *set);

/*
 Coefficients `Lambda_a(1..=len)` of `zeta'(s) / (zeta(s) - a)`.

 # Safety
 `out` must be null or valid for writes. On success `*out` owns a handle
 to be released with `ap_series_free`.
 */
enum ApStatus ap_lambda_a(size_t len, struct ApComplex a, struct ApSeries **out);

/*
 A series from `len` coefficients `c_1 .. c_len`.

 # Safety
 `coeffs` must be valid for `len` reads; `out` must be null or valid for writes.
 */
enum ApStatus ap_series_new(const struct ApComplex *coeffs, size_t len, struct ApSeries **out);

/*
 Dirichlet inverse of `series` as a new handle.

 # Safety
 `series` must be null or a live handle; `out` must be null or valid for writes.
 */
enum ApStatus ap_series_inverse(const struct ApSeries *series, struct ApSeries **out);

/*
 Number of coefficients, or 0 for a null handle.

 # Safety
 `series` must be null or a live handle.
 */
size_t ap_series_len(const struct ApSeries *series);

/*
 Coefficient `c_n` for `1 <= n <= len`.

 # Safety
 `series` must be null or a live handle; `out` must be null or valid for writes.
 */
enum ApStatus ap_series_coeff(const struct ApSeries *series, size_t n, struct ApComplex *out);

/*
 # Safety
 `series` must be null or a handle not yet freed.
 */
void ap_series_free(struct ApSeries *series);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APOINTLAB_H */
