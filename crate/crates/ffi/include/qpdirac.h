#ifndef QPDIRAC_H
#define QPDIRAC_H

/* Generated by cbindgen from the qpdirac-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible entry point.
 */
typedef enum QpdStatus {
  /**
   * Success.
   */
  QPD_STATUS_OK = 0,
  /**
   * A pointer argument was NULL.
   */
  QPD_STATUS_NULL_POINTER = 1,
  /**
   * Arguments failed validation (bad prime, grid bounds, classes, ...).
   */
  QPD_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Physically inadmissible request (mass off the scale ladder, imaginary
   * energy, matching pole).
   */
  QPD_STATUS_INADMISSIBLE = 3,
  /**
   * Internal failure.
   */
  QPD_STATUS_INTERNAL = 4,
} QpdStatus;

/**
 * Opaque grid handle: a fixed odd prime with support and constancy exponents.
 */
typedef struct QpdGrid QpdGrid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a grid handle for the quotient p^{-support_exp} Z_p / p^{constancy_exp} Z_p.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum QpdStatus qpd_grid_new(uint32_t p,
                            int32_t support_exp,
                            int32_t constancy_exp,
                            struct QpdGrid **out);

/**
 * Release a grid handle. NULL is ignored.
 *
 * # Safety
 * `grid` must be a pointer returned by [`qpd_grid_new`], not yet freed.
 */
void qpd_grid_free(struct QpdGrid *grid);

/**
 * Number of grid points p^{support_exp + constancy_exp}; 0 for NULL.
 *
 * # Safety
 * `grid` must be a live handle from [`qpd_grid_new`] or NULL.
 */
size_t qpd_grid_len(const struct QpdGrid *grid);

/**
 * Twisted gamma factor Γ_p(s, π), written to (out_re, out_im).
 *
 * # Safety
 * `out_re` and `out_im` must point to writable doubles.
 */
enum QpdStatus qpd_gamma(uint32_t p, double s, double *out_re, double *out_im);

/**
 * Largest eigenrelation residual over every representable character wave on
 * the grid. `kernel_mode` = 0 selects the spectral form, nonzero the kernel
 * oracle. The swept index count lands in `out_count` when non-NULL.
 *
 * # Safety
 * `grid` must be a live handle; `out_residual` must be writable.
 */
enum QpdStatus qpd_eigen_max_residual(const struct QpdGrid *grid,
                                      double alpha,
                                      int32_t kernel_mode,
                                      double *out_residual,
                                      size_t *out_count);

/**
 * Solve the 1D interface zero mode for a two-value mass profile and return
 * the bound-state record as a JSON string (see the library documentation for
 * the schema). `snap` nonzero rounds inadmissible masses to the nearest
 * scale rung.
 *
 * # Safety
 * `grid` must be a live handle; `out_json` must point to writable storage
 * for one pointer. The returned string must be freed via [`qpd_string_free`].
 */
enum QpdStatus qpd_solve_1d_json(const struct QpdGrid *grid,
                                 double m1,
                                 double m2,
                                 double v,
                                 double hbar,
                                 int32_t snap,
                                 char **out_json);

/**
 * Edge dispersion of the constructed 2D states: E = -ħv π^{-1}(s) p^{1-l}.
 *
 * # Safety
 * `out_energy` must point to a writable double.
 */
enum QpdStatus qpd_edge_energy_2d(uint32_t p,
                                  int32_t l,
                                  uint8_t s,
                                  double v,
                                  double hbar,
                                  double *out_energy);

/**
 * Free a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be a pointer previously returned by a `*_json` function of this
 * library, not yet freed.
 */
void qpd_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QPDIRAC_H */
