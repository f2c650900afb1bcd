#ifndef PTCOUPLER_H
#define PTCOUPLER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PtcStatus {
  PTC_STATUS_OK = 0,
  PTC_STATUS_NULL_POINTER = 1,
  PTC_STATUS_INVALID_ARGUMENT = 2,
  PTC_STATUS_DOMAIN = 3,
  PTC_STATUS_UNPHYSICAL = 4,
  PTC_STATUS_DEGENERATE_NORMALIZATION = 5,
  PTC_STATUS_IO = 6,
  PTC_STATUS_PANIC = 7,
} PtcStatus;

/**
 * A coupler geometry together with its configuration (bare or sandwiched).
 */
typedef struct PtcCoupler PtcCoupler;

/**
 * A sweep result. Column names are kept as C strings owned by the table.
 */
typedef struct PtcTable PtcTable;

typedef struct PtcComplex {
  double re;
  double im;
} PtcComplex;

/**
 * Row-major 2×2 complex matrix.
 */
typedef struct PtcMat2 {
  struct PtcComplex a11;
  struct PtcComplex a12;
  struct PtcComplex a21;
  struct PtcComplex a22;
} PtcMat2;

/**
 * Output probabilities for one photon entering each waveguide.
 */
typedef struct PtcProbs {
  double p20;
  double p11;
  double p02;
} PtcProbs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null if the last
 * call succeeded. Valid until the next `ptc_*` call on the same thread.
 */
const char *ptc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ptc_version(void);

/**
 * Creates a coupler. `kappa` and `gamma` in 1/cm, `length` in cm.
 *
 * # Safety
 * `out_coupler` must be null or valid for writes.
 */
enum PtcStatus ptc_coupler_new(double kappa,
                               double gamma,
                               double length,
                               int sandwiched,
                               struct PtcCoupler **out_coupler);

/**
 * Creates a coupler whose length makes the lossless device an exact 50/50
 * splitter.
 *
 * # Safety
 * `out_coupler` must be null or valid for writes.
 */
enum PtcStatus ptc_coupler_new_idealized(double kappa,
                                         double gamma,
                                         int sandwiched,
                                         struct PtcCoupler **out_coupler);

/**
 * # Safety
 * `coupler` must be null or a handle from `ptc_coupler_new*` not yet freed.
 */
void ptc_coupler_free(struct PtcCoupler *coupler);

/**
 * Effective length in cm (differs from the requested one for idealized
 * couplers).
 *
 * # Safety
 * `coupler` must be a live handle; `out_length` valid for writes.
 */
enum PtcStatus ptc_coupler_length(const struct PtcCoupler *coupler, double *out_length);

/**
 * # Safety
 * `coupler` must be a live handle; `out_h` valid for writes.
 */
enum PtcStatus ptc_coupler_hamiltonian(const struct PtcCoupler *coupler, struct PtcMat2 *out_h);

/**
 * `U = exp(-iHz)`.
 *
 * # Safety
 * `coupler` must be a live handle; `out_u` valid for writes.
 */
enum PtcStatus ptc_coupler_propagator(const struct PtcCoupler *coupler, struct PtcMat2 *out_u);

/**
 * Post-selected two-photon output probabilities for input |1,1>.
 *
 * # Safety
 * `coupler` must be a live handle; `out_probs` valid for writes.
 */
enum PtcStatus ptc_coupler_probs(const struct PtcCoupler *coupler,
                                 int distinguishable,
                                 struct PtcProbs *out_probs);

/**
 * Interference term `J`; `p11_indist = p11_dist + J`.
 *
 * # Safety
 * `coupler` must be a live handle; `out_j` valid for writes.
 */
enum PtcStatus ptc_coupler_interference(const struct PtcCoupler *coupler, double *out_j);

/**
 * Zero-delay HOM visibility; positive for a dip, negative for a peak.
 *
 * # Safety
 * `coupler` must be a live handle; `out_v` valid for writes.
 */
enum PtcStatus ptc_coupler_visibility(const struct PtcCoupler *coupler,
                                      double v_max,
                                      double *out_v);

/**
 * `exp(s·M)`, exact also for defective `M`.
 *
 * # Safety
 * `m` must be readable and `out_e` valid for writes.
 */
enum PtcStatus ptc_expm2(const struct PtcMat2 *m, double s, struct PtcMat2 *out_e);

/**
 * Permanent of the `n`×`n` row-major matrix at `data`.
 *
 * # Safety
 * `data` must point to `n*n` readable elements; `out_perm` valid for writes.
 */
enum PtcStatus ptc_permanent(const struct PtcComplex *data, size_t n, struct PtcComplex *out_perm);

/**
 * Runs one figure sweep. `figure` is one of `fig2b`, `fig3bcd`, `fig3e`,
 * `fig4b`, `fig4c`; `config_path` may be null for the defaults.
 *
 * # Safety
 * `figure` must be a NUL-terminated string, `config_path` null or one, and
 * `out_table` valid for writes.
 */
enum PtcStatus ptc_figure_run(const char *figure,
                              const char *config_path,
                              struct PtcTable **out_table);

/**
 * # Safety
 * `table` must be null or a handle from `ptc_figure_run` not yet freed.
 */
void ptc_table_free(struct PtcTable *table);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t ptc_table_nrows(const struct PtcTable *table);

/**
 * Number of columns, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t ptc_table_ncols(const struct PtcTable *table);

/**
 * Name of column `index`. The string is owned by the table.
 *
 * # Safety
 * `table` must be a live handle and `out_name` valid for writes.
 */
enum PtcStatus ptc_table_column_name(const struct PtcTable *table,
                                     size_t index,
                                     const char **out_name);

/**
 * Borrowed view of column `index`: `*out_len` values at `*out_data`, owned
 * by the table.
 *
 * # Safety
 * `table` must be a live handle; `out_data` and `out_len` valid for writes.
 */
enum PtcStatus ptc_table_column(const struct PtcTable *table,
                                size_t index,
                                const double **out_data,
                                size_t *out_len);

/**
 * Writes the table as CSV (`json == 0`) or JSON.
 *
 * # Safety
 * `table` must be a live handle and `path` a NUL-terminated string.
 */
enum PtcStatus ptc_table_write(const struct PtcTable *table, const char *path, int json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTCOUPLER_H */
