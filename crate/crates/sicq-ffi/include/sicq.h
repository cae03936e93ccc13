/* C interface to the sicq SIC-POVM / QBist probability library. */

#ifndef SICQ_H
#define SICQ_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  SICQ_STATUS_OK = 0,
  SICQ_STATUS_NULL_POINTER = 1,
  SICQ_STATUS_INVALID_ARGUMENT = 2,
  SICQ_STATUS_DIMENSION_MISMATCH = 3,
  SICQ_STATUS_NOT_SIC = 4,
  SICQ_STATUS_SEARCH_FAILED = 5,
  SICQ_STATUS_UNDERDETERMINED = 6,
  SICQ_STATUS_INFEASIBLE = 7,
  SICQ_STATUS_INTERNAL_ERROR = 8,
} SicqStatus;

/**
 * Opaque POVM handle.
 */
typedef struct SicqPovm SicqPovm;

/**
 * Opaque SIC-POVM handle.
 */
typedef struct SicqSic SicqSic;

/**
 * Opaque density-operator handle.
 */
typedef struct SicqState SicqState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Sample a density operator from the Hilbert-Schmidt measure.
 * Deterministic per (dim, seed).
 */
SicqStatus sicq_state_random(uintptr_t dim, uint64_t seed, SicqState **out);

/**
 * Build a density operator from a row-major interleaved (re, im) buffer
 * of length 2*dim*dim. The matrix must satisfy the density invariants.
 */
SicqStatus sicq_state_new(uintptr_t dim, const double *entries, SicqState **out);

uintptr_t sicq_state_dim(const SicqState *state);

/**
 * Copy the state matrix into a caller buffer of length 2*dim*dim,
 * row-major interleaved (re, im).
 */
SicqStatus sicq_state_copy(const SicqState *state, double *buffer, uintptr_t len);

void sicq_state_free(SicqState *state);

/**
 * Load a catalogued SIC for dim in [2, 6].
 */
SicqStatus sicq_sic_known(uintptr_t dim, SicqSic **out);

/**
 * Run the fiducial search and build the resulting SIC.
 */
SicqStatus sicq_sic_find(uintptr_t dim,
                         uint64_t seed,
                         uintptr_t restarts,
                         uintptr_t max_iterations,
                         SicqSic **out);

uintptr_t sicq_sic_dim(const SicqSic *sic);

void sicq_sic_free(SicqSic *sic);

/**
 * Build a POVM from n effects, each a row-major interleaved (re, im)
 * buffer of length 2*dim*dim, concatenated.
 */
SicqStatus sicq_povm_new(uintptr_t dim, uintptr_t n_effects, const double *entries, SicqPovm **out);

void sicq_povm_free(SicqPovm *povm);

/**
 * Born probabilities of a POVM on a state, written into a caller buffer
 * with one slot per effect.
 */
SicqStatus sicq_born(const SicqState *state, const SicqPovm *povm, double *buffer, uintptr_t len);

/**
 * SIC reference probabilities p(E_i) = Tr(E_i rho), one slot per effect
 * (dim^2 values).
 */
SicqStatus sicq_reference_probabilities(const SicqState *state,
                                        const SicqSic *sic,
                                        double *buffer,
                                        uintptr_t len);

/**
 * Run the FTP comparison pipeline; writes the worst-case deviation of
 * the classical and QBist formulas from the Born probabilities.
 */
SicqStatus sicq_ftp_deviations(const SicqState *state,
                               const SicqSic *sic,
                               const SicqPovm *target,
                               double *deviation_classical,
                               double *deviation_qbist);

/**
 * Reconstruct a state from dim^2 SIC reference probabilities.
 */
SicqStatus sicq_reconstruct_from_sic(const double *probabilities,
                                     uintptr_t len,
                                     const SicqSic *sic,
                                     SicqState **out);

/**
 * Reconstruct a state from the outcome probabilities of an arbitrary
 * informationally complete POVM by linear inversion.
 */
SicqStatus sicq_reconstruct_linear_inversion(const double *probabilities,
                                             uintptr_t len,
                                             const SicqPovm *reference,
                                             SicqState **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SICQ_H */
