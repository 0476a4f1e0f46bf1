/* C interface for the qmarkov quantum Markov chain analyses. */

#ifndef QMARKOV_H
#define QMARKOV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum QmStatus {
  QM_STATUS_OK = 0,
  QM_STATUS_NULL_POINTER = 1,
  QM_STATUS_INVALID_UTF8 = 2,
  QM_STATUS_PARSE_ERROR = 3,
  QM_STATUS_INVALID_INPUT = 4,
  QM_STATUS_DIMENSION_MISMATCH = 5,
  QM_STATUS_NUMERICAL_FAILURE = 6,
  QM_STATUS_IO_ERROR = 7,
  QM_STATUS_PANIC = 8,
} QmStatus;

/**
 * Which probability a `qm_probability_report` call computes.
 */
typedef enum QmAnalysisKind {
  QM_ANALYSIS_KIND_REACH = 0,
  QM_ANALYSIS_KIND_REPEATED_REACH = 1,
  QM_ANALYSIS_KIND_PERSISTENCE = 2,
} QmAnalysisKind;

/**
 * Opaque handle to a quantum channel.
 */
typedef struct QmChannel QmChannel;

/**
 * Opaque handle to a density operator.
 */
typedef struct QmState QmState;

/**
 * Opaque handle to a subspace of the state space.
 */
typedef struct QmSubspace QmSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Latest error message for this thread, or NULL when no error occurred yet.
 * The caller owns the string and must release it with `qm_string_free`.
 */
char *qm_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 */
void qm_string_free(char *s);

/**
 * Build a channel from a model JSON document
 * (`{"dimension": n, "kraus": [...]}` with `[re, im]` entries).
 */
enum QmStatus qm_channel_from_json(const char *json, double tolerance, struct QmChannel **out);

/**
 * Build a channel from dense Kraus data: `num_kraus` row-major `dim x dim`
 * matrices of interleaved `re, im` doubles (`2 * num_kraus * dim * dim`
 * values in total).
 */
enum QmStatus qm_channel_from_dense(size_t dim,
                                    size_t num_kraus,
                                    const double *data,
                                    double tolerance,
                                    struct QmChannel **out);

/**
 * Dimension of the channel's state space.
 */
enum QmStatus qm_channel_dim(const struct QmChannel *channel, size_t *out);

/**
 * Release a channel handle. NULL is ignored.
 */
void qm_channel_free(struct QmChannel *channel);

/**
 * Build a state from a state JSON document (`{"pure": [...]}` or
 * `{"density": [...]}`) against the expected dimension.
 */
enum QmStatus qm_state_from_json(const char *json,
                                 size_t dim,
                                 double tolerance,
                                 struct QmState **out);

/**
 * The computational basis state `|index>` in the given dimension.
 */
enum QmStatus qm_state_basis(size_t dim, size_t index, struct QmState **out);

/**
 * Release a state handle. NULL is ignored.
 */
void qm_state_free(struct QmState *state);

/**
 * Build a subspace from a subspace JSON document (`{"vectors": [...]}`,
 * empty list for the zero subspace) within the given ambient dimension.
 */
enum QmStatus qm_subspace_from_json(const char *json,
                                    size_t ambient_dim,
                                    double tolerance,
                                    struct QmSubspace **out);

/**
 * The span of the listed computational basis vectors.
 */
enum QmStatus qm_subspace_basis_indices(size_t ambient_dim,
                                        const size_t *indices,
                                        size_t len,
                                        struct QmSubspace **out);

/**
 * Dimension of the subspace.
 */
enum QmStatus qm_subspace_dim(const struct QmSubspace *subspace, size_t *out);

/**
 * Release a subspace handle. NULL is ignored.
 */
void qm_subspace_free(struct QmSubspace *subspace);

/**
 * Decompose the state space into BSCCs plus the transient subspace.
 * On success `out_json` holds a report with the BSCC dimensions and bases.
 */
enum QmStatus qm_decompose(const struct QmChannel *channel,
                           uint64_t seed,
                           double tolerance,
                           char **out_json);

/**
 * Whether the subspace is a BSCC of the channel (1 yes, 0 no).
 */
enum QmStatus qm_check_bscc(const struct QmChannel *channel,
                            const struct QmSubspace *subspace,
                            double tolerance,
                            int32_t *out);

/**
 * Probability of ever reaching the target subspace from the state.
 */
enum QmStatus qm_reach_probability(const struct QmChannel *channel,
                                   const struct QmState *state,
                                   const struct QmSubspace *target,
                                   double tolerance,
                                   double *out);

/**
 * Probability of eventually staying inside the target subspace forever.
 */
enum QmStatus qm_persistence_probability(const struct QmChannel *channel,
                                         const struct QmState *state,
                                         const struct QmSubspace *target,
                                         double tolerance,
                                         double *out);

/**
 * Probability of visiting the target subspace infinitely often.
 */
enum QmStatus qm_repeated_reach_probability(const struct QmChannel *channel,
                                            const struct QmState *state,
                                            const struct QmSubspace *target,
                                            double tolerance,
                                            double *out);

/**
 * Detailed probability report as JSON (probability, witness subspace,
 * effective target dimension).
 */
enum QmStatus qm_probability_report(const struct QmChannel *channel,
                                    const struct QmState *state,
                                    const struct QmSubspace *target,
                                    enum QmAnalysisKind kind,
                                    double tolerance,
                                    char **out_json);

/**
 * The subspace reachable from the state, as a JSON subspace report.
 */
enum QmStatus qm_reachable_space(const struct QmChannel *channel,
                                 const struct QmState *state,
                                 double tolerance,
                                 char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMARKOV_H */
