#ifndef MIXRISK_H
#define MIXRISK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Values 1 to 4 match the exit codes of the `mixrisk`
// binary.
typedef enum MixriskStatus {
  MIXRISK_STATUS_OK = 0,
  MIXRISK_STATUS_IO = 1,
  // Syntax, schema, semantic or configuration error.
  MIXRISK_STATUS_PARSE = 2,
  MIXRISK_STATUS_SOLVER = 3,
  MIXRISK_STATUS_NUMERICAL = 4,
  MIXRISK_STATUS_NULL_POINTER = 10,
  // An argument is out of range or not valid UTF-8.
  MIXRISK_STATUS_INVALID_ARGUMENT = 11,
  // The requested item does not exist for this model.
  MIXRISK_STATUS_NOT_AVAILABLE = 12,
  // A Rust panic was caught at the boundary.
  MIXRISK_STATUS_PANIC = 13,
} MixriskStatus;

// Situation selector; `INCOME_ONLY` does not exist in the probabilistic
// model.
typedef enum MixriskSituation {
  MIXRISK_SITUATION_FULL_RISK = 0,
  MIXRISK_SITUATION_INCOME_ONLY = 1,
  MIXRISK_SITUATION_BACKGROUND_ONLY = 2,
  MIXRISK_SITUATION_CERTAINTY = 3,
} MixriskSituation;

// Indicator selector; `ADD_BACKGROUND` does not exist in the probabilistic
// model.
typedef enum MixriskIndicatorKind {
  MIXRISK_INDICATOR_KIND_ADD_INCOME = 0,
  MIXRISK_INDICATOR_KIND_TWO_SOURCE = 1,
  MIXRISK_INDICATOR_KIND_ADD_BACKGROUND = 2,
} MixriskIndicatorKind;

// A solved scenario.
typedef struct MixriskReport MixriskReport;

// A parsed and validated scenario.
typedef struct MixriskScenario MixriskScenario;

// One indicator with its predicate. Signs are -1, 0 or +1; `agreement` is
// 1 (agree), 0 (inconclusive) or -1 (disagree).
typedef struct MixriskIndicator {
  double value;
  int32_t sign;
  double predicate;
  int32_t predicate_sign;
  double taylor_gap;
  double exact_gap;
  int32_t agreement;
} MixriskIndicator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a scenario document. `quadrature_nodes` is the node count used
// when the document does not set one; 0 selects the library default.
//
// # Safety
// `json` is null or a NUL-terminated string; `out` is null or writable.
enum MixriskStatus mixrisk_scenario_from_json(const char *json,
                                              size_t quadrature_nodes,
                                              struct MixriskScenario **out);

// # Safety
// `scenario` is null or a handle from [`mixrisk_scenario_from_json`] that
// has not been freed.
void mixrisk_scenario_free(struct MixriskScenario *scenario);

// Solves every situation of the scenario.
//
// # Safety
// `scenario` is null or a live handle; `out` is null or writable.
enum MixriskStatus mixrisk_scenario_solve(const struct MixriskScenario *scenario,
                                          struct MixriskReport **out);

// Smallest empirical Taylor convergence order over `n` strictly decreasing
// risk scales. Writes NaN when every error sits at the noise floor.
//
// # Safety
// `scenario` is null or a live handle; `eps` is null or points to `n`
// doubles; `out` is null or writable.
enum MixriskStatus mixrisk_scenario_min_taylor_order(const struct MixriskScenario *scenario,
                                                     const double *eps,
                                                     size_t n,
                                                     double *out);

// # Safety
// `report` is null or a handle from [`mixrisk_scenario_solve`] that has
// not been freed.
void mixrisk_report_free(struct MixriskReport *report);

// Optimal saving in one situation.
//
// # Safety
// `report` is null or a live handle; `out` is null or writable.
enum MixriskStatus mixrisk_report_saving(const struct MixriskReport *report,
                                         enum MixriskSituation situation,
                                         double *out);

// One precautionary-saving indicator.
//
// # Safety
// `report` is null or a live handle; `out` is null or writable.
enum MixriskStatus mixrisk_report_indicator(const struct MixriskReport *report,
                                            enum MixriskIndicatorKind kind,
                                            struct MixriskIndicator *out);

// The CSV rendering, identical to `mixrisk solve --outputs csv`.
//
// # Safety
// `report` is null or a live handle; `out` is null or writable.
enum MixriskStatus mixrisk_report_csv(const struct MixriskReport *report, char **out);

// The aligned text table, identical to `mixrisk solve --outputs table`.
//
// # Safety
// `report` is null or a live handle; `out` is null or writable.
enum MixriskStatus mixrisk_report_table(const struct MixriskReport *report, char **out);

// # Safety
// `s` is null or a string returned by this library that has not been
// freed.
void mixrisk_string_free(char *s);

// Message of the last failure on this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *mixrisk_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *mixrisk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXRISK_H */
