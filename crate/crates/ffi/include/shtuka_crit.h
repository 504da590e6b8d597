#ifndef SHTUKA_CRIT_H
#define SHTUKA_CRIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShtStatus {
  SHT_STATUS_OK = 0,
  SHT_STATUS_INVALID_INPUT = 1,
  SHT_STATUS_INTERNAL = 2,
  SHT_STATUS_NULL_POINTER = 3,
} ShtStatus;

typedef enum ShtVerdict {
  SHT_VERDICT_HOLDS = 0,
  SHT_VERDICT_FAILS = 1,
  SHT_VERDICT_INAPPLICABLE = 2,
} ShtVerdict;

typedef enum ShtCriterion {
  SHT_CRITERION_NONEMPTY = 0,
  SHT_CRITERION_LAU = 1,
  SHT_CRITERION_MAIN_INTRO = 2,
  SHT_CRITERION_MAIN_THEOREM = 3,
  SHT_CRITERION_QUASICOMPACT = 4,
  SHT_CRITERION_DEGENERATION_ALL_PLACEMENTS = 5,
} ShtCriterion;

/**
 * Opaque parsed scenario.
 */
typedef struct ShtScenario ShtScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a scenario file (`{"schema_version":1,"scenario":{…}}`). Invalid
 * scenarios are rejected with every violation listed in the error string.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum ShtStatus sht_scenario_parse(const char *json, struct ShtScenario **out);

/**
 * # Safety
 * `scenario` must come from [`sht_scenario_parse`] and not be freed twice.
 */
void sht_scenario_free(struct ShtScenario *scenario);

/**
 * Evaluates one criterion; `criterion` is a `ShtCriterion` value.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a writable pointer.
 */
enum ShtStatus sht_check(const struct ShtScenario *scenario,
                         int32_t criterion,
                         enum ShtVerdict *out);

/**
 * Full report as pretty JSON; release with [`sht_string_free`].
 *
 * # Safety
 * `scenario` must be a live handle and `out` a writable pointer.
 */
enum ShtStatus sht_report_json(const struct ShtScenario *scenario, char **out);

/**
 * Summary of a simple (D,φ)-space description, as pretty JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum ShtStatus sht_isospace_report_json(const char *json, char **out);

/**
 * `|Adm(λ)|` for a dominant `λ` of length `d`.
 *
 * # Safety
 * `lambda` must point to `d` readable integers and `out` be writable.
 */
enum ShtStatus sht_adm_size(const int64_t *lambda, size_t d, uint64_t *out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void sht_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *sht_last_error(void);

const char *sht_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHTUKA_CRIT_H */
