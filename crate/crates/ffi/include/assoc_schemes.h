#ifndef ASSOC_SCHEMES_H
#define ASSOC_SCHEMES_H

#include <stdbool.h>
#include <stdint.h>

#define AS_VERIFY_AXIOMS 1

#define AS_VERIFY_DESIGNS (1 << 1)

#define AS_VERIFY_PROPS (1 << 2)

#define AS_EIGEN (1 << 3)

#define AS_SELFDUAL (1 << 4)

#define AS_ALL ((((AS_VERIFY_AXIOMS | AS_VERIFY_DESIGNS) | AS_VERIFY_PROPS) | AS_EIGEN) | AS_SELFDUAL)

typedef enum AsFamily {
  AS_FAMILY_TWIN = 0,
  AS_FAMILY_GDD = 1,
  AS_FAMILY_INTRO = 2,
} AsFamily;

/**
 * Status codes returned by every entry point.
 */
typedef enum AsStatus {
  AS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  AS_STATUS_NULL_POINTER = 1,
  /**
   * The family or order is not valid for this construction.
   */
  AS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A construction or verification step failed internally.
   */
  AS_STATUS_FAILED = 3,
  /**
   * A Rust panic was caught at the boundary.
   */
  AS_STATUS_PANIC = 4,
} AsStatus;

/**
 * A completed run. Opaque to C.
 */
typedef struct AsReport AsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the scheme for `family` (an [`AsFamily`] value) at order `q`, runs the checks selected
 * by `flags` (a union of the `AS_*` bits) and stores a new report in
 * `*out`. A report whose checks fail is still returned with status OK;
 * query it with [`as_report_passed`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum AsStatus as_run(uint32_t family, uint64_t q, uint32_t flags, struct AsReport **out);

/**
 * Writes whether every check in the report passed.
 *
 * # Safety
 * `report` must come from [`as_run`] and not be freed; `passed` must be
 * writable.
 */
enum AsStatus as_report_passed(const struct AsReport *report, bool *passed);

/**
 * Writes the vertex count and the number of classes, identity included.
 *
 * # Safety
 * `report` must come from [`as_run`] and not be freed; both out pointers
 * must be writable.
 */
enum AsStatus as_report_size(const struct AsReport *report, uint64_t *vertices, uint64_t *classes);

/**
 * Points `*json` at the report serialized as JSON. The string is owned
 * by the report and stays valid until [`as_report_free`].
 *
 * # Safety
 * `report` must come from [`as_run`] and not be freed; `json` must be
 * writable.
 */
enum AsStatus as_report_json(const struct AsReport *report, const char **json);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must be null or come from [`as_run`], and must not be used
 * afterwards.
 */
void as_report_free(struct AsReport *report);

/**
 * Checks whether `q` is a valid order for `family` without building
 * anything. Returns OK or InvalidArgument.
 */
enum AsStatus as_validate(uint32_t family, uint64_t q);

/**
 * The message for the last non-OK status on this thread, or an empty
 * string. Valid until the next failing call on the same thread.
 */
const char *as_last_error(void);

/**
 * The library version as a static string.
 */
const char *as_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASSOC_SCHEMES_H */
