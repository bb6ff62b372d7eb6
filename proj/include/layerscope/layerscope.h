#ifndef LAYERSCOPE_H
#define LAYERSCOPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LS_API __declspec(dllexport)
#else
#define LS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    LS_OK = 0,
    LS_ERR_INVALID_ARGUMENT = 1,
    LS_ERR_DIMENSION_MISMATCH = 2,
    LS_ERR_NOT_HERMITIAN = 3,
    LS_ERR_NOT_CPTP = 4,
    LS_ERR_PARSE = 5,
    LS_ERR_INTERNAL = 6,
    LS_ERR_NULL_POINTER = 7
} ls_status;

typedef enum { LS_FORMAT_TEXT = 0, LS_FORMAT_JSON = 1 } ls_format;

/* Layer codes returned by ls_classify. */
typedef enum {
    LS_LAYER_BROADCASTABLE = 0,
    LS_LAYER_ONE_SIDE_BROADCASTABLE = 1,
    LS_LAYER_MUTUALLY_NONDISTURBING = 2,
    LS_LAYER_NONDISTURBING = 3,
    LS_LAYER_COMPATIBLE = 4,
    LS_LAYER_INCOMPATIBLE = 5
} ls_layer;

typedef struct ls_observable ls_observable;
typedef struct ls_channel ls_channel;
typedef struct ls_witnesses ls_witnesses;
typedef struct ls_report ls_report;

LS_API const char *ls_version(void);
/* Message of the last failed call on this thread ("" if none). */
LS_API const char *ls_last_error(void);
/* 1e-9 unless overridden by the LAYERSCOPE_TOL environment variable. */
LS_API double ls_default_tolerance(void);
/* Frees strings returned through char** out-parameters. */
LS_API void ls_string_free(char *s);

/* A tolerance <= 0 selects ls_default_tolerance() everywhere below. */

LS_API ls_status ls_observable_from_json(const char *json, ls_observable **out);
LS_API void ls_observable_free(ls_observable *o);
LS_API int ls_observable_dim(const ls_observable *o);
LS_API int ls_observable_outcomes(const ls_observable *o);

/* Parses an observable document and checks the POVM conditions. *valid is 1
 * or 0; *diagnostics (may be NULL) receives one line per violation. */
LS_API ls_status ls_validate_observable_json(const char *json, double tol, int *valid, char **diagnostics);

LS_API ls_status ls_channel_from_json(const char *json, double tol, ls_channel **out);
LS_API void ls_channel_free(ls_channel *c);

/* Broadcasting channels, instruments and ancilla witnesses, one document or
 * { "witnesses": [...] }. */
LS_API ls_status ls_witnesses_from_json(const char *json, double tol, ls_witnesses **out);
LS_API void ls_witnesses_free(ls_witnesses *w);

/* witnesses may be NULL. *layer (may be NULL) receives an ls_layer code. */
LS_API ls_status ls_classify(const ls_observable *a, const ls_observable *b, const ls_witnesses *witnesses,
                             double tol, ls_format format, char **out, int *layer);

/* Degree of compatibility to within bracket_tol (<= 0 selects 1e-6). */
LS_API ls_status ls_degree(const ls_observable *a, const ls_observable *b, double bracket_tol, double *degree,
                           double *lower, double *upper);

/* *holds is 1 when the channel broadcasts a (and b when non-NULL);
 * *one_side (may be NULL; requires b) is 1 when a is reproduced on the left
 * output and b on the right. *residual (may be NULL) is the worst residual of
 * the broadcast identities. */
LS_API ls_status ls_verify_broadcast(const ls_channel *channel, const ls_observable *a, const ls_observable *b,
                                     double tol, int *holds, int *one_side, double *residual);

LS_API size_t ls_scenario_count(void);
LS_API const char *ls_scenario_name(size_t index);

/* trials <= 0 selects the default of 200. */
LS_API ls_status ls_repro_run(const char *name, uint64_t seed, int trials, int include_timing, ls_report **out);
LS_API int ls_report_passed(const ls_report *r);
LS_API ls_status ls_report_render(const ls_report *const *reports, size_t count, ls_format format, char **out);
LS_API void ls_report_free(ls_report *r);

#ifdef __cplusplus
}
#endif

#endif
