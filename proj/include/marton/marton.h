/* C interface to the broadcast polar-coding library: configuration handles,
 * status codes, and a single entry point that runs one command and writes
 * its artifact files into a directory. */
#ifndef MARTON_MARTON_H
#define MARTON_MARTON_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; also used as process exit codes by the CLI. */
enum {
    MTN_OK = 0,
    MTN_ERR_CONFIG = 2,     /* malformed or contradictory configuration */
    MTN_ERR_INFEASIBLE = 3, /* requested rates cannot be laid out */
    MTN_ERR_RUNTIME = 4     /* I/O or internal failure */
};

typedef struct mtn_config mtn_config;

typedef struct mtn_run_options {
    int has_seed;  /* when nonzero, `seed` overrides the config seed */
    uint64_t seed;
    int threads;   /* worker threads; values < 1 mean 1 */
} mtn_run_options;

const char* mtn_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* mtn_last_error(void);

/* Parse a JSON configuration document (text / file).  On success stores a
 * handle in *out, which must be released with mtn_config_free. */
int mtn_config_parse(const char* json_text, mtn_config** out);
int mtn_config_load(const char* path, mtn_config** out);
void mtn_config_free(mtn_config* config);

/* Run one command and write its artifacts under out_dir (created if absent):
 *   "construct" -> report.json
 *   "simulate"  -> report.json, trials.csv
 *   "region"    -> report.json, frontier.csv
 *   "compare"   -> report.json, frontier.csv
 * opts may be NULL for defaults.  Returns a status code. */
int mtn_run(const mtn_config* config, const char* command, const char* out_dir,
            const mtn_run_options* opts);

#ifdef __cplusplus
}
#endif

#endif /* MARTON_MARTON_H */
