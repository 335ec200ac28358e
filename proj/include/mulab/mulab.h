#ifndef MULAB_H
#define MULAB_H

/* C interface to the experiment runner.  All state lives behind the opaque
 * context handle; functions return mulab status codes and never throw.
 * Error text for the most recent failing call on the current thread is
 * available through mulab_last_error(). */

#ifdef __cplusplus
extern "C" {
#endif

#define MULAB_OK 0           /* success */
#define MULAB_USAGE 2        /* unknown recipe / invalid parameter */
#define MULAB_CHECK_FAILED 3 /* recipe's embedded acceptance check failed */

typedef struct mulab_ctx mulab_ctx;

/* library semantic version, e.g. "0.1.0" */
const char* mulab_version(void);

/* space-separated recipe names */
const char* mulab_recipes(void);

/* thread-local message set by the last failing call; empty string otherwise */
const char* mulab_last_error(void);

mulab_ctx* mulab_ctx_new(void);
void mulab_ctx_free(mulab_ctx* ctx);

/* merge a key=value config file into the context (later wins) */
int mulab_ctx_load_file(mulab_ctx* ctx, const char* path);

/* set one key (overrides file values) */
int mulab_ctx_set(mulab_ctx* ctx, const char* key, const char* value);

/* read back a key; returns NULL when absent.  The pointer stays valid until
 * the next call on the same context. */
const char* mulab_ctx_get(mulab_ctx* ctx, const char* key);

/* run one recipe with the accumulated configuration; returns MULAB_OK,
 * MULAB_USAGE or MULAB_CHECK_FAILED */
int mulab_run(mulab_ctx* ctx, const char* recipe);

/* newline-separated "name<TAB>file<TAB>rows<TAB>digest" lines for the tables
 * written by the most recent mulab_run on this context */
const char* mulab_ctx_tables(mulab_ctx* ctx);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MULAB_H */
