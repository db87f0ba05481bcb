/* C interface to the spectra library.
 *
 * Every function returns an spk_status. Report-producing calls write a
 * JSON document to *out_json, owned by the caller and released with
 * spk_string_free. On SPK_VIOLATION the report is still written; on input,
 * resource and internal errors *out_json is left NULL and spk_last_error()
 * describes the failure. Handles are not thread-safe; distinct handles may
 * be used from distinct threads.
 */
#ifndef SPECTRA_SPECTRA_H
#define SPECTRA_SPECTRA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPK_API __declspec(dllexport)
#else
#define SPK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spk_status {
  SPK_OK = 0,
  SPK_VIOLATION = 1,
  SPK_INPUT_ERROR = 2,
  SPK_RESOURCE_ERROR = 3,
  SPK_INTERNAL_ERROR = 4
} spk_status;

typedef struct spk_datum spk_datum;
typedef struct spk_space spk_space;
typedef struct spk_tower spk_tower;

SPK_API const char* spk_version(void);
/* Message of the most recent failure on the calling thread. */
SPK_API const char* spk_last_error(void);
SPK_API void spk_string_free(char* s);

/* Schema id of a JSON file; "" for a directory. */
SPK_API spk_status spk_file_schema(const char* path, char** out_schema);

SPK_API spk_status spk_datum_load(const char* path, spk_datum** out);
SPK_API void spk_datum_free(spk_datum* d);
SPK_API size_t spk_datum_point_count(const spk_datum* d);

SPK_API spk_status spk_space_load(const char* path, spk_space** out);
SPK_API void spk_space_free(spk_space* s);

/* Accepts a tower file or a directory holding tower.json. */
SPK_API spk_status spk_tower_load(const char* path, spk_tower** out);
SPK_API void spk_tower_free(spk_tower* t);
SPK_API size_t spk_tower_height(const spk_tower* t);
/* Keeps levels 1..top. */
SPK_API spk_status spk_tower_truncate(spk_tower* t, size_t top);

/* Point sets are arrays of point ids. */
SPK_API spk_status spk_validate(const spk_datum* d, char** out_json);
SPK_API spk_status spk_closure(const spk_datum* d, const char* const* ids, size_t n, char** out_json);
SPK_API spk_status spk_witness(const spk_datum* d, const char* exclude, const char* const* from, size_t n,
                               char** out_json);
SPK_API spk_status spk_sigma(const spk_datum* d, const char* functor_path, const char* const* ids, size_t n,
                             char** out_json);

SPK_API spk_status spk_isolated_datum(const spk_datum* d, char** out_json);
SPK_API spk_status spk_isolated_space(const spk_space* s, char** out_json);
SPK_API spk_status spk_cb_rank_datum(const spk_datum* d, char** out_json);
SPK_API spk_status spk_cb_rank_space(const spk_space* s, char** out_json);
/* bound caps the multiplicity of limit witnesses. */
SPK_API spk_status spk_cb_rank_tower(const spk_tower* t, size_t bound, char** out_json);

/* suite: kuratowski, t1, serre, perp, routes or all. Datums with at most
 * four points are checked exhaustively; larger ones use `samples` draws. */
SPK_API spk_status spk_check_datum(const spk_datum* d, const char* suite, size_t samples, uint64_t seed,
                                   char** out_json);
/* suite: kuratowski, t1 or all. */
SPK_API spk_status spk_check_space(const spk_space* s, const char* suite, size_t samples, uint64_t seed,
                                   char** out_json);

/* p = 0 selects the default prime. */
SPK_API spk_status spk_gen_pack_an(size_t n, uint32_t p, const char* out_path, char** out_json);
SPK_API spk_status spk_gen_tower_ainf(size_t levels, int ydeg, uint32_t p, const char* out_dir, char** out_json);

SPK_API spk_status spk_tower_verify(const spk_tower* t, char** out_json);
/* Witness chain over prefix levels 1..height; fixed = nonzero keeps the
 * prefix set fixed at later levels. */
SPK_API spk_status spk_tower_chain(const spk_tower* t, const char* exclude, int fixed, char** out_json);
/* family = NULL means every locally free point other than y. */
SPK_API spk_status spk_limit_closure(const spk_tower* t, const char* y, const char* const* family, size_t n,
                                     int include_core, size_t bound, char** out_json);

/* out_dot may be NULL. The DOT graph covers every point. */
SPK_API spk_status spk_ar_datum(const spk_datum* d, const char* point, char** out_json, char** out_dot);
SPK_API spk_status spk_ar_tower(const spk_tower* t, const char* point, char** out_json, char** out_dot);

/* path: a datum file with <stem>.manifest.json beside it, a manifest file,
 * or a tower directory. Checks file hashes and recomputes every structure
 * constant from the ring-level oracle in reversed basis order. */
SPK_API spk_status spk_verify_pack(const char* path, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
