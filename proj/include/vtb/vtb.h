// Copyright 2026 The vtb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VTB_VTB_H_
#define VTB_VTB_H_

/*
 * C interface to the vtb corpus pipeline.
 *
 * Every function returns a vtb_status. On failure a message is available from
 * vtb_last_error_message() on the same thread until the next call. Strings
 * returned through char** out-parameters are heap-allocated JSON documents
 * owned by the caller and released with vtb_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VTB_API __declspec(dllexport)
#elif defined(VTB_BUILDING_LIBRARY)
#define VTB_API __attribute__((visibility("default")))
#else
#define VTB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vtb_status {
  VTB_OK = 0,
  VTB_ERR_ARGUMENT = 1,
  VTB_ERR_VALIDATION = 2,
  VTB_ERR_IO = 3,
  VTB_ERR_CONFIG = 4,
  VTB_ERR_TRANSPORT = 5,
  VTB_ERR_PROTOCOL = 6,
  VTB_ERR_STAGE = 7,
  VTB_ERR_INTERNAL = 8
} vtb_status;

typedef struct vtb_session vtb_session;
typedef struct vtb_mock_server vtb_mock_server;

VTB_API const char* vtb_version(void);
VTB_API const char* vtb_status_name(vtb_status status);

/* Thread-local; empty string when the last call succeeded. */
VTB_API const char* vtb_last_error_message(void);
/* For VTB_ERR_CONFIG: the offending config key, else empty. */
VTB_API const char* vtb_last_error_key(void);

VTB_API void vtb_string_free(char* s);

/*
 * Opens a session on a config file and work directory. overrides_json may be
 * NULL or an object with optional members:
 *   "config":  JSON merge patch applied to the config file before parsing
 *   "options": {"judges": n, "upstream_manifest": path}
 */
VTB_API vtb_status vtb_session_open(const char* config_path, const char* workdir,
                                    const char* overrides_json, vtb_session** out);
VTB_API void vtb_session_close(vtb_session* session);

/*
 * Runs one stage (collect, video, clip, frame, assemble, metrics) or "all".
 * report_json receives {"ok": bool, "stages": [...]} even when a stage
 * reports failed items; the status is VTB_ERR_STAGE in that case.
 */
VTB_API vtb_status vtb_run_stage(vtb_session* session, const char* stage, char** report_json);

VTB_API vtb_status vtb_doctor(vtb_session* session, char** report_json);

/*
 * Corpus metrics. command is one of stats, insi-sim, shuffle, ppl, adapt.
 * options_json members: "corpus" (input path), "out" (output path for
 * shuffle/adapt, report path otherwise), "csv" (insi-sim plot data),
 * "p" and "seed" (shuffle), "format" (adapt: matched-list | parallel-list).
 * session may be NULL for stats, shuffle and adapt, which need no services.
 */
VTB_API vtb_status vtb_metrics_run(vtb_session* session, const char* command,
                                   const char* options_json, char** report_json);

/*
 * Validates a corpus file. options_json may be NULL or hold "eov_token",
 * "token_budget" and "max_images".
 */
VTB_API vtb_status vtb_validate_corpus(const char* path, const char* options_json,
                                       char** report_json);

/*
 * Serves mock services from fixtures_dir on host:port (port 0 picks one) on a
 * background thread. token may be NULL for no authentication.
 */
VTB_API vtb_status vtb_mock_server_start(const char* fixtures_dir, const char* host, int port,
                                         const char* token, vtb_mock_server** out,
                                         int* bound_port);
/* Stops serving and frees the server. */
VTB_API void vtb_mock_server_stop(vtb_mock_server* server);

/* SSIM of two 8-bit grayscale images of identical size, row-major. */
VTB_API vtb_status vtb_compute_ssim(const uint8_t* a, const uint8_t* b, int width, int height,
                                    double* out);

#ifdef __cplusplus
}
#endif

#endif /* VTB_VTB_H_ */
