/* Copyright 2026 The Sonoloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The public header must stay consumable from plain C. */

#include <stdio.h>
#include <string.h>

#include "sonoloc/sonoloc.h"

int main(void) {
  sonoloc_config cfg;
  sonoloc_config_default(&cfg);
  if (cfg.frame_size != 512) return 1;
  if (strlen(sonoloc_version()) == 0) return 1;
  if (sonoloc_strstatus(SONOLOC_OK) == NULL) return 1;

  sonoloc_array_t* array = NULL;
  if (sonoloc_array_preset("spatial7", &array) != SONOLOC_OK) return 1;
  if (sonoloc_array_mic_count(array) != 7) return 1;
  sonoloc_array_free(array);

  const double doa[3] = {0.0, 1.0, 0.0};
  if (sonoloc_doa_azimuth(doa) != 0.0) return 1;
  printf("c client ok\n");
  return 0;
}
