/* Copyright 2026 The rfclink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>

#include "rfclink/num/param_store.hpp"

namespace rfclink::num {

// Manifest: one line per parameter, "<name> <rows>x<cols> <byte offset>", in
// registration order. Payload: every parameter's values back to back as
// little-endian IEEE-754 binary32.
template <typename T>
void save_checkpoint(const ParamStore<T>& store, const std::filesystem::path& manifest,
                     const std::filesystem::path& payload);

// Fills an already-constructed store. Every manifest entry must name a
// parameter of the same shape and every parameter must be present.
template <typename T>
void load_checkpoint(ParamStore<T>& store, const std::filesystem::path& manifest,
                     const std::filesystem::path& payload);

}  // namespace rfclink::num
