/*
 * Copyright 2026 The cranhl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cranhl/data/genres.hpp"

#include "cranhl/error.hpp"

namespace cranhl::data {

std::string genre_vocabulary() {
  std::string out;
  for (std::size_t i = 0; i < kGenres.size(); ++i) {
    if (i) out += ", ";
    out += kGenres[i];
  }
  return out;
}

std::size_t genre_index(std::string_view name) {
  for (std::size_t i = 0; i < kGenres.size(); ++i) {
    if (kGenres[i] == name) return i;
  }
  throw InvalidInputError("unknown genre '" + std::string(name) +
                          "'; valid genres: " + genre_vocabulary());
}

std::string genre_name(std::size_t index) {
  if (index >= kGenres.size()) {
    throw InvalidInputError("genre index out of range: " +
                            std::to_string(index));
  }
  return std::string(kGenres[index]);
}

}  // namespace cranhl::data
