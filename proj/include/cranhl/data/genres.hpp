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

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace cranhl::data {

// Fixed ten-genre vocabulary; the classifier head is sized to it. Unknown
// names are rejected rather than remapped.
inline constexpr std::array<std::string_view, 10> kGenres = {
    "Dance", "Ballad", "Teuroteu", "Hiphop", "Rock",
    "Jazz",  "R&B",    "Indie",    "Classic", "Elec"};

inline constexpr std::size_t kGenreCount = kGenres.size();

// Index of a genre name; throws InvalidInputError listing the vocabulary
// when the name is unknown.
std::size_t genre_index(std::string_view name);

std::string genre_name(std::size_t index);

std::string genre_vocabulary();  // comma-separated, for error messages

}  // namespace cranhl::data
