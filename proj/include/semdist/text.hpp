/*
 * Copyright 2026 The semdist Authors.
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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semdist::text {

// Shortest decimal representation that parses back to the same double.
std::string format_shortest(double value);

// Fixed-point with `decimals` digits, "C" locale.
std::string format_fixed(double value, int decimals);

std::optional<double> parse_double(std::string_view s);
std::optional<unsigned long long> parse_unsigned(std::string_view s);

// Splits on any run of the given delimiter characters, skipping empty tokens.
std::vector<std::string_view> split_any(std::string_view s, std::string_view delimiters);

// Splits on every occurrence of `delimiter`, keeping empty fields.
std::vector<std::string_view> split_exact(std::string_view s, char delimiter);

std::string_view trim(std::string_view s);

}  // namespace semdist::text
