// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pixground::text {

// Offsets exchanged with the bridge are Unicode code point indices; strings
// are held as UTF-8.
std::size_t codepoint_count(std::string_view utf8);
// Byte offset of the code point at `index` (index == count gives size()).
std::size_t byte_offset(std::string_view utf8, std::size_t index);
std::string slice_codepoints(std::string_view utf8, std::size_t start, std::size_t end);

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

// Replaces every occurrence of `token` in `tmpl`.
std::string replace_all(std::string tmpl, std::string_view token, std::string_view value);

// 64-bit FNV-1a, used for content digests in transcripts and golden tests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace pixground::text
