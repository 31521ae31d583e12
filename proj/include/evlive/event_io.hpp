// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evlive/event.hpp"

namespace evlive {

/// Lenient parsing stable-sorts out-of-order input instead of rejecting it.
struct ParseOptions {
  bool strict = true;
};

struct ParseReport {
  std::size_t reordered = 0;
};

// EVT0 container: 20-byte little-endian header followed by 16-byte records.
inline constexpr std::size_t kEvtHeaderSize = 20;
inline constexpr std::size_t kEvtRecordSize = 16;
inline constexpr std::uint16_t kEvtVersion = 1;

EventStream parse_binary(std::span<const std::uint8_t> bytes,
                         ParseOptions options = {},
                         ParseReport* report = nullptr);
std::vector<std::uint8_t> serialize_binary(const EventStream& stream);

/// CSV with header `t_us,x,y,p`; geometry is not part of the file.
EventStream parse_csv(std::string_view text, int width, int height,
                      ParseOptions options = {}, ParseReport* report = nullptr);
std::string serialize_csv(const EventStream& stream);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view data);

enum class EventFormat { binary, csv };

/// `.csv` selects CSV; anything else is treated as EVT0.
EventFormat format_for(const std::filesystem::path& path);

/// Loads a stream in either format. CSV input needs `width`/`height`.
EventStream load_stream(const std::filesystem::path& path, int width = 0,
                        int height = 0, ParseOptions options = {},
                        ParseReport* report = nullptr);
void save_stream(const std::filesystem::path& path, const EventStream& stream);

}  // namespace evlive
