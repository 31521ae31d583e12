// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "evlive/event_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "evlive/error.hpp"

namespace evlive {

namespace {

constexpr std::uint8_t kMagic[4] = {0x45, 0x56, 0x54, 0x30};  // "EVT0"

template <typename T>
T load_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

template <typename T>
void store_le(std::vector<std::uint8_t>& out, T value) {
  auto v = static_cast<std::uint64_t>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
}

EventStream finish(int width, int height, std::vector<Event> events,
                   ParseOptions options, ParseReport* report) {
  if (options.strict) {
    for (std::size_t i = 1; i < events.size(); ++i) {
      if (events[i].t < events[i - 1].t) {
        throw Error(ErrorCode::NonMonotonic,
                    "timestamp decreases at record " + std::to_string(i));
      }
    }
    if (report) report->reordered = 0;
    return EventStream(width, height, std::move(events));
  }
  std::size_t reordered = 0;
  auto stream = EventStream::from_unsorted(width, height, std::move(events),
                                           &reordered);
  if (report) report->reordered = reordered;
  return stream;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) +
                                           ": bad " + name + " '" +
                                           std::string(field) + "'");
  }
  return value;
}

}  // namespace

EventStream parse_binary(std::span<const std::uint8_t> bytes,
                         ParseOptions options, ParseReport* report) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not an EVT0 event file");
  }
  if (bytes.size() < kEvtHeaderSize) {
    throw Error(ErrorCode::TruncatedRecord, "header truncated");
  }
  const std::uint8_t* p = bytes.data();
  const auto version = load_le<std::uint16_t>(p + 4);
  const auto width = load_le<std::uint16_t>(p + 6);
  const auto height = load_le<std::uint16_t>(p + 8);
  const auto count = load_le<std::uint64_t>(p + 12);
  if (version != kEvtVersion) {
    throw Error(ErrorCode::BadVersion,
                "unsupported EVT0 version " + std::to_string(version));
  }
  const std::size_t payload = bytes.size() - kEvtHeaderSize;
  if (payload % kEvtRecordSize != 0 || payload / kEvtRecordSize != count) {
    throw Error(ErrorCode::TruncatedRecord,
                "header announces " + std::to_string(count) + " records but " +
                    std::to_string(payload) + " payload bytes follow");
  }

  std::vector<Event> events;
  events.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint8_t* r = p + kEvtHeaderSize + i * kEvtRecordSize;
    const auto t = load_le<std::uint64_t>(r);
    const auto x = load_le<std::uint16_t>(r + 8);
    const auto y = load_le<std::uint16_t>(r + 10);
    const auto pol = static_cast<std::int8_t>(r[12]);
    if (pol != 1 && pol != -1) {
      throw Error(ErrorCode::BadPolarity, "record " + std::to_string(i) +
                                              " has polarity " +
                                              std::to_string(int{pol}));
    }
    if (x >= width || y >= height) {
      throw Error(ErrorCode::OutOfBounds,
                  "record " + std::to_string(i) + " at (" + std::to_string(x) +
                      "," + std::to_string(y) + ") outside " +
                      std::to_string(width) + "x" + std::to_string(height));
    }
    if (t > static_cast<std::uint64_t>(std::numeric_limits<Micros>::max())) {
      throw Error(ErrorCode::ParseError,
                  "record " + std::to_string(i) + " timestamp overflows");
    }
    events.push_back({x, y, static_cast<Micros>(t), pol});
  }
  return finish(width, height, std::move(events), options, report);
}

std::vector<std::uint8_t> serialize_binary(const EventStream& stream) {
  std::vector<std::uint8_t> out;
  out.reserve(kEvtHeaderSize + stream.size() * kEvtRecordSize);
  for (std::uint8_t b : kMagic) out.push_back(b);
  store_le<std::uint16_t>(out, kEvtVersion);
  store_le<std::uint16_t>(out, static_cast<std::uint16_t>(stream.width()));
  store_le<std::uint16_t>(out, static_cast<std::uint16_t>(stream.height()));
  store_le<std::uint16_t>(out, 0);
  store_le<std::uint64_t>(out, stream.size());
  for (const Event& e : stream.events()) {
    store_le<std::uint64_t>(out, static_cast<std::uint64_t>(e.t));
    store_le<std::uint16_t>(out, e.x);
    store_le<std::uint16_t>(out, e.y);
    out.push_back(static_cast<std::uint8_t>(e.p));
    out.insert(out.end(), 3, std::uint8_t{0});
  }
  return out;
}

EventStream parse_csv(std::string_view text, int width, int height,
                      ParseOptions options, ParseReport* report) {
  std::vector<Event> events;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (!header_seen) {
      if (line != "t_us,x,y,p") {
        throw Error(ErrorCode::MissingHeader,
                    "expected header 't_us,x,y,p' on line 1");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[4];
    std::size_t n = 0;
    for (std::string_view rest = line;; ++n) {
      const auto comma = rest.find(',');
      if (n >= 4) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": too many fields");
      }
      fields[n] = rest.substr(0, comma);
      if (comma == std::string_view::npos) {
        ++n;
        break;
      }
      rest = rest.substr(comma + 1);
    }
    if (n != 4) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                             ": expected 4 fields, got " +
                                             std::to_string(n));
    }
    const auto t = parse_field<Micros>(fields[0], line_no, "t_us");
    const auto x = parse_field<long>(fields[1], line_no, "x");
    const auto y = parse_field<long>(fields[2], line_no, "y");
    const auto p = parse_field<int>(fields[3], line_no, "p");
    if (p != 1 && p != -1) {
      throw Error(ErrorCode::BadPolarity, "line " + std::to_string(line_no) +
                                              ": polarity " + std::to_string(p));
    }
    if (t < 0) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": negative timestamp");
    }
    if (x < 0 || y < 0 || x >= width || y >= height) {
      throw Error(ErrorCode::OutOfBounds,
                  "line " + std::to_string(line_no) + ": (" + std::to_string(x) +
                      "," + std::to_string(y) + ") outside " +
                      std::to_string(width) + "x" + std::to_string(height));
    }
    events.push_back({static_cast<std::uint16_t>(x),
                      static_cast<std::uint16_t>(y), t,
                      static_cast<std::int8_t>(p)});
  }
  if (!header_seen) {
    throw Error(ErrorCode::MissingHeader, "empty CSV input");
  }
  return finish(width, height, std::move(events), options, report);
}

std::string serialize_csv(const EventStream& stream) {
  std::string out = "t_us,x,y,p\n";
  out.reserve(out.size() + stream.size() * 24);
  char buf[64];
  for (const Event& e : stream.events()) {
    const int n = std::snprintf(buf, sizeof buf, "%lld,%u,%u,%d\n",
                                static_cast<long long>(e.t), unsigned{e.x}, unsigned{e.y}, int{e.p});
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename onto " + path.string());
  }
}

EventFormat format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? EventFormat::csv : EventFormat::binary;
}

EventStream load_stream(const std::filesystem::path& path, int width,
                        int height, ParseOptions options, ParseReport* report) {
  if (format_for(path) == EventFormat::csv) {
    return parse_csv(read_text(path), width, height, options, report);
  }
  return parse_binary(read_bytes(path), options, report);
}

void save_stream(const std::filesystem::path& path, const EventStream& stream) {
  if (format_for(path) == EventFormat::csv) {
    write_atomic(path, serialize_csv(stream));
  } else {
    const auto bytes = serialize_binary(stream);
    write_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                        bytes.size()));
  }
}

}  // namespace evlive
