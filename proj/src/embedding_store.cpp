#include "threshgate/embedding_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <string_view>

#include "threshgate/error.hpp"

namespace threshgate {
namespace {

static_assert(std::numeric_limits<float>::is_iec559, "IEEE-754 binary32 required");

constexpr std::uint32_t kMaxIdBytes = 1u << 20;

template <typename UInt>
void put_le(std::ostream& out, UInt value) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

// Reads exactly sizeof(UInt) bytes; returns false on a short read.
template <typename UInt>
bool get_le(std::istream& in, UInt& value) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) return false;
  value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return true;
}

void check_id(std::string_view id) {
  if (id.empty()) throw Error(Errc::InvalidId, "empty id");
  if (id.find_first_of(",\n") != std::string_view::npos) {
    throw Error(Errc::InvalidId, "id contains a comma or newline: '" + std::string(id) + "'");
  }
}

// Splits one text row on ','; the formats never quote fields.
std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Iterates non-empty lines, skipping the expected header. Calls fn(line_no, fields).
template <typename Fn>
void for_each_row(std::istream& text, std::string_view header, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(text, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      seen_header = true;
      if (line != header) {
        throw Error(Errc::MalformedRow, "expected header '" + std::string(header) + "', got '" + line + "'");
      }
      continue;
    }
    auto fields = split_row(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": '" + line + "'");
    }
    fn(line_no, fields);
  }
}

}  // namespace

void write_embedding_store(const EmbeddingStore& store, std::ostream& sink) {
  if (store.dim == 0) throw Error(Errc::DimMismatch, "store dimension must be positive");
  std::set<std::string_view> seen;
  for (const auto& rec : store.records) {
    check_id(rec.id);
    if (!seen.insert(rec.id).second) throw Error(Errc::DuplicateId, rec.id);
    if (rec.vector.size() != store.dim) {
      throw Error(Errc::DimMismatch, "record '" + rec.id + "' has " + std::to_string(rec.vector.size()) +
                                         " values, store dim is " + std::to_string(store.dim));
    }
    for (float v : rec.vector) {
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "record '" + rec.id + "'");
    }
  }

  sink.write(kStoreMagic, sizeof(kStoreMagic));
  put_le<std::uint32_t>(sink, kStoreVersion);
  put_le<std::uint32_t>(sink, store.dim);
  put_le<std::uint64_t>(sink, store.records.size());
  for (const auto& rec : store.records) {
    put_le<std::uint32_t>(sink, static_cast<std::uint32_t>(rec.id.size()));
    sink.write(rec.id.data(), static_cast<std::streamsize>(rec.id.size()));
    for (float v : rec.vector) put_le<std::uint32_t>(sink, std::bit_cast<std::uint32_t>(v));
  }
  if (!sink) throw Error(Errc::Io, "failed writing embedding store");
}

EmbeddingStore read_embedding_store(std::istream& source) {
  char magic[4] = {};
  source.read(magic, sizeof(magic));
  auto got = static_cast<std::size_t>(source.gcount());
  if (std::memcmp(magic, kStoreMagic, got) != 0) throw Error(Errc::BadMagic, "not an EMB1 embedding store");
  if (got < sizeof(magic)) throw Error(Errc::TruncatedFile, "missing header");

  std::uint32_t version = 0;
  EmbeddingStore store;
  std::uint64_t count = 0;
  if (!get_le(source, version) || !get_le(source, store.dim) || !get_le(source, count)) {
    throw Error(Errc::TruncatedFile, "incomplete header");
  }
  if (version != kStoreVersion) {
    throw Error(Errc::UnsupportedVersion, "version " + std::to_string(version));
  }
  if (store.dim == 0) throw Error(Errc::DimMismatch, "store dimension is 0");

  // The declared count is untrusted, so cap the up-front reservation.
  store.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 16)));
  std::set<std::string> seen;
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint32_t id_len = 0;
    if (!get_le(source, id_len)) {
      throw Error(Errc::TruncatedFile, "header declares " + std::to_string(count) + " records, found " +
                                           std::to_string(r));
    }
    if (id_len > kMaxIdBytes) throw Error(Errc::InvalidId, "record " + std::to_string(r) + " id too long");
    EmbeddingRecord rec;
    rec.id.resize(id_len);
    source.read(rec.id.data(), id_len);
    if (static_cast<std::uint32_t>(source.gcount()) != id_len) {
      throw Error(Errc::TruncatedFile, "record " + std::to_string(r) + " id cut short");
    }
    check_id(rec.id);
    if (!seen.insert(rec.id).second) throw Error(Errc::DuplicateId, rec.id);

    rec.vector.resize(store.dim);
    for (std::uint32_t i = 0; i < store.dim; ++i) {
      std::uint32_t bits = 0;
      if (!get_le(source, bits)) {
        throw Error(Errc::DimMismatch, "record '" + rec.id + "' has " + std::to_string(i) + " of " +
                                           std::to_string(store.dim) + " values");
      }
      float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "record '" + rec.id + "'");
      rec.vector[i] = v;
    }
    store.records.push_back(std::move(rec));
  }
  if (source.peek() != std::char_traits<char>::eof()) {
    throw Error(Errc::MalformedRow, "trailing bytes after " + std::to_string(count) + " records");
  }
  return store;
}

EmbeddingStore load_embedding_store(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_embedding_store(in);
}

void save_embedding_store(const EmbeddingStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path);
  write_embedding_store(store, out);
}

LabelTable read_labels(std::istream& text) {
  LabelTable labels;
  for_each_row(text, "id,label", [&](std::size_t line_no, const auto& fields) {
    auto [it, inserted] = labels.emplace(std::string(fields[0]), std::string(fields[1]));
    if (!inserted) {
      throw Error(Errc::DuplicateId, "line " + std::to_string(line_no) + ": " + it->first);
    }
  });
  return labels;
}

DistanceTable read_distance_table(std::istream& text) {
  DistanceTable table;
  std::set<std::string> seen;
  for_each_row(text, "id,distance", [&](std::size_t line_no, const auto& fields) {
    double d = 0.0;
    std::string_view num = fields[1];
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
    if (ec == std::errc::result_out_of_range) {
      throw Error(Errc::OutOfRange, "line " + std::to_string(line_no) + ": " + std::string(num));
    }
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
      throw Error(Errc::MalformedRow, "line " + std::to_string(line_no) + ": bad number '" + std::string(num) + "'");
    }
    if (!std::isfinite(d) || d < 0.0 || d > 2.0) {
      throw Error(Errc::OutOfRange, "line " + std::to_string(line_no) + ": distance " + std::string(num) +
                                        " outside [0, 2]");
    }
    std::string id(fields[0]);
    if (!seen.insert(id).second) throw Error(Errc::DuplicateId, id);
    table.push_back({std::move(id), d});
  });
  return table;
}

std::string format_distance(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.9g", value);
  return buf;
}

void write_distance_table(const DistanceTable& table, std::ostream& sink) {
  sink << "id,distance\n";
  for (const auto& e : table) {
    check_id(e.id);
    sink << e.id << ',' << format_distance(e.distance) << '\n';
  }
  if (!sink) throw Error(Errc::Io, "failed writing distance table");
}

}  // namespace threshgate
