#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace threshgate {

struct EmbeddingRecord {
  std::string id;
  std::vector<float> vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

struct EmbeddingStore {
  std::uint32_t dim = 0;
  std::vector<EmbeddingRecord> records;

  bool operator==(const EmbeddingStore&) const = default;
};

struct DistanceEntry {
  std::string id;
  double distance = 0.0;

  bool operator==(const DistanceEntry&) const = default;
};

using DistanceTable = std::vector<DistanceEntry>;

// id -> class label
using LabelTable = std::map<std::string, std::string>;

/// Binary store layout (little-endian): "EMB1", u32 version, u32 dim, u64 count,
/// then per record u32 id length, id bytes, dim x f32.
inline constexpr char kStoreMagic[4] = {'E', 'M', 'B', '1'};
inline constexpr std::uint32_t kStoreVersion = 1;

/// Throws Error{InvalidId, DuplicateId, DimMismatch, NonFiniteValue} if the store
/// breaks an invariant, and Error{Io} if the sink fails.
void write_embedding_store(const EmbeddingStore& store, std::ostream& sink);

/// Reads a complete store. Nothing is returned unless the whole stream validates.
EmbeddingStore read_embedding_store(std::istream& source);

EmbeddingStore load_embedding_store(const std::string& path);
void save_embedding_store(const EmbeddingStore& store, const std::string& path);

LabelTable read_labels(std::istream& text);

DistanceTable read_distance_table(std::istream& text);
void write_distance_table(const DistanceTable& table, std::ostream& sink);

/// Formats a real with 9 significant digits, trailing zeros kept ("0.500000000").
std::string format_distance(double value);

}  // namespace threshgate
