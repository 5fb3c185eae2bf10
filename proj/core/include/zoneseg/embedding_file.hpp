#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace zoneseg {

// LEMB layout: "LEMB" | u32 version | u32 dim | u64 count | count*dim f32,
// all little endian. The sidecar "<path>.idx.jsonl" lists
// {"id", "start", "n"} row ranges in file order.
inline constexpr std::uint32_t kLembVersion = 1;
inline constexpr std::size_t kLembHeaderSize = 4 + 4 + 4 + 8;

std::string index_path_for(const std::string& embedding_path);

struct RowRange {
  std::uint64_t start = 0;
  std::uint64_t count = 0;
};

// Read-only view of an embedding file and its index. Loaded eagerly; safe for
// concurrent readers.
class EmbeddingFile {
 public:
  // Throws BadMagicError, VersionMismatchError, TruncatedFileError,
  // IndexMismatchError, or IoError.
  static EmbeddingFile open(const std::string& path);

  std::uint32_t dim() const { return dim_; }
  std::uint64_t count() const { return count_; }
  std::span<const float> row(std::uint64_t index) const;

  bool contains(std::string_view id) const;
  // Throws MissingIdError.
  const RowRange& range(std::string_view id) const;
  const std::vector<std::pair<std::string, RowRange>>& index() const {
    return ordered_index_;
  }

 private:
  std::uint32_t dim_ = 0;
  std::uint64_t count_ = 0;
  std::vector<float> data_;
  std::map<std::string, RowRange, std::less<>> index_;
  std::vector<std::pair<std::string, RowRange>> ordered_index_;
};

// Streams rows into a temporary file; commit() patches the row count, writes
// the index and renames both into place. Destroying an uncommitted writer
// removes the temporaries.
class EmbeddingWriter {
 public:
  EmbeddingWriter(std::string path, std::uint32_t dim);
  ~EmbeddingWriter();
  EmbeddingWriter(const EmbeddingWriter&) = delete;
  EmbeddingWriter& operator=(const EmbeddingWriter&) = delete;

  // Appends rows for one email; every row must have dim entries.
  void add_email(const std::string& id,
                 const std::vector<std::vector<float>>& rows);
  void commit();

  std::uint64_t count() const { return count_; }

 private:
  std::string path_;
  std::uint32_t dim_;
  std::uint64_t count_ = 0;
  bool committed_ = false;
  std::string temp_path_;
  std::vector<std::pair<std::string, RowRange>> index_;
  std::set<std::string> ids_;
  std::ofstream out_;
};

}  // namespace zoneseg
