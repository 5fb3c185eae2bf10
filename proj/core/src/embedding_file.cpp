#include "zoneseg/embedding_file.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "zoneseg/error.hpp"
#include "zoneseg/io.hpp"

namespace zoneseg {

namespace {
constexpr char kMagic[4] = {'L', 'E', 'M', 'B'};
}

std::string index_path_for(const std::string& embedding_path) {
  return embedding_path + ".idx.jsonl";
}

EmbeddingFile EmbeddingFile::open(const std::string& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 4) throw TruncatedFileError("embedding file too short: " + path);
  if (std::string_view(bytes).substr(0, 4) != std::string_view(kMagic, 4)) {
    throw BadMagicError("not a LEMB embedding file: " + path);
  }
  detail::ByteReader reader(bytes);
  reader.take(4);
  EmbeddingFile file;
  std::uint32_t version;
  try {
    version = reader.get<std::uint32_t>();
    file.dim_ = reader.get<std::uint32_t>();
    file.count_ = reader.get<std::uint64_t>();
  } catch (const TruncatedFileError&) {
    throw TruncatedFileError("embedding header truncated: " + path);
  }
  if (version != kLembVersion) {
    throw VersionMismatchError("LEMB version " + std::to_string(version) +
                               " is not supported (expected " +
                               std::to_string(kLembVersion) + "): " + path);
  }
  if (file.dim_ == 0) throw FormatError("LEMB dimension is zero: " + path);

  const std::uint64_t payload = static_cast<std::uint64_t>(reader.remaining());
  const std::uint64_t row_bytes = std::uint64_t{file.dim_} * sizeof(float);
  if (payload / row_bytes < file.count_) {
    throw TruncatedFileError("LEMB header declares " + std::to_string(file.count_) +
                             " rows but file holds " +
                             std::to_string(payload / row_bytes) + ": " + path);
  }
  if (payload != file.count_ * row_bytes) {
    throw FormatError("LEMB file has trailing bytes: " + path);
  }
  file.data_.resize(file.count_ * file.dim_);
  for (float& value : file.data_) value = reader.get<float>();

  const std::string idx_path = index_path_for(path);
  std::istringstream idx(read_file(idx_path));
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t expected_start = 0;
  while (std::getline(idx, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string id;
    RowRange range;
    try {
      auto record = nlohmann::json::parse(line);
      id = record.at("id").get<std::string>();
      range.start = record.at("start").get<std::uint64_t>();
      range.count = record.at("n").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(idx_path + ": " + e.what(), line_no);
    }
    if (range.start != expected_start) {
      throw IndexMismatchError("index range for '" + id + "' starts at " +
                               std::to_string(range.start) + ", expected " +
                               std::to_string(expected_start) + ": " + idx_path);
    }
    expected_start = range.start + range.count;
    if (expected_start > file.count_) {
      throw IndexMismatchError("index range for '" + id +
                               "' runs past the row count: " + idx_path);
    }
    if (!file.index_.emplace(id, range).second) {
      throw IndexMismatchError("index repeats id '" + id + "': " + idx_path);
    }
    file.ordered_index_.emplace_back(id, range);
  }
  if (expected_start != file.count_) {
    throw IndexMismatchError("index covers " + std::to_string(expected_start) +
                             " rows, file holds " + std::to_string(file.count_) +
                             ": " + idx_path);
  }
  return file;
}

std::span<const float> EmbeddingFile::row(std::uint64_t index) const {
  if (index >= count_) {
    throw std::out_of_range("embedding row " + std::to_string(index) +
                            " out of range");
  }
  return {data_.data() + index * dim_, dim_};
}

bool EmbeddingFile::contains(std::string_view id) const {
  return index_.find(id) != index_.end();
}

const RowRange& EmbeddingFile::range(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw MissingIdError("email '" + std::string(id) +
                         "' is not in the embedding index");
  }
  return it->second;
}

EmbeddingWriter::EmbeddingWriter(std::string path, std::uint32_t dim)
    : path_(std::move(path)), dim_(dim), temp_path_(path_ + ".tmp") {
  if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
  out_.open(temp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open for writing", path_);
  std::string header(kMagic, 4);
  detail::put_le<std::uint32_t>(header, kLembVersion);
  detail::put_le<std::uint32_t>(header, dim_);
  detail::put_le<std::uint64_t>(header, 0);
  out_.write(header.data(), static_cast<std::streamsize>(header.size()));
}

EmbeddingWriter::~EmbeddingWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(temp_path_, ec);
  }
}

void EmbeddingWriter::add_email(const std::string& id,
                                const std::vector<std::vector<float>>& rows) {
  if (committed_) throw Error("embedding writer already committed");
  if (ids_.contains(id)) throw ValidationError("duplicate email id '" + id + "'");
  std::string buffer;
  buffer.reserve(rows.size() * dim_ * sizeof(float));
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw DimensionMismatchError("row for '" + id + "' has " +
                                   std::to_string(row.size()) +
                                   " values, expected " + std::to_string(dim_));
    }
    for (float value : row) detail::put_le<float>(buffer, value);
  }
  out_.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out_) throw IoError("write failed", path_);
  index_.emplace_back(id, RowRange{count_, rows.size()});
  ids_.insert(id);
  count_ += rows.size();
}

void EmbeddingWriter::commit() {
  if (committed_) return;
  std::string count_bytes;
  detail::put_le<std::uint64_t>(count_bytes, count_);
  out_.seekp(12);
  out_.write(count_bytes.data(), static_cast<std::streamsize>(count_bytes.size()));
  out_.close();
  if (!out_) throw IoError("write failed", path_);

  std::string idx;
  for (const auto& [id, range] : index_) {
    nlohmann::ordered_json record;
    record["id"] = id;
    record["start"] = range.start;
    record["n"] = range.count;
    idx += record.dump();
    idx += '\n';
  }
  write_file_atomic(index_path_for(path_), idx);
  std::error_code ec;
  std::filesystem::rename(temp_path_, path_, ec);
  if (ec) throw IoError("cannot rename into place", path_);
  committed_ = true;
}

}  // namespace zoneseg
