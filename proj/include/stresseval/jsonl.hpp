#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/errors.hpp"

namespace stresseval::jsonl {

// One UTF-8 JSON document per line, "\n" terminated, each carrying
// "schema": kSchemaVersion.
std::string encode_line(Json record);

// Parses one line and checks/strips the schema field.
Json decode_line(const std::string& line);

void write_lines(const std::filesystem::path& path, const std::vector<Json>& records);
std::vector<Json> read_lines(const std::filesystem::path& path);

template <class T>
void write(const std::filesystem::path& path, const std::vector<T>& values) {
  std::vector<Json> records;
  records.reserve(values.size());
  for (const auto& v : values) records.push_back(serialize(v));
  write_lines(path, records);
}

template <class T>
std::vector<T> read(const std::filesystem::path& path) {
  std::vector<T> out;
  std::size_t line_no = 0;
  for (const auto& j : read_lines(path)) {
    ++line_no;
    try {
      out.push_back(j.get<T>());
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError("InvalidRecord", path.string() + ":" + std::to_string(line_no) +
                                                 ": " + e.what());
    }
  }
  return out;
}

// Writes `contents` atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace stresseval::jsonl
