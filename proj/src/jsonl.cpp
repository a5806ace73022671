#include "stresseval/jsonl.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace stresseval::jsonl {

std::string encode_line(Json record) {
  record["schema"] = kSchemaVersion;
  return record.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n";
}

Json decode_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ValidationError("ParseError", e.what());
  }
  if (!j.is_object()) throw ValidationError("InvalidRecord", "JSONL record must be an object");
  auto it = j.find("schema");
  if (it == j.end()) throw ValidationError("MissingField", "schema");
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion)
    throw ValidationError("InvalidRecord", "unsupported schema version " + it->dump());
  j.erase(it);
  return j;
}

void write_lines(const std::filesystem::path& path, const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) out += encode_line(r);
  write_file_atomic(path, out);
}

std::vector<Json> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("MissingInput", path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode_line(line));
    } catch (const Error& e) {
      throw ValidationError(e.kind(), path.string() + ":" + std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned long> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << std::this_thread::get_id() << "."
           << counter.fetch_add(1);
  auto tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("IoError", "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("MissingInput", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stresseval::jsonl
