#include "stresseval/gateway.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "stresseval/errors.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/text.hpp"

namespace stresseval::llm {
namespace {

std::string sanitize_dir_name(std::string_view id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out.empty() ? "default" : out;
}

// Position of the brace closing the object that opens at `open`, or npos.
std::size_t match_object(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      ++depth;
    } else if (c == '}' || c == ']') {
      if (--depth == 0) return c == '}' ? i : std::string_view::npos;
    }
  }
  return std::string_view::npos;
}

std::optional<std::string_view> fenced_body(std::string_view s) {
  auto open = s.find("```");
  if (open == std::string_view::npos) return std::nullopt;
  auto body_start = s.find('\n', open);
  if (body_start == std::string_view::npos) return std::nullopt;
  ++body_start;
  auto close = s.find("```", body_start);
  if (close == std::string_view::npos) return s.substr(body_start);
  return s.substr(body_start, close - body_start);
}

Json parse_first_object(std::string_view s, std::size_t base_offset) {
  auto open = s.find('{');
  if (open == std::string_view::npos) throw ValidationError("NoJsonFound", "no '{' in text");
  auto close = match_object(s, open);
  if (close == std::string_view::npos)
    throw ValidationError("ParseError", "unbalanced object starting at position " +
                                            std::to_string(base_offset + open));
  try {
    return Json::parse(s.substr(open, close - open + 1));
  } catch (const Json::parse_error& e) {
    throw ValidationError("ParseError", "position " + std::to_string(base_offset + open + e.byte) +
                                            ": " + e.what());
  }
}

}  // namespace

void CompletionRequest::validate() const {
  if (!(temperature >= 0.0)) throw ValidationError("InvalidRequest", "temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ValidationError("InvalidRequest", "top_p must be in (0, 1]");
  if (max_tokens <= 0) throw ValidationError("InvalidRequest", "max_tokens must be positive");
}

std::string CompletionRequest::canonical() const {
  Json j{{"max_tokens", max_tokens}, {"model", model_name},         {"system", system_prompt},
         {"temperature", temperature}, {"top_p", top_p},           {"user", user_prompt}};
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("DigestError", "EVP_Digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

CacheKey CacheKey::of(const CompletionRequest& req) { return CacheKey{sha256_hex(req.canonical())}; }

MockProvider::MockProvider(std::filesystem::path fixtures_dir) : dir_(std::move(fixtures_dir)) {}

std::string MockProvider::send(const CompletionRequest& req) {
  const auto key = CacheKey::of(req);
  std::ifstream in(dir_ / (key.digest + ".txt"), std::ios::binary);
  if (!in) throw MockMiss(key.digest);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RecordingProvider::RecordingProvider(std::shared_ptr<Provider> inner,
                                     std::filesystem::path fixtures_dir)
    : inner_(std::move(inner)), dir_(std::move(fixtures_dir)) {}

std::string RecordingProvider::send(const CompletionRequest& req) {
  auto out = inner_->send(req);
  jsonl::write_file_atomic(dir_ / (CacheKey::of(req).digest + ".txt"), out);
  return out;
}

Gateway::Gateway(std::shared_ptr<Provider> provider, GatewayOptions options)
    : provider_(std::move(provider)), options_(std::move(options)) {
  if (!provider_) throw Error("InvalidArgument", "gateway needs a provider");
  if (options_.max_attempts < 1) options_.max_attempts = 1;
  if (!options_.sleep)
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (options_.cache_dir) {
    cache_root_ = *options_.cache_dir / sanitize_dir_name(provider_->id());
    std::filesystem::create_directories(*cache_root_);
  }
}

std::optional<std::string> Gateway::cache_get(const CacheKey& key) const {
  if (!cache_root_) return std::nullopt;
  std::ifstream in(*cache_root_ / (key.digest + ".txt"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Gateway::cache_put(const CacheKey& key, const std::string& value) const {
  if (!cache_root_) return;
  jsonl::write_file_atomic(*cache_root_ / (key.digest + ".txt"), value);
}

void Gateway::log_usage(const CompletionRequest& req, const CacheKey& key,
                        const std::string& response, bool cached) {
  const std::size_t p_chars = req.system_prompt.size() + req.user_prompt.size();
  const std::size_t p_tokens =
      text::count_ws_tokens(req.system_prompt) + text::count_ws_tokens(req.user_prompt);
  const std::size_t r_tokens = text::count_ws_tokens(response);
  prompt_chars_ += p_chars;
  prompt_tokens_ += p_tokens;
  response_chars_ += response.size();
  response_tokens_ += r_tokens;
  if (!options_.usage_log) return;
  Json line{{"digest", key.digest},         {"model", req.model_name},
            {"cached", cached},             {"prompt_chars", p_chars},
            {"prompt_tokens", p_tokens},    {"response_chars", response.size()},
            {"response_tokens", r_tokens}};
  std::lock_guard lock(log_mu_);
  std::ofstream out(*options_.usage_log, std::ios::app);
  out << line.dump() << "\n";
}

std::string Gateway::complete(const CompletionRequest& req) {
  req.validate();
  ++calls_;
  const auto key = CacheKey::of(req);
  if (auto hit = cache_get(key)) {
    ++cache_hits_;
    log_usage(req, key, *hit, true);
    return *hit;
  }
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    try {
      ++provider_calls_;
      auto out = provider_->send(req);
      cache_put(key, out);
      log_usage(req, key, out, false);
      return out;
    } catch (const TransientProviderError& e) {
      last_error = e.what();
      if (attempt == options_.max_attempts) break;
      ++retries_;
      options_.sleep(options_.base_backoff * (1LL << (attempt - 1)));
    }
  }
  throw RetriesExhausted(options_.max_attempts, last_error);
}

UsageSnapshot Gateway::usage() const {
  return UsageSnapshot{calls_.load(),        cache_hits_.load(),    provider_calls_.load(),
                       retries_.load(),      prompt_chars_.load(),  prompt_tokens_.load(),
                       response_chars_.load(), response_tokens_.load()};
}

Json extract_json(std::string_view text) {
  try {
    if (auto body = fenced_body(text)) {
      if (body->find('{') != std::string_view::npos)
        return parse_first_object(*body, static_cast<std::size_t>(body->data() - text.data()));
    }
    return parse_first_object(text, 0);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError("ParseError", e.what());
  }
}

}  // namespace stresseval::llm
