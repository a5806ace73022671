#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "stresseval/domain.hpp"

namespace stresseval::llm {

struct CompletionRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  double top_p = 0.95;
  int max_tokens = 2048;
  std::string model_name;

  // Throws ValidationError on out-of-range decoding parameters.
  void validate() const;
  // Sorted-key JSON dump; the cache key and mock fixture names hash this.
  std::string canonical() const;
};

std::string sha256_hex(std::string_view data);

struct CacheKey {
  std::string digest;  // 64 lowercase hex characters

  static CacheKey of(const CompletionRequest& req);
  bool operator==(const CacheKey&) const = default;
};

class Provider {
 public:
  virtual ~Provider() = default;
  // Stable identifier; cache entries are partitioned by it.
  virtual std::string id() const = 0;
  virtual std::string send(const CompletionRequest& req) = 0;
};

// Serves <dir>/<digest>.txt and throws MockMiss for anything unscripted.
class MockProvider : public Provider {
 public:
  explicit MockProvider(std::filesystem::path fixtures_dir);
  std::string id() const override { return "mock"; }
  std::string send(const CompletionRequest& req) override;

 private:
  std::filesystem::path dir_;
};

class CallbackProvider : public Provider {
 public:
  using Fn = std::function<std::string(const CompletionRequest&)>;
  CallbackProvider(std::string id, Fn fn) : id_(std::move(id)), fn_(std::move(fn)) {}
  std::string id() const override { return id_; }
  std::string send(const CompletionRequest& req) override { return fn_(req); }

 private:
  std::string id_;
  Fn fn_;
};

// Forwards to `inner` and stores each response as a mock fixture.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(std::shared_ptr<Provider> inner, std::filesystem::path fixtures_dir);
  std::string id() const override { return inner_->id(); }
  std::string send(const CompletionRequest& req) override;

 private:
  std::shared_ptr<Provider> inner_;
  std::filesystem::path dir_;
};

struct HttpProviderOptions {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;
  int timeout_seconds = 120;
};

// OpenAI-compatible /chat/completions client.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderOptions options);
  std::string id() const override { return "http:" + options_.base_url; }
  std::string send(const CompletionRequest& req) override;

 private:
  HttpProviderOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

struct GatewayOptions {
  std::optional<std::filesystem::path> cache_dir;
  int max_attempts = 4;
  std::chrono::milliseconds base_backoff{500};
  // Injected so tests can observe backoff without sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;
  // When set, one JSON line per call with character/token counts.
  std::optional<std::filesystem::path> usage_log;
};

struct UsageSnapshot {
  std::size_t calls = 0;
  std::size_t cache_hits = 0;
  std::size_t provider_calls = 0;
  std::size_t retries = 0;
  std::size_t prompt_chars = 0;
  std::size_t prompt_tokens = 0;
  std::size_t response_chars = 0;
  std::size_t response_tokens = 0;
};

class Gateway {
 public:
  Gateway(std::shared_ptr<Provider> provider, GatewayOptions options = {});

  // Cache lookup, then provider call with exponential backoff on transient
  // errors. Safe to call from multiple threads.
  std::string complete(const CompletionRequest& req);

  UsageSnapshot usage() const;
  const Provider& provider() const { return *provider_; }

 private:
  std::optional<std::string> cache_get(const CacheKey& key) const;
  void cache_put(const CacheKey& key, const std::string& value) const;
  void log_usage(const CompletionRequest& req, const CacheKey& key, const std::string& response,
                 bool cached);

  std::shared_ptr<Provider> provider_;
  GatewayOptions options_;
  std::optional<std::filesystem::path> cache_root_;

  std::atomic<std::size_t> calls_{0}, cache_hits_{0}, provider_calls_{0}, retries_{0};
  std::atomic<std::size_t> prompt_chars_{0}, prompt_tokens_{0};
  std::atomic<std::size_t> response_chars_{0}, response_tokens_{0};
  std::mutex log_mu_;
};

// One backbone model by default, with optional per-role overrides
// ("analyzer", "generator", "reviewer", "target", ...).
struct RoleModels {
  std::string default_model = "mock-backbone";
  std::map<std::string, std::string, std::less<>> overrides;

  const std::string& for_role(std::string_view role) const {
    auto it = overrides.find(role);
    return it == overrides.end() ? default_model : it->second;
  }
};

// Extracts the first balanced top-level JSON object from model output.
// Code fences are stripped; surrounding prose is ignored. Throws
// ValidationError(NoJsonFound | ParseError) and never anything else.
Json extract_json(std::string_view text);

}  // namespace stresseval::llm
