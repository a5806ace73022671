// Kept in its own translation unit: httplib is large and only needed here.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <regex>

#include "stresseval/errors.hpp"
#include "stresseval/gateway.hpp"

namespace stresseval::llm {

HttpProvider::HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(options_.base_url, m, kUrl))
    throw Error("InvalidConfig", "provider.base_url must be an http(s) URL: " + options_.base_url);
  scheme_host_port_ = m[1];
  path_prefix_ = m[2].matched ? m[2].str() : "";
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpProvider::send(const CompletionRequest& req) {
  httplib::Client cli(scheme_host_port_);
  cli.set_connection_timeout(options_.timeout_seconds, 0);
  cli.set_read_timeout(options_.timeout_seconds, 0);
  cli.set_write_timeout(options_.timeout_seconds, 0);

  Json messages = Json::array();
  if (!req.system_prompt.empty())
    messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", req.user_prompt}});
  Json body{{"model", req.model_name},       {"messages", messages},
            {"temperature", req.temperature}, {"top_p", req.top_p},
            {"max_tokens", req.max_tokens}};

  httplib::Headers headers;
  if (!options_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  auto res = cli.Post(path_prefix_ + "/chat/completions", headers,
                      body.dump(-1, ' ', false, Json::error_handler_t::replace),
                      "application/json");
  if (!res) throw TransientProviderError(0, "network error: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500)
    throw TransientProviderError(res->status, res->body.substr(0, 200));
  if (res->status != 200) throw ProviderError(res->status, res->body.substr(0, 200));

  try {
    auto j = Json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception& e) {
    throw ProviderError(res->status, std::string("malformed completion body: ") + e.what());
  }
}

}  // namespace stresseval::llm
