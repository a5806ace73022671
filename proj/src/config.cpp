#include "stresseval/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "stresseval/errors.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/text.hpp"

namespace stresseval::config {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& what) { throw ValidationError("InvalidConfig", what); }

bool to_bool(const std::string& key, const std::string& v) {
  const auto s = text::to_lower(text::trim(v));
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(key + ": expected a boolean, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used == text::trim(v).size()) return n;
  } catch (const std::exception&) {
  }
  bad(key + ": expected an integer, got '" + v + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used == text::trim(v).size()) return d;
  } catch (const std::exception&) {
  }
  bad(key + ": expected a number, got '" + v + "'");
}

}  // namespace

SeedSpec parse_seed_spec(const std::string& spec, ingest::SeedFormat default_format) {
  auto colon = spec.find(':');
  if (colon != std::string::npos && colon > 0) {
    try {
      return SeedSpec{ingest::parse_format(spec.substr(0, colon)), spec.substr(colon + 1)};
    } catch (const ValidationError&) {
      // not a format prefix; treat the whole thing as a path
    }
  }
  return SeedSpec{default_format, spec};
}

void PipelineConfig::validate() const {
  if (!allow_any_fanout && (fanout < 5 || fanout > 10))
    bad("fanout must lie in [5, 10] (got " + std::to_string(fanout) + "); see allow_any_fanout");
  if (fanout < 0) bad("fanout must be non-negative");
  if (workers < 1) bad("workers must be >= 1");
  if (max_attempts < 1) bad("max_attempts must be >= 1");
  if (min_confidence && (*min_confidence < 0.0 || *min_confidence > 1.0))
    bad("min_confidence must lie in [0, 1]");
}

void apply_ini(const std::string& text_body, PipelineConfig& cfg) {
  pt::ptree tree;
  try {
    std::istringstream in(text_body);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    bad(e.what());
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) bad("key outside a section: " + section);
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string v = text::trim(node.data());
      if (section == "provider") {
        if (key == "base_url") cfg.base_url = v;
        else if (key == "model") cfg.models.default_model = v;
        else if (key == "mock_fixtures") cfg.mock_fixtures = v;
        else if (key == "timeout_seconds") cfg.timeout_seconds = to_int(name, v);
        else bad("unknown key " + name);
      } else if (section == "models") {
        cfg.models.overrides[key] = v;
      } else if (section == "retry") {
        if (key == "max_attempts") cfg.max_attempts = to_int(name, v);
        else if (key == "base_backoff_ms") cfg.base_backoff_ms = to_int(name, v);
        else bad("unknown key " + name);
      } else if (section == "cache") {
        if (key == "dir") cfg.cache_dir = v;
        else if (key == "usage_log") cfg.usage_log = v;
        else bad("unknown key " + name);
      } else if (section == "pipeline") {
        if (key == "fanout") cfg.fanout = to_int(name, v);
        else if (key == "allow_any_fanout") cfg.allow_any_fanout = to_bool(name, v);
        else if (key == "workers") cfg.workers = to_int(name, v);
        else if (key == "min_confidence") cfg.min_confidence = to_double(name, v);
        else if (key == "blocklist") cfg.blocklist = v;
        else if (key == "root_cause_map") cfg.root_cause_map = v;
        else if (key == "out_dir") cfg.out_dir = v;
        else if (key == "seeds") {
          cfg.seeds.clear();
          for (const auto& s : text::split(v, ','))
            if (!text::trim(s).empty())
              cfg.seeds.push_back(parse_seed_spec(text::trim(s), ingest::SeedFormat::Native));
        } else {
          bad("unknown key " + name);
        }
      } else if (section == "ablation") {
        auto& a = cfg.ablations;
        const bool b = to_bool(name, v);
        if (key == "no_error_analysis") a.no_error_analysis = b;
        else if (key == "no_gating") a.no_gating = b;
        else if (key == "no_black_box") a.no_black_box = b;
        else if (key == "no_freeze_source") a.no_freeze_source = b;
        else if (key == "no_virtual_source") a.no_virtual_source = b;
        else if (key == "no_skeleton") a.no_skeleton = b;
        else bad("unknown key " + name);
      } else {
        bad("unknown section [" + section + "]");
      }
    }
  }
}

void load_ini_file(const std::filesystem::path& path, PipelineConfig& cfg) {
  if (!std::filesystem::exists(path)) throw Error("MissingInput", path.string());
  apply_ini(jsonl::read_file(path), cfg);
}

std::shared_ptr<llm::Gateway> make_gateway(const PipelineConfig& cfg,
                                           const std::optional<std::string>& api_key) {
  std::shared_ptr<llm::Provider> provider;
  if (cfg.mock_fixtures) {
    if (!std::filesystem::is_directory(*cfg.mock_fixtures))
      throw Error("MissingInput", cfg.mock_fixtures->string());
    provider = std::make_shared<llm::MockProvider>(*cfg.mock_fixtures);
  } else if (!cfg.base_url.empty()) {
    if (!api_key || api_key->empty())
      throw ValidationError("NoProvider", "STRESSEVAL_API_KEY is not set");
    provider = std::make_shared<llm::HttpProvider>(
        llm::HttpProviderOptions{cfg.base_url, *api_key, cfg.timeout_seconds});
  } else {
    throw ValidationError("NoProvider", "set provider.base_url or --mock-fixtures");
  }
  llm::GatewayOptions opt;
  opt.cache_dir = cfg.cache_dir;
  opt.max_attempts = cfg.max_attempts;
  opt.base_backoff = std::chrono::milliseconds(cfg.base_backoff_ms);
  opt.usage_log = cfg.usage_log;
  return std::make_shared<llm::Gateway>(provider, opt);
}

}  // namespace stresseval::config
