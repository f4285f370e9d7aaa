#include "gcae/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "gcae/error.hpp"
#include "gcae/random.hpp"

namespace gcae {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::InvalidConfig,
              "bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::vector<flow::Regime> parse_regime_list(std::string_view text) {
  std::vector<flow::Regime> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto tag = trim(text.substr(start, comma - start));
    if (!tag.empty()) out.push_back(flow::parse_regime(tag));
    start = comma + 1;
  }
  if (out.empty()) throw Error(ErrorKind::InvalidConfig, "regime list is empty");
  return out;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  auto& t = train;
  if (key == "seed") t.seed = to_uint(key, value);
  else if (key == "regime") t.regime = flow::parse_regime(value);
  else if (key == "regimes") regimes = parse_regime_list(value);
  else if (key == "hidden") t.hidden = to_uint(key, value);
  else if (key == "latent") t.latent = to_uint(key, value);
  else if (key == "depth") t.depth = to_uint(key, value);
  else if (key == "learning_rate") t.learning_rate = to_double(key, value);
  else if (key == "l2_lambda") t.l2_lambda = to_double(key, value);
  else if (key == "epochs") t.epochs = to_uint(key, value);
  else if (key == "beta1") t.beta1 = to_double(key, value);
  else if (key == "beta2") t.beta2 = to_double(key, value);
  else if (key == "epsilon") t.epsilon = to_double(key, value);
  else if (key == "final_activation") t.final_activation = nn::parse_final_activation(value);
  else if (key == "curve_interval") t.curve_interval = to_uint(key, value);
  else if (key == "count") count = to_uint(key, value);
  else if (key == "test_fraction") test_fraction = to_double(key, value);
  else if (key == "max_depth") shape.max_depth = to_uint(key, value);
  else if (key == "max_statements") shape.max_statements = to_uint(key, value);
  else if (key == "control_probability") shape.control_probability = to_double(key, value);
  else if (key == "recursion_probability") shape.recursion_probability = to_double(key, value);
  else if (key == "early_return_probability") shape.early_return_probability = to_double(key, value);
  else if (key == "source") source = value;
  else if (key == "extension") extension = value;
  else if (key == "manifest") manifest = value;
  else if (key == "vocab") vocab = value;
  else if (key == "out") out = value;
  else if (key == "reconstruct_k") reconstruct_k = to_uint(key, value);
  else throw Error(ErrorKind::InvalidConfig, "unknown key '" + std::string(key) + "'");
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  const auto& t = train;
  kv["seed"] = std::to_string(t.seed);
  kv["regime"] = flow::to_string(t.regime);
  std::string rl;
  for (auto r : regimes) rl += (rl.empty() ? "" : ",") + std::string(flow::to_string(r));
  kv["regimes"] = rl;
  kv["hidden"] = std::to_string(t.hidden);
  kv["latent"] = std::to_string(t.latent);
  kv["depth"] = std::to_string(t.depth);
  kv["learning_rate"] = format_double(t.learning_rate);
  kv["l2_lambda"] = format_double(t.l2_lambda);
  kv["epochs"] = std::to_string(t.epochs);
  kv["beta1"] = format_double(t.beta1);
  kv["beta2"] = format_double(t.beta2);
  kv["epsilon"] = format_double(t.epsilon);
  kv["final_activation"] = nn::to_string(t.final_activation);
  kv["curve_interval"] = std::to_string(t.curve_interval);
  kv["count"] = std::to_string(count);
  kv["test_fraction"] = format_double(test_fraction);
  kv["max_depth"] = std::to_string(shape.max_depth);
  kv["max_statements"] = std::to_string(shape.max_statements);
  kv["control_probability"] = format_double(shape.control_probability);
  kv["recursion_probability"] = format_double(shape.recursion_probability);
  kv["early_return_probability"] = format_double(shape.early_return_probability);
  kv["reconstruct_k"] = std::to_string(reconstruct_k);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t RunConfig::checksum() const { return fnv1a64(canonical()); }

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidConfig, "expected key = value", lineno);
    }
    cfg.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gcae
