#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ontoflux/error.hpp"
#include "ontoflux/io.hpp"
#include "text_cursor.hpp"

namespace ontoflux {

namespace {

// Grid expansion order; the last key varies fastest.
const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "regime", "base_stock", "demand_rate", "lead_mu", "lead_r", "review_period", "horizon",
      "warmup", "seed", "holding_cost", "lost_penalty", "processing_cost", "inventory_metric"};
  return keys;
}

const std::vector<std::string> kMandatory = {"regime", "base_stock", "demand_rate", "lead_mu",
                                             "lead_r", "horizon", "warmup", "seed"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T number(const std::string& key, const std::string& value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw InvalidConfig("bad value for " + key + ": '" + value + "'");
  return out;
}

Regime parse_regime(const std::string& value) {
  if (value == "exo") return Regime::Exogenous;
  if (value == "endo") return Regime::Endogenous;
  if (value == "exo-iid") return Regime::ExogenousIID;
  throw InvalidConfig("unknown regime '" + value + "' (exo, endo, exo-iid)");
}

void apply(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "regime") cfg.regime = parse_regime(value);
  else if (key == "base_stock") cfg.base_stock = number<int>(key, value);
  else if (key == "demand_rate") cfg.demand_rate = number<double>(key, value);
  else if (key == "lead_mu") cfg.lead.mu = number<double>(key, value);
  else if (key == "lead_r") cfg.lead.r = number<double>(key, value);
  else if (key == "review_period") cfg.review_period = number<double>(key, value);
  else if (key == "horizon") cfg.horizon = number<double>(key, value);
  else if (key == "warmup") cfg.warmup = number<double>(key, value);
  else if (key == "seed") cfg.seed = number<std::uint64_t>(key, value);
  else if (key == "holding_cost") cfg.costs.holding = number<double>(key, value);
  else if (key == "lost_penalty") cfg.costs.lost_penalty = number<double>(key, value);
  else if (key == "processing_cost") cfg.costs.processing = number<double>(key, value);
  else if (key == "inventory_metric") {
    if (value == "on_hand") cfg.inventory_metric = InventoryMetric::OnHand;
    else if (value == "position") cfg.inventory_metric = InventoryMetric::Position;
    else throw InvalidConfig("unknown inventory_metric '" + value + "' (on_hand, position)");
  } else {
    throw InvalidConfig("unknown key '" + key + "'");
  }
}

std::map<std::string, std::vector<std::string>> read_pairs(std::string_view text) {
  std::map<std::string, std::vector<std::string>> pairs;
  int line_no = 0;
  for (const auto line : detail::split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfig("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw InvalidConfig("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (pairs.contains(key)) throw InvalidConfig("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    std::vector<std::string> values;
    std::string_view rest = line.substr(eq + 1);
    for (;;) {
      const auto comma = rest.find(',');
      values.push_back(trim(rest.substr(0, comma)));
      if (values.back().empty()) throw InvalidConfig("line " + std::to_string(line_no) + ": empty value");
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    pairs[key] = std::move(values);
  }
  for (const auto& key : kMandatory)
    if (!pairs.contains(key)) throw InvalidConfig("missing key '" + key + "'");
  return pairs;
}

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::vector<SimConfig> parse_config_grid(std::string_view text) {
  const auto pairs = read_pairs(text);
  std::vector<SimConfig> grid{SimConfig{}};
  for (const auto& key : config_keys()) {
    const auto it = pairs.find(key);
    if (it == pairs.end()) continue;
    std::vector<SimConfig> next;
    for (const auto& cfg : grid) {
      for (const auto& value : it->second) {
        SimConfig c = cfg;
        apply(c, key, value);
        next.push_back(c);
      }
    }
    grid = std::move(next);
  }
  for (const auto& cfg : grid) cfg.validate();
  return grid;
}

SimConfig parse_config(std::string_view text) {
  const auto pairs = read_pairs(text);
  for (const auto& [key, values] : pairs)
    if (values.size() != 1) throw InvalidConfig("key '" + key + "' has several values; use sweep");
  return parse_config_grid(text).front();
}

std::vector<std::uint64_t> parse_seed_range(std::string_view text) {
  const std::string s = trim(text);
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {number<std::uint64_t>("seeds", s)};
  const auto a = number<std::uint64_t>("seeds", s.substr(0, dots));
  const auto b = number<std::uint64_t>("seeds", s.substr(dots + 2));
  if (b < a) throw InvalidConfig("empty seed range '" + s + "'");
  std::vector<std::uint64_t> out;
  for (auto x = a; x <= b; ++x) {
    out.push_back(x);
    if (x == b) break;
  }
  return out;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols = {
      "regime", "base_stock", "demand_rate", "lead_mu", "lead_r", "review_period", "horizon",
      "warmup", "seed", "holding_cost", "lost_penalty", "processing_cost", "inventory_metric",
      "fill_rate", "avg_on_hand", "long_run_avg_cost", "service_time_mean", "service_time_var",
      "lost_count", "served_count", "wall_time_s"};
  return cols;
}

namespace {

std::vector<std::string> result_fields(const ResultRecord& r) {
  const auto& c = r.config;
  const auto& s = r.stats;
  return {to_string(c.regime), std::to_string(c.base_stock), g9(c.demand_rate), g9(c.lead.mu), g9(c.lead.r),
          g9(c.review_period), g9(c.horizon), g9(c.warmup), std::to_string(c.seed), g9(c.costs.holding),
          g9(c.costs.lost_penalty), g9(c.costs.processing),
          c.inventory_metric == InventoryMetric::OnHand ? "on_hand" : "position", g9(s.fill_rate),
          g9(s.avg_on_hand), g9(s.long_run_avg_cost), g9(s.service_time_mean), g9(s.service_time_var),
          std::to_string(s.lost_count), std::to_string(s.served_count), g9(r.wall_time_s)};
}

nlohmann::ordered_json json_record(const ResultRecord& r) {
  const auto fields = result_fields(r);
  const auto& cols = result_columns();
  nlohmann::ordered_json j;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& name = cols[i];
    if (name == "regime" || name == "inventory_metric") j[name] = fields[i];
    else if (name == "base_stock") j[name] = r.config.base_stock;
    else if (name == "seed") j[name] = r.config.seed;
    else if (name == "lost_count") j[name] = r.stats.lost_count;
    else if (name == "served_count") j[name] = r.stats.served_count;
    else j[name] = std::stod(fields[i]);  // already rounded to 9 digits
  }
  return j;
}

}  // namespace

std::string csv_header() {
  std::string out;
  for (const auto& col : result_columns()) out += (out.empty() ? "" : ",") + col;
  return out;
}

std::string to_csv_row(const ResultRecord& record) {
  std::string out;
  bool first = true;
  for (const auto& field : result_fields(record)) {
    if (!first) out += ',';
    out += field;
    first = false;
  }
  return out;
}

std::string to_json(const ResultRecord& record) { return json_record(record).dump(); }

std::string to_json(const std::vector<ResultRecord>& records) {
  std::string out = "[";
  for (std::size_t i = 0; i < records.size(); ++i) out += (i ? ",\n " : "\n ") + to_json(records[i]);
  return out + (records.empty() ? "]" : "\n]");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ontoflux
