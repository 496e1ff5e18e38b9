#include "roadq/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "roadq/errors.hpp"

namespace roadq {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys = {"sections", "convention", "model", "lambda",
                                        "sweep",    "exponential", "format"};
const std::set<std::string> kSectionKeys = {"L", "v_f", "w", "rho_j", "c", "convention"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

double number(const json& obj, const char* key, const std::string& field) {
  if (!obj.contains(key)) throw ConfigError(field, "missing");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(field, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

ServiceConvention convention_from(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "must be \"exact\" or \"shifted\"");
  const auto name = v.get<std::string>();
  const auto conv = parse_convention(name.c_str());
  if (!conv) throw ConfigError(field, "must be \"exact\" or \"shifted\", got \"" + name + "\"");
  return *conv;
}

SectionSpec section_from(const json& obj, const std::string& prefix) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "section" : prefix, "must be an object");
  reject_unknown(obj, kSectionKeys, prefix);
  SectionSpec s{number(obj, "L", prefix + "L"), number(obj, "v_f", prefix + "v_f"), number(obj, "w", prefix + "w"),
                number(obj, "rho_j", prefix + "rho_j"), std::nullopt};
  if (obj.contains("c")) {
    const auto& c = obj.at("c");
    const bool integral = c.is_number_integer() || (c.is_number() && std::floor(c.get<double>()) == c.get<double>());
    if (!integral) throw ConfigError(prefix + "c", "must be an integer");
    s.capacity = static_cast<int>(c.get<double>());
  }
  try {
    (void)s.build();
  } catch (const DomainError& e) {
    throw ConfigError(prefix.empty() ? "section" : prefix.substr(0, prefix.size() - 1), e.what());
  }
  return s;
}

json section_to_json(const SectionSpec& s) {
  json j = {{"L", s.length}, {"v_f", s.free_speed}, {"w", s.wave_speed}, {"rho_j", s.jam_density}};
  if (s.capacity) j["c"] = *s.capacity;
  return j;
}

}  // namespace

const char* to_string(ModelKind model) noexcept {
  switch (model) {
    case ModelKind::Triangular:
      return "triangular";
    case ModelKind::JainSmithLinear:
      return "linear";
    case ModelKind::JainSmithExponential:
      return "exponential";
  }
  return "triangular";
}

std::optional<ModelKind> parse_model(std::string_view name) noexcept {
  if (name == "triangular") return ModelKind::Triangular;
  if (name == "linear" || name == "jain-smith-linear") return ModelKind::JainSmithLinear;
  if (name == "exponential" || name == "jain-smith-exponential") return ModelKind::JainSmithExponential;
  return std::nullopt;
}

RoadSection SectionSpec::build() const {
  return RoadSection(length, TriangularDiagram(free_speed, wave_speed, jam_density), capacity);
}

std::vector<double> SweepSpec::grid() const {
  std::vector<double> xs(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) xs[k] = from + (to - from) * k / (steps - 1);
  xs.back() = to;
  return xs;
}

RoadSection ScenarioConfig::section(std::size_t index) const {
  if (index >= sections.size()) throw DomainError("scenario has no section " + std::to_string(index + 1));
  return sections[index].build();
}

TandemConfig ScenarioConfig::tandem() const {
  if (!is_tandem()) throw DomainError("scenario needs two sections for the downstream-supply model");
  return TandemConfig{section(0), section(1), convention};
}

LinearCongestionModel ScenarioConfig::linear_model(std::size_t index) const {
  const auto s = section(index);
  return LinearCongestionModel(s.diagram().free_speed(), s.capacity());
}

CongestionModel ScenarioConfig::congestion_model(std::size_t index) const {
  if (model == ModelKind::JainSmithExponential) {
    if (!exponential) throw DomainError("exponential model needs beta and gamma");
    const auto s = section(index);
    return ExponentialCongestionModel(s.diagram().free_speed(), exponential->beta, exponential->gamma,
                                      s.capacity());
  }
  return linear_model(index);
}

ScenarioConfig parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "must be a JSON object");

  ScenarioConfig cfg;
  std::optional<ServiceConvention> conv;
  auto merge_convention = [&conv](ServiceConvention c, const std::string& field) {
    if (conv && *conv != c) throw ConfigError(field, "sections must share one convention");
    conv = c;
  };

  if (doc.contains("sections")) {
    reject_unknown(doc, kTopKeys, "");
    const auto& arr = doc.at("sections");
    if (!arr.is_array() || arr.empty() || arr.size() > 2) throw ConfigError("sections", "must list 1 or 2 sections");
    if (doc.contains("convention")) merge_convention(convention_from(doc.at("convention"), "convention"), "convention");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string prefix = "sections[" + std::to_string(i) + "].";
      cfg.sections.push_back(section_from(arr[i], prefix));
      if (arr[i].contains("convention")) {
        merge_convention(convention_from(arr[i].at("convention"), prefix + "convention"), prefix + "convention");
      }
    }
  } else {
    std::set<std::string> keys = kTopKeys;
    keys.insert(kSectionKeys.begin(), kSectionKeys.end());
    keys.erase("sections");
    reject_unknown(doc, keys, "");
    json section = json::object();
    for (const auto& key : kSectionKeys) {
      if (doc.contains(key) && key != "convention") section[key] = doc.at(key);
    }
    cfg.sections.push_back(section_from(section, ""));
    if (doc.contains("convention")) merge_convention(convention_from(doc.at("convention"), "convention"), "convention");
  }
  if (conv) cfg.convention = *conv;

  if (doc.contains("model")) {
    const auto& m = doc.at("model");
    const auto kind = m.is_string() ? parse_model(m.get<std::string>()) : std::nullopt;
    if (!kind) throw ConfigError("model", "must be triangular, linear or exponential");
    cfg.model = *kind;
  }
  if (doc.contains("lambda")) {
    const double x = number(doc, "lambda", "lambda");
    if (x < 0.0) throw ConfigError("lambda", "must be nonnegative");
    cfg.lambda = x;
  }
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    if (!s.is_object()) throw ConfigError("sweep", "must be an object");
    reject_unknown(s, {"from", "to", "steps"}, "sweep.");
    SweepSpec sw{number(s, "from", "sweep.from"), number(s, "to", "sweep.to"), 0};
    const double steps = number(s, "steps", "sweep.steps");
    if (std::floor(steps) != steps || steps < 2) throw ConfigError("sweep.steps", "must be an integer >= 2");
    sw.steps = static_cast<int>(steps);
    if (sw.from < 0.0) throw ConfigError("sweep.from", "must be nonnegative");
    if (!(sw.to > sw.from)) throw ConfigError("sweep.to", "must exceed sweep.from");
    cfg.sweep = sw;
  }
  if (doc.contains("exponential")) {
    const auto& e = doc.at("exponential");
    if (!e.is_object()) throw ConfigError("exponential", "must be an object");
    reject_unknown(e, {"beta", "gamma"}, "exponential.");
    ExponentialFit fit{number(e, "beta", "exponential.beta"), number(e, "gamma", "exponential.gamma")};
    if (!(fit.beta > 0.0)) throw ConfigError("exponential.beta", "must be positive");
    if (!(fit.gamma > 0.0)) throw ConfigError("exponential.gamma", "must be positive");
    cfg.exponential = fit;
  }
  if (cfg.model == ModelKind::JainSmithExponential && !cfg.exponential) {
    throw ConfigError("exponential", "required when model is exponential");
  }
  if (doc.contains("format")) {
    const auto& f = doc.at("format");
    const auto name = f.is_string() ? f.get<std::string>() : std::string{};
    if (name == "json") {
      cfg.format = OutputFormat::Json;
    } else if (name == "csv") {
      cfg.format = OutputFormat::Csv;
    } else {
      throw ConfigError("format", "must be json or csv");
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file '" + path + "'");
  return parse_scenario(buf.str());
}

std::string to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["sections"] = json::array();
  for (const auto& s : cfg.sections) doc["sections"].push_back(section_to_json(s));
  doc["convention"] = to_string(cfg.convention);
  doc["model"] = to_string(cfg.model);
  if (cfg.lambda) doc["lambda"] = *cfg.lambda;
  if (cfg.sweep) doc["sweep"] = {{"from", cfg.sweep->from}, {"to", cfg.sweep->to}, {"steps", cfg.sweep->steps}};
  if (cfg.exponential) doc["exponential"] = {{"beta", cfg.exponential->beta}, {"gamma", cfg.exponential->gamma}};
  doc["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
  return doc.dump(2);
}

ScenarioConfig reference_scenario() {
  ScenarioConfig cfg;
  cfg.sections.push_back({100.0, 28.0, 14.0, 0.18, 18});
  cfg.sections.push_back({100.0, 14.0, 7.0, 0.18, 18});
  return cfg;
}

}  // namespace roadq
