#include "lognet/model.h"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

namespace lognet {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr const char* kFormatTag = "lognet-model";

ojson to_json(const ModelFile& m) {
  ojson j;
  j["format"] = kFormatTag;
  j["format_version"] = m.format_version;
  j["criterion"] = to_string(m.criterion);
  j["outcome"] = m.outcome;
  if (m.reason) j["reason"] = *m.reason;
  j["terminal_layer"] = m.terminal_layer;
  j["chi0"] = m.chi0;
  auto features = ojson::array();
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    ojson f;
    f["name"] = m.features[i].name;
    f["kind"] = to_string(m.features[i].kind);
    const auto& t = m.quantization.thresholds.at(i);
    if (t) {
      f["threshold"] = {{"u", t->u},
                        {"polarity", to_string(t->polarity)},
                        {"train_errors", t->train_errors},
                        {"degenerate", t->degenerate}};
    }
    features.push_back(std::move(f));
  }
  j["features"] = std::move(features);
  auto members = ojson::array();
  for (const auto& mem : m.members)
    members.push_back({{"expr", mem.expr.signature()}, {"mu", mem.mu}, {"layer", mem.layer}});
  j["members"] = std::move(members);
  j["config"] = m.config;
  j["trace"] = m.trace;
  return j;
}

// Digest input: sorted keys, compact, no digest field.
std::string canonical(const ojson& j) {
  json sorted = json::parse(j.dump());
  sorted.erase("digest");
  return sorted.dump();
}

template <typename T>
T get_field(const ojson& j, const char* key) {
  if (!j.contains(key)) throw ModelError(std::string("model file lacks field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ModelError(std::string("model field '") + key + "' has the wrong type");
  }
}

ojson layer_trace_json(const LayerTrace& t) {
  ojson j;
  j["layer"] = t.layer;
  j["generated"] = t.generated;
  j["passed"] = t.passed;
  j["deduped"] = t.deduped;
  j["truncated"] = t.truncated;
  j["survivors"] = t.survivors;
  j["min_mu"] = t.min_mu ? ojson(*t.min_mu) : ojson(nullptr);
  return j;
}

}  // namespace

const char* to_string(Criterion c) { return c == Criterion::kExterior ? "exterior" : "classic"; }

Criterion parse_criterion(const std::string& text) {
  if (text == "exterior") return Criterion::kExterior;
  if (text == "classic") return Criterion::kClassic;
  throw std::invalid_argument("unknown criterion '" + text + "' (expected exterior or classic)");
}

Collective ModelFile::collective() const { return collective(parse_fraction(chi0)); }

Collective ModelFile::collective(const Fraction& chi0_override) const {
  std::vector<Expr> exprs;
  exprs.reserve(members.size());
  for (const auto& m : members) exprs.push_back(m.expr);
  return Collective(std::move(exprs), chi0_override);
}

bool semantically_equal(const ModelFile& a, const ModelFile& b) { return canonical(to_json(a)) == canonical(to_json(b)); }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

ModelFile model_from_synthesis(const BooleanLearningSet& bset, const SynthesisResult& result,
                               const SynthesisConfig& config, const std::string& chi0) {
  ModelFile m;
  m.criterion = Criterion::kExterior;
  m.features = bset.features();
  m.quantization = bset.provenance();
  m.outcome = to_string(result.outcome);
  if (result.reason) m.reason = to_string(*result.reason);
  m.terminal_layer = result.layer;
  parse_fraction(chi0);
  m.chi0 = chi0;
  for (const auto& c : result.members) m.members.push_back({c.expr, c.mu, c.expr.depth()});
  m.config["max_layers"] = config.max_layers;
  m.config["width_cap"] = config.width_cap ? ojson(*config.width_cap) : ojson(nullptr);
  m.config["dedup"] = config.dedup;
  m.trace["sensor_shortcut"] = result.sensor_shortcut;
  m.trace["feature_mus"] = result.feature_mus;
  auto layers = ojson::array();
  for (const auto& t : result.trace) layers.push_back(layer_trace_json(t));
  m.trace["layers"] = std::move(layers);
  return m;
}

ModelFile model_from_classic(const BooleanLearningSet& bset, const ClassicResult& result,
                             const ClassicConfig& config, const std::string& chi0) {
  ModelFile m;
  m.criterion = Criterion::kClassic;
  m.features = bset.features();
  m.quantization = bset.provenance();
  m.outcome = result.mu == 0 ? "success" : "exhausted";
  m.terminal_layer = result.selected_layer;
  parse_fraction(chi0);
  m.chi0 = chi0;
  m.members.push_back({result.model, result.mu, result.model.depth()});
  m.config["alpha"] = config.alpha;
  m.config["beta"] = config.beta;
  m.config["delta"] = config.delta;
  m.config["freedom"] = config.freedom.to_string();
  m.config["split"] = to_string(config.split);
  m.config["seed"] = config.seed;
  m.config["max_layers"] = config.max_layers;
  m.trace["selected_layer"] = result.selected_layer;
  m.trace["layers_generated"] = result.layers_generated;
  m.trace["cr_min"] = result.cr_min;
  m.trace["freedom"] = result.freedom;
  m.trace["tied"] = result.tied_keys;
  m.trace["split"] = {{"a", result.split.a}, {"b", result.split.b}};
  auto layers = ojson::array();
  for (const auto& t : result.trace)
    layers.push_back({{"layer", t.layer},
                      {"generated", t.generated},
                      {"kept", t.kept},
                      {"cr_min", t.cr_min},
                      {"best", t.best_key}});
  m.trace["layers"] = std::move(layers);
  return m;
}

std::string serialize_model(const ModelFile& model) {
  ojson j = to_json(model);
  j["digest"] = sha256_hex(canonical(j));
  return j.dump(2) + "\n";
}

ModelFile parse_model(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  if (!j.is_object() || get_field<std::string>(j, "format") != kFormatTag)
    throw ModelError("not a lognet model file");
  const int version = get_field<int>(j, "format_version");
  if (version != kModelFormatVersion)
    throw ModelError("unsupported model format version " + std::to_string(version) + " (expected " +
                     std::to_string(kModelFormatVersion) + ")");
  const auto digest = get_field<std::string>(j, "digest");
  if (digest != sha256_hex(canonical(j))) throw ModelError("model digest mismatch: file is corrupted or edited");

  ModelFile m;
  try {
    m.criterion = parse_criterion(get_field<std::string>(j, "criterion"));
    m.outcome = get_field<std::string>(j, "outcome");
    if (j.contains("reason")) m.reason = get_field<std::string>(j, "reason");
    m.terminal_layer = get_field<std::size_t>(j, "terminal_layer");
    m.chi0 = get_field<std::string>(j, "chi0");
    parse_fraction(m.chi0);
    for (const auto& f : get_field<ojson>(j, "features")) {
      FeatureSpec spec{get_field<std::string>(f, "name"), parse_feature_kind(get_field<std::string>(f, "kind"))};
      std::optional<Threshold> t;
      if (f.contains("threshold")) {
        const auto& tj = f.at("threshold");
        t = Threshold{get_field<double>(tj, "u"), parse_polarity(get_field<std::string>(tj, "polarity")),
                      get_field<std::size_t>(tj, "train_errors"), get_field<bool>(tj, "degenerate")};
      }
      if (t.has_value() != (spec.kind == FeatureKind::kQuantitative))
        throw ModelError("feature '" + spec.name + "': threshold must be present exactly for quantitative features");
      m.features.push_back(std::move(spec));
      m.quantization.thresholds.push_back(t);
    }
    validate_feature_names(m.features);
    for (const auto& mem : get_field<ojson>(j, "members")) {
      Expr e = parse_signature(get_field<std::string>(mem, "expr"));
      for (std::size_t f : features_used(e)) {
        if (f >= m.features.size()) throw ModelError("member " + e.signature() + " reads an unknown sensor");
      }
      m.members.push_back({e, get_field<std::size_t>(mem, "mu"), get_field<std::size_t>(mem, "layer")});
    }
    if (m.members.empty()) throw ModelError("model has no members");
    m.config = get_field<ojson>(j, "config");
    m.trace = get_field<ojson>(j, "trace");
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelError(std::string("invalid model file: ") + e.what());
  }
  return m;
}

void save_model(const ModelFile& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write model file '" + path + "'");
  out << serialize_model(model);
  if (!out) throw ModelError("failed writing model file '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(text);
}

}  // namespace lognet
