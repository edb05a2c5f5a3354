#ifndef LOGNET_MODEL_H_
#define LOGNET_MODEL_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lognet/classic.h"
#include "lognet/collective.h"
#include "lognet/dataset.h"
#include "lognet/network.h"
#include "lognet/synthesis.h"

namespace lognet {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

enum class Criterion { kExterior, kClassic };

const char* to_string(Criterion c);
Criterion parse_criterion(const std::string& text);

struct ModelMember {
  Expr expr;
  std::size_t mu = 0;
  std::size_t layer = 0;
};

// Everything needed to classify new instances and to explain the model.
// Serialized as indented JSON; the digest is SHA-256 over the sorted-key
// compact form of every other field.
struct ModelFile {
  int format_version = kModelFormatVersion;
  Criterion criterion = Criterion::kExterior;
  std::vector<FeatureSpec> features;
  QuantizationSpec quantization;
  std::string outcome;                // "success" or "exhausted"
  std::optional<std::string> reason;  // exhaustion reason
  std::size_t terminal_layer = 0;
  std::string chi0 = kDefaultChi0;
  std::vector<ModelMember> members;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json trace = nlohmann::ordered_json::object();

  Collective collective() const;
  Collective collective(const Fraction& chi0_override) const;
};

bool semantically_equal(const ModelFile& a, const ModelFile& b);

ModelFile model_from_synthesis(const BooleanLearningSet& bset, const SynthesisResult& result,
                               const SynthesisConfig& config, const std::string& chi0);
ModelFile model_from_classic(const BooleanLearningSet& bset, const ClassicResult& result,
                             const ClassicConfig& config, const std::string& chi0);

std::string serialize_model(const ModelFile& model);
// Verifies format, version and digest. Throws ModelError.
ModelFile parse_model(const std::string& text);

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

// Lower-case hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace lognet

#endif  // LOGNET_MODEL_H_
