#ifndef LOGNET_RENDER_H_
#define LOGNET_RENDER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lognet/collective.h"
#include "lognet/model.h"

namespace lognet {

// "wbc < 6.2", "joint_syndrome", "no joint_syndrome"; the phrase explaining
// what sensor `feature` taking `value` means for the raw feature.
std::string literal_phrase(const FeatureSpec& feature, const std::optional<Threshold>& threshold, bool value);

// One If/Then block for a combination of the enumerated sensors, judged at chi0.
std::string render_rule(const ModelFile& model, const std::vector<std::size_t>& features, const BitVector& bits,
                        const Decision& decision, std::size_t index, const Fraction& chi0);

struct RuleSelection {
  std::optional<Fraction> min_chi;
  std::optional<Fraction> max_chi;
  std::size_t limit = std::size_t{1} << kMaxCubeBits;
  bool all_features = false;  // enumerate every sensor instead of the used ones
};

// Rules for every enumerated combination passing the chi filters, in cube
// order. Returns the number of rules written.
std::size_t render_rules(const ModelFile& model, const Collective& collective, const RuleSelection& selection,
                         std::string& out);

// Rule for a single raw instance (quantized with the stored thresholds).
std::string render_instance_rule(const ModelFile& model, const Collective& collective, const std::vector<double>& raw);

// Trained-matrix view: one column per used sensor, one row per hidden node
// grouped by layer, gate ids at the connections, then the outputs y1..yL.
std::string render_matrix(const ModelFile& model);

}  // namespace lognet

#endif  // LOGNET_RENDER_H_
