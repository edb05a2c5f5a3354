#include "lognet/cli.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "lognet/analysis.h"
#include "lognet/collective.h"
#include "lognet/model.h"
#include "lognet/render.h"

namespace lognet {
namespace {

BooleanLearningSet load_learning_set(const std::string& csv, const std::string& schema_path) {
  std::optional<Schema> schema;
  if (!schema_path.empty()) schema = load_schema(schema_path);
  return binarize(load_csv(csv, schema));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("invalid number '" + text + "'");
  return v;
}

std::string join_members(const std::vector<Candidate>& members) {
  std::string s;
  for (const auto& c : members) {
    if (!s.empty()) s += "; ";
    s += c.expr.signature();
  }
  return s;
}

void print_trace(const SynthesisResult& r, std::ostream& err) {
  err << "sensor mu:";
  for (auto mu : r.feature_mus) err << ' ' << mu;
  err << '\n';
  if (r.sensor_shortcut) err << "a raw sensor already separates the classes (layer 0)\n";
  for (const auto& t : r.trace) {
    err << "layer " << t.layer << ": generated " << t.generated << ", passed " << t.passed << ", deduped "
        << t.deduped << ", truncated " << t.truncated << ", survivors " << t.survivors << ", min mu "
        << (t.min_mu ? std::to_string(*t.min_mu) : std::string("-")) << '\n';
  }
}

void print_classic_trace(const ClassicResult& r, std::ostream& err) {
  for (const auto& t : r.trace) {
    err << "layer " << t.layer << ": generated " << t.generated << ", kept " << t.kept << ", CR_min " << t.cr_min
        << " (" << t.best_key << ")\n";
  }
}

// Maps model features onto CSV columns by name.
std::vector<std::size_t> locate_features(const ModelFile& model, const std::vector<std::string>& header) {
  std::vector<std::size_t> cols;
  for (const auto& f : model.features) {
    auto it = std::find(header.begin(), header.end(), f.name);
    if (it == header.end()) throw DatasetError("input CSV lacks model feature '" + f.name + "'");
    cols.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return cols;
}

std::vector<double> parse_row(const std::vector<std::string>& cells, const std::vector<std::size_t>& cols,
                              const std::vector<std::string>& header) {
  if (cells.size() != header.size())
    throw DatasetError("expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
  std::vector<double> raw;
  raw.reserve(cols.size());
  for (std::size_t c : cols) {
    try {
      raw.push_back(parse_double(cells[c]));
    } catch (const std::exception&) {
      throw DatasetError("column '" + header[c] + "': non-numeric value '" + cells[c] + "'");
    }
  }
  return raw;
}

struct TrainOptions {
  std::string csv;
  std::string schema;
  std::string out;
  std::string criterion = "exterior";
  std::string chi0 = kDefaultChi0;
  std::size_t max_layers = 32;
  std::optional<std::size_t> width_cap;
  bool no_dedup = false;
  std::size_t threads = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double delta = 0.0;
  std::string freedom = "0.4";
  std::string split = "interleave";
  std::uint64_t seed = 0;
  bool verbose = false;
};

SplitStrategy parse_split(const std::string& s) {
  if (s == "interleave") return SplitStrategy::kInterleave;
  if (s == "random") return SplitStrategy::kSeededRandom;
  throw std::invalid_argument("unknown split '" + s + "' (expected interleave or random)");
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const Criterion criterion = parse_criterion(o.criterion);
  const Fraction chi0 = parse_fraction(o.chi0);
  if (chi0.num == 0 || chi0 > Fraction{1, 1}) throw std::invalid_argument("--chi0 must lie in (0, 1]");
  const BooleanLearningSet bset = load_learning_set(o.csv, o.schema);

  ModelFile model;
  bool exhausted = false;
  if (criterion == Criterion::kExterior) {
    SynthesisConfig cfg;
    cfg.max_layers = o.max_layers;
    cfg.width_cap = o.width_cap;
    cfg.dedup = !o.no_dedup;
    cfg.threads = o.threads;
    const SynthesisResult r = synthesize(bset, cfg);
    if (o.verbose) print_trace(r, err);
    model = model_from_synthesis(bset, r, cfg, o.chi0);
    exhausted = r.outcome == Outcome::kExhausted;
    out << "outcome " << to_string(r.outcome);
    if (r.reason) out << " (" << to_string(*r.reason) << ")";
    out << ", layer " << r.layer << ", members " << r.members.size() << ", mu " << r.best_mu << '\n';
    if (exhausted) {
      err << "warning: no error-free network found (stopped at layer " << r.layer << ", best mu " << r.best_mu
          << "); expand input variable structure or revise the learning set\n";
    }
  } else {
    ClassicConfig cfg;
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    cfg.delta = o.delta;
    cfg.freedom = Freedom::parse(o.freedom);
    cfg.split = parse_split(o.split);
    cfg.seed = o.seed;
    cfg.max_layers = o.max_layers;
    const ClassicResult r = synthesize_classic(bset, cfg);
    if (o.verbose) print_classic_trace(r, err);
    model = model_from_classic(bset, r, cfg, o.chi0);
    exhausted = r.mu != 0;
    out << "classic selection at layer " << r.selected_layer << " (CR_min " << r.cr_min << "), structure "
        << r.model.signature() << ", mu " << r.mu << '\n';
    if (exhausted) {
      err << "warning: selected network misclassifies " << r.mu
          << " learning instances; expand input variable structure or revise the learning set\n";
    }
  }
  save_model(model, o.out);
  out << "model written to " << o.out << '\n';
  return exhausted ? kExitExhausted : kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& csv, const std::string& chi0_text,
                std::ostream& out, std::ostream& err) {
  const ModelFile model = load_model(model_path);
  const Collective c = model.collective(parse_fraction(chi0_text.empty() ? model.chi0 : chi0_text));
  const RawTable table = parse_raw_csv(read_file(csv));
  const auto cols = locate_features(model, table.header);
  out << "row,label,l1,L,chi,plausible\n";
  bool failed = false;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    try {
      const auto raw = parse_row(table.rows[i], cols, table.header);
      const Decision d = vote(c, binarize_row(model.features, model.quantization, raw));
      out << i << ',' << to_string(d.label) << ',' << d.l1 << ',' << d.L << ',' << format_decimal(d.chi) << ','
          << (d.plausible ? "true" : "false") << '\n';
    } catch (const DatasetError& e) {
      err << "row " << i << ": " << e.what() << '\n';
      failed = true;
    }
  }
  return failed ? kExitInputError : kExitOk;
}

struct RulesOptions {
  std::string model;
  std::string instance;
  std::string min_chi;
  std::string max_chi;
  std::string chi0;
  std::size_t limit = std::size_t{1} << kMaxCubeBits;
  bool all_features = false;
};

int cmd_rules(const RulesOptions& o, std::ostream& out) {
  const ModelFile model = load_model(o.model);
  const Collective c = model.collective(parse_fraction(o.chi0.empty() ? model.chi0 : o.chi0));
  if (!o.instance.empty()) {
    std::vector<double> raw;
    for (const auto& cell : split_list(o.instance)) raw.push_back(parse_double(cell));
    out << render_instance_rule(model, c, raw);
    return kExitOk;
  }
  RuleSelection sel;
  if (!o.min_chi.empty()) sel.min_chi = parse_fraction(o.min_chi);
  if (!o.max_chi.empty()) sel.max_chi = parse_fraction(o.max_chi);
  sel.limit = o.limit;
  sel.all_features = o.all_features;
  std::string text;
  render_rules(model, c, sel, text);
  out << text;
  return kExitOk;
}

int cmd_coherence_map(const std::string& model_path, const std::string& chi0, bool all_features,
                      const std::string& out_path, std::ostream& out) {
  const ModelFile model = load_model(model_path);
  const Collective c = model.collective(parse_fraction(chi0.empty() ? model.chi0 : chi0));
  const auto features = cube_features(c, model.features.size(), !all_features);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw DatasetError("cannot write '" + out_path + "'");
    sink = &file;
  }
  for (std::size_t f : features) *sink << model.features[f].name << ',';
  *sink << "label,l1,L,chi,plausible\n";
  visit_cube(c, features, model.features.size(), [&](const BitVector& bits, const Decision& d) {
    for (std::size_t i = 0; i < bits.size(); ++i) *sink << (bits.get(i) ? '1' : '0') << ',';
    *sink << to_string(d.label) << ',' << d.l1 << ',' << d.L << ',' << format_decimal(d.chi) << ','
          << (d.plausible ? "true" : "false") << '\n';
  });
  return kExitOk;
}

struct CompareOptions {
  std::string csv;
  std::string schema;
  std::string weights = "1:1,0:1,1:0";
  std::string deltas = "0";
  std::string freedoms = "0.4,1.0";
  std::string seeds = "1,2";
  bool no_interleave = false;
  std::size_t max_layers = 32;
};

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  const BooleanLearningSet bset = load_learning_set(o.csv, o.schema);
  CompareGrid grid;
  grid.weights.clear();
  for (const auto& w : split_list(o.weights)) {
    const auto colon = w.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("weights take the form alpha:beta");
    grid.weights.emplace_back(parse_double(w.substr(0, colon)), parse_double(w.substr(colon + 1)));
  }
  grid.deltas.clear();
  for (const auto& d : split_list(o.deltas)) grid.deltas.push_back(parse_double(d));
  grid.freedoms.clear();
  for (const auto& f : split_list(o.freedoms)) grid.freedoms.push_back(Freedom::parse(f));
  grid.seeds.clear();
  for (const auto& s : split_list(o.seeds)) grid.seeds.push_back(std::stoull(s));
  grid.interleave = !o.no_interleave;
  grid.max_layers = o.max_layers;
  SynthesisConfig ext;
  ext.max_layers = o.max_layers;
  out << format_compare(compare_methods(bset, grid, ext));
  return kExitOk;
}

}  // namespace

CompareReport compare_methods(const BooleanLearningSet& bset, const CompareGrid& grid,
                              const SynthesisConfig& exterior_config) {
  CompareReport rep;
  const SynthesisResult ext = synthesize(bset, exterior_config);
  rep.exterior_outcome = ext.outcome;
  rep.exterior_layer = ext.layer;
  rep.exterior_mu = ext.best_mu;
  rep.exterior_members = join_members(ext.members);
  std::set<std::size_t> used;
  for (const auto& c : ext.members) {
    auto f = features_used(c.expr);
    used.insert(f.begin(), f.end());
  }
  rep.exterior_features = used.size();

  std::vector<std::pair<SplitStrategy, std::uint64_t>> splits;
  if (grid.interleave) splits.emplace_back(SplitStrategy::kInterleave, 0);
  for (auto s : grid.seeds) splits.emplace_back(SplitStrategy::kSeededRandom, s);

  std::set<std::string> structures;
  for (const auto& [alpha, beta] : grid.weights) {
    for (double delta : grid.deltas) {
      for (const auto& freedom : grid.freedoms) {
        for (const auto& [strategy, seed] : splits) {
          CompareRun run;
          run.config.alpha = alpha;
          run.config.beta = beta;
          run.config.delta = delta;
          run.config.freedom = freedom;
          run.config.split = strategy;
          run.config.seed = seed;
          run.config.max_layers = grid.max_layers;
          const ClassicResult r = synthesize_classic(bset, run.config);
          run.depth = r.selected_layer;
          run.mu = r.mu;
          run.features = features_used(r.model).size();
          run.structure = r.model.signature();
          structures.insert(run.structure);
          // The exterior criterion takes none of these settings; rerunning it
          // here checks that its result really is the same at every point.
          run.exterior_members = join_members(synthesize(bset, exterior_config).members);
          if (run.exterior_members != rep.exterior_members) rep.exterior_fixed = false;
          rep.classic.push_back(std::move(run));
        }
      }
    }
  }
  rep.classic_distinct = structures.size();
  return rep;
}

std::string format_compare(const CompareReport& rep) {
  std::ostringstream out;
  out << "exterior: " << to_string(rep.exterior_outcome) << " at layer " << rep.exterior_layer << ", mu "
      << rep.exterior_mu << ", features " << rep.exterior_features << '\n';
  out << "  members: " << rep.exterior_members << '\n';
  out << "\nclassic runs\n";
  out << "alpha  beta  delta  freedom  split        depth  mu  features  structure\n";
  for (const auto& r : rep.classic) {
    char buf[160];
    const std::string split = r.config.split == SplitStrategy::kInterleave
                                  ? std::string("interleave")
                                  : "random:" + std::to_string(r.config.seed);
    std::snprintf(buf, sizeof buf, "%5g  %4g  %5g  %7s  %-11s  %5zu  %2zu  %8zu  ", r.config.alpha, r.config.beta,
                  r.config.delta, r.config.freedom.to_string().c_str(), split.c_str(), r.depth, r.mu, r.features);
    out << buf << r.structure << '\n';
  }
  out << "\nclassic distinct structures: " << rep.classic_distinct << " across " << rep.classic.size()
      << " settings\n";
  out << "exterior result identical across settings: " << (rep.exterior_fixed ? "yes" : "no") << '\n';
  return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize layered logical network classifiers from small labeled data sets"};
  app.name(args.empty() ? "lognet" : args.front());
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Synthesize a model from a labeled CSV");
  train_cmd->add_option("csv", train.csv, "Labeled CSV (feature columns plus 'class')")->required();
  train_cmd->add_option("--schema", train.schema, "Sidecar of 'name = quantitative|boolean' lines");
  train_cmd->add_option("-o,--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--criterion", train.criterion, "exterior or classic")->capture_default_str();
  train_cmd->add_option("--chi0", train.chi0, "Plausibility threshold for chi")->capture_default_str();
  train_cmd->add_option("--max-layers", train.max_layers, "Layer budget")->capture_default_str();
  train_cmd->add_option("--width-cap", train.width_cap, "Survivors kept per layer (exterior)");
  train_cmd->add_flag("--no-dedup", train.no_dedup, "Keep structural duplicates (exterior)");
  train_cmd->add_option("--threads", train.threads, "Worker threads (exterior)")->capture_default_str();
  train_cmd->add_option("--alpha", train.alpha, "Unbias weight (classic)")->capture_default_str();
  train_cmd->add_option("--beta", train.beta, "Regularity weight (classic)")->capture_default_str();
  train_cmd->add_option("--delta", train.delta, "Stopping margin (classic)")->capture_default_str();
  train_cmd->add_option("--freedom", train.freedom, "Candidates kept: count or fraction of C(m,2) (classic)")
      ->capture_default_str();
  train_cmd->add_option("--split", train.split, "interleave or random (classic)")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Seed for the random split (classic)")->capture_default_str();
  train_cmd->add_flag("-v,--verbose", train.verbose, "Per-layer trace on standard error");

  std::string predict_model, predict_csv, predict_chi0;
  auto* predict_cmd = app.add_subcommand("predict", "Classify CSV rows with a model");
  predict_cmd->add_option("model", predict_model, "Model file")->required();
  predict_cmd->add_option("csv", predict_csv, "CSV with the model's feature columns")->required();
  predict_cmd->add_option("--chi0", predict_chi0, "Override the model's plausibility threshold");

  RulesOptions rules;
  auto* rules_cmd = app.add_subcommand("rules", "Print if-then rules");
  rules_cmd->add_option("model", rules.model, "Model file")->required();
  rules_cmd->add_option("--instance", rules.instance, "Comma-separated raw feature values of one instance");
  rules_cmd->add_option("--min-chi", rules.min_chi, "Only rules with chi >= this value");
  rules_cmd->add_option("--max-chi", rules.max_chi, "Only rules with chi <= this value");
  rules_cmd->add_option("--limit", rules.limit, "Maximum number of rules");
  rules_cmd->add_option("--chi0", rules.chi0, "Override the model's plausibility threshold");
  rules_cmd->add_flag("--all-features", rules.all_features, "Enumerate every sensor, not only the used ones");

  std::string matrix_model;
  auto* matrix_cmd = app.add_subcommand("matrix", "Render the trained matrix");
  matrix_cmd->add_option("model", matrix_model, "Model file")->required();

  std::string map_model, map_chi0, map_out;
  bool map_all = false;
  auto* map_cmd = app.add_subcommand("coherence-map", "Export chi for every sensor combination as CSV");
  map_cmd->add_option("model", map_model, "Model file")->required();
  map_cmd->add_option("--chi0", map_chi0, "Override the model's plausibility threshold");
  map_cmd->add_flag("--all-features", map_all, "Enumerate every sensor, not only the used ones");
  map_cmd->add_option("-o,--out", map_out, "Write to a file instead of standard output");

  std::size_t count_m = 0, count_r = 0;
  bool count_json = false;
  auto* count_cmd = app.add_subcommand("count", "Generation counts versus the number of Boolean functions");
  count_cmd->add_option("--m", count_m, "Number of sensors")->required();
  count_cmd->add_option("--r-star", count_r, "Terminal layer")->required();
  count_cmd->add_flag("--json", count_json, "Machine-readable output");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Exterior versus classic selection over a settings grid");
  compare_cmd->add_option("csv", compare.csv, "Labeled CSV")->required();
  compare_cmd->add_option("--schema", compare.schema, "Schema sidecar");
  compare_cmd->add_option("--weights", compare.weights, "alpha:beta pairs")->capture_default_str();
  compare_cmd->add_option("--deltas", compare.deltas, "Stopping margins")->capture_default_str();
  compare_cmd->add_option("--freedoms", compare.freedoms, "Freedom values")->capture_default_str();
  compare_cmd->add_option("--seeds", compare.seeds, "Random split seeds")->capture_default_str();
  compare_cmd->add_flag("--no-interleave", compare.no_interleave, "Skip the interleaved split");
  compare_cmd->add_option("--max-layers", compare.max_layers, "Layer budget")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*train_cmd) return cmd_train(train, out, err);
    if (*predict_cmd) return cmd_predict(predict_model, predict_csv, predict_chi0, out, err);
    if (*rules_cmd) return cmd_rules(rules, out);
    if (*matrix_cmd) {
      out << render_matrix(load_model(matrix_model));
      return kExitOk;
    }
    if (*map_cmd) return cmd_coherence_map(map_model, map_chi0, map_all, map_out, out);
    if (*count_cmd) {
      const auto rep = check_inequality(count_m, count_r);
      out << (count_json ? format_report_json(rep) : format_report(rep));
      return kExitOk;
    }
    if (*compare_cmd) return cmd_compare(compare, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace lognet
