// Command-line front end: encode, train, evaluate, compare, explain, predict.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moelr/moelr.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 generic/IO, 2 schema or format error, 3 empty data or
// bad split, 4 training divergence, 5 dimension mismatch.
constexpr int kExitGeneric = 1;
constexpr int kExitSchema = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitDivergence = 4;
constexpr int kExitShape = 5;

struct CommonOptions {
  std::string split = "0.64,0.16,0.20";
  int min_prefix_len = 2;
  int max_prefix_len = 0;  // 0 = unbounded
  std::uint64_t seed = 1;
};

struct TrainFlags {
  std::size_t m = 6;
  std::string ktop = "8";
  double lambda_r = 0.1;
  int epochs_e2e = 100;
  int epochs_gate = 100;
  double lr_gate = 0.01;
  double lr_experts = 0.05;
  int batch_size = 32;
  std::string selection = "best";
};

moelr::SplitSpec parse_split(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = moelr::parse_double(item);
    if (!v) throw moelr::ConfigError("--split expects three comma-separated fractions");
    parts.push_back(*v);
  }
  if (parts.size() != 3)
    throw moelr::ConfigError("--split expects three comma-separated fractions");
  moelr::SplitSpec spec{parts[0], parts[1], parts[2]};
  spec.validate();
  return spec;
}

std::optional<int> max_len_option(int flag_value) {
  if (flag_value <= 0) return moelr::kUnboundedPrefixLength;
  return flag_value;
}

moelr::TrainConfig make_train_config(const TrainFlags& flags, std::uint64_t seed) {
  moelr::TrainConfig cfg;
  cfg.m = flags.m;
  cfg.ktop = moelr::parse_ktop(flags.ktop);
  cfg.lambda_r = flags.lambda_r;
  cfg.epochs_e2e = flags.epochs_e2e;
  cfg.epochs_gate = flags.epochs_gate;
  cfg.lr_gate = flags.lr_gate;
  cfg.lr_experts = flags.lr_experts;
  cfg.batch_size = flags.batch_size;
  cfg.seed = seed;
  if (flags.selection == "best") {
    cfg.selection = moelr::ModelSelection::BestValidAuc;
  } else if (flags.selection == "last") {
    cfg.selection = moelr::ModelSelection::LastEpoch;
  } else {
    throw moelr::ConfigError("--selection must be 'best' or 'last'");
  }
  return cfg;
}

json train_config_json(const moelr::TrainConfig& cfg) {
  return {{"m", cfg.m},
          {"ktop", moelr::ktop_to_string(cfg.ktop)},
          {"lambda_r", cfg.lambda_r},
          {"epochs_e2e", cfg.epochs_e2e},
          {"epochs_gate", cfg.epochs_gate},
          {"lr_gate", cfg.lr_gate},
          {"lr_experts", cfg.lr_experts},
          {"batch_size", cfg.batch_size},
          {"seed", cfg.seed},
          {"shuffle", cfg.shuffle},
          {"selection",
           cfg.selection == moelr::ModelSelection::BestValidAuc ? "best" : "last"}};
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw moelr::Error("cannot write file: " + path.string());
  out << content;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw moelr::Error("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const fs::path& path) {
  json doc = json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded())
    throw moelr::SerializationError("not valid JSON: " + path.string());
  return doc;
}

// Every produced artifact path is recorded so a run can be reproduced.
void write_manifest(const fs::path& out_dir, const std::string& command, json inputs,
                    json outputs, json config, std::uint64_t seed) {
  json manifest;
  manifest["tool"] = moelr::kToolName;
  manifest["version"] = moelr::kVersion;
  manifest["command"] = command;
  manifest["inputs"] = std::move(inputs);
  manifest["outputs"] = std::move(outputs);
  manifest["config"] = std::move(config);
  manifest["seed"] = seed;
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

moelr::FeatureDictionary load_dictionary(const fs::path& path) {
  return moelr::FeatureDictionary::from_json(parse_json_file(path));
}

moelr::MoeModel load_model(const fs::path& path) {
  return moelr::model_from_json(parse_json_file(path));
}

struct EncodeArgs {
  std::string log_path;
  std::string schema_path;
  std::string out_dir;
  bool no_standardize = false;
  double rare_threshold = 0.01;
};

int cmd_encode(const EncodeArgs& args, const CommonOptions& common) {
  const moelr::LogSchema schema = moelr::LogSchema::from_file(args.schema_path);
  const moelr::EventLog log = moelr::parse_event_log_file(args.log_path, schema);
  if (log.traces.empty()) throw moelr::EmptyDataError("event log contains no cases");
  const moelr::SplitSpec split_spec = parse_split(common.split);
  const moelr::TemporalSplit split = moelr::temporal_split(log, split_spec);

  moelr::FitOptions fit_options;
  fit_options.standardize = !args.no_standardize;
  fit_options.rare_threshold = args.rare_threshold;
  const auto max_len = max_len_option(common.max_prefix_len);

  const auto train_prefixes = moelr::derive_temporal_features(
      moelr::extract_prefixes(split.train, common.min_prefix_len, max_len),
      fit_options.temporal);
  if (train_prefixes.empty())
    throw moelr::EmptyDataError("no train prefixes with at least " +
                                std::to_string(common.min_prefix_len) + " events");
  const moelr::FeatureDictionary dict =
      moelr::fit_feature_dictionary(train_prefixes, fit_options);

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  write_text_file(out / "dictionary.json", dict.to_json().dump(2) + "\n");
  write_text_file(out / "schema.json", schema.to_json().dump(2) + "\n");

  auto write_partition = [&](const moelr::EventLog& part, const char* encoded_name,
                             const char* raw_name) {
    const moelr::Dataset data =
        moelr::encode_log(part, dict, common.min_prefix_len, max_len);
    std::ofstream os(out / encoded_name, std::ios::binary);
    moelr::write_dataset_csv(data, dict, os);
    std::ofstream raw(out / raw_name, std::ios::binary);
    moelr::serialize_event_log(part, schema, raw);
  };
  write_partition(split.train, "train.csv", "train_log.csv");
  write_partition(split.valid, "valid.csv", "valid_log.csv");
  write_partition(split.test, "test.csv", "test_log.csv");

  write_manifest(out, "encode",
                 {{"log", args.log_path}, {"schema", args.schema_path}},
                 {{"dictionary", (out / "dictionary.json").string()},
                  {"schema_copy", (out / "schema.json").string()},
                  {"train", (out / "train.csv").string()},
                  {"valid", (out / "valid.csv").string()},
                  {"test", (out / "test.csv").string()},
                  {"train_log", (out / "train_log.csv").string()},
                  {"valid_log", (out / "valid_log.csv").string()},
                  {"test_log", (out / "test_log.csv").string()}},
                 {{"split", common.split},
                  {"min_prefix_len", common.min_prefix_len},
                  {"max_prefix_len", common.max_prefix_len},
                  {"standardize", !args.no_standardize},
                  {"rare_threshold", args.rare_threshold}},
                 common.seed);
  std::cout << "encoded " << log.traces.size() << " cases into " << args.out_dir
            << " (d = " << dict.d() << ")\n";
  return 0;
}

struct TrainArgs {
  std::string data_dir;
  std::string out_dir;
};

int cmd_train(const TrainArgs& args, const TrainFlags& flags, const CommonOptions& common) {
  const fs::path data(args.data_dir);
  const moelr::FeatureDictionary dict = load_dictionary(data / "dictionary.json");
  std::ifstream train_in(data / "train.csv", std::ios::binary);
  if (!train_in) throw moelr::Error("cannot open " + (data / "train.csv").string());
  const moelr::Dataset train = moelr::read_dataset_csv(train_in, dict);
  std::ifstream valid_in(data / "valid.csv", std::ios::binary);
  if (!valid_in) throw moelr::Error("cannot open " + (data / "valid.csv").string());
  const moelr::Dataset valid = moelr::read_dataset_csv(valid_in, dict);
  if (train.empty()) throw moelr::EmptyDataError("train.csv contains no rows");

  const moelr::TrainConfig cfg = make_train_config(flags, common.seed);
  const moelr::TrainResult result =
      moelr::train_full(train, valid, cfg, dict.feature_names());

  // Pruning contract holds before anything is written.
  if (cfg.ktop) {
    std::size_t gate_active = 0;
    for (std::size_t j = 0; j < result.model.d; ++j) {
      for (std::size_t i = 0; i < result.model.m; ++i) {
        if (result.model.gate_weights[i][j] != 0.0) {
          ++gate_active;
          break;
        }
      }
    }
    if (gate_active > static_cast<std::size_t>(*cfg.ktop))
      throw moelr::Error("pruning invariant violated in the gate");
    for (const auto& e : moelr::explain_experts(result.model))
      if (e.entries.size() > static_cast<std::size_t>(*cfg.ktop))
        throw moelr::Error("pruning invariant violated in expert " +
                           std::to_string(e.expert_index));
  }

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  write_text_file(out / "model.json", moelr::serialize_model(result.model));
  std::ofstream report(out / "train_report.csv", std::ios::binary);
  moelr::write_train_report_csv(report, result.e2e, result.gate);
  write_manifest(out, "train",
                 {{"data", args.data_dir},
                  {"dictionary", (data / "dictionary.json").string()}},
                 {{"model", (out / "model.json").string()},
                  {"train_report", (out / "train_report.csv").string()}},
                 train_config_json(cfg), common.seed);
  std::cout << "trained m=" << cfg.m << " ktop=" << moelr::ktop_to_string(cfg.ktop)
            << " model: complexity " << moelr::complexity(result.model) << ", written to "
            << (out / "model.json").string() << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string model_path;
  std::string dict_path;
  std::string log_path;
  std::string schema_path;
  std::string out_dir;
};

int cmd_evaluate(const EvaluateArgs& args, const CommonOptions& common) {
  const moelr::MoeModel model = load_model(args.model_path);
  const moelr::FeatureDictionary dict = load_dictionary(args.dict_path);
  const moelr::LogSchema schema = moelr::LogSchema::from_file(args.schema_path);
  const moelr::EventLog log = moelr::parse_event_log_file(args.log_path, schema);
  const moelr::EvalReport report = moelr::evaluate(
      model, log, dict, common.min_prefix_len, max_len_option(common.max_prefix_len));
  std::cout << report.to_text();
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_text_file(out / "eval.json", report.to_json().dump(2) + "\n");
    write_text_file(out / "eval.txt", report.to_text());
    write_manifest(out, "evaluate",
                   {{"model", args.model_path},
                    {"dictionary", args.dict_path},
                    {"log", args.log_path},
                    {"schema", args.schema_path}},
                   {{"eval_json", (out / "eval.json").string()},
                    {"eval_text", (out / "eval.txt").string()}},
                   {{"min_prefix_len", common.min_prefix_len},
                    {"max_prefix_len", common.max_prefix_len}},
                   common.seed);
  }
  return 0;
}

struct CompareArgs {
  std::string data_dir;
  std::string out_dir;
  std::string dataset_name;
};

int cmd_compare(const CompareArgs& args, const TrainFlags& flags,
                const CommonOptions& common) {
  const fs::path data(args.data_dir);
  const moelr::FeatureDictionary dict = load_dictionary(data / "dictionary.json");
  std::ifstream train_in(data / "train.csv", std::ios::binary);
  if (!train_in) throw moelr::Error("cannot open " + (data / "train.csv").string());
  const moelr::Dataset train = moelr::read_dataset_csv(train_in, dict);
  std::ifstream valid_in(data / "valid.csv", std::ios::binary);
  if (!valid_in) throw moelr::Error("cannot open " + (data / "valid.csv").string());
  const moelr::Dataset valid = moelr::read_dataset_csv(valid_in, dict);
  const moelr::LogSchema schema = moelr::LogSchema::from_file(data / "schema.json");
  const moelr::EventLog test_log =
      moelr::parse_event_log_file(data / "test_log.csv", schema);

  const moelr::TrainConfig cfg = make_train_config(flags, common.seed);
  const moelr::Comparison cmp = moelr::compare_with_baseline(
      train, valid, test_log, dict, cfg, common.min_prefix_len);
  const std::string name =
      args.dataset_name.empty() ? data.filename().string() : args.dataset_name;

  std::ostringstream csv;
  moelr::write_comparison_csv(csv, cmp, name);
  std::cout << csv.str();
  std::cout << "relative AUC improvement over 1-LR: "
            << moelr::format_double(cmp.relative_auc_improvement) << "\n";
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_text_file(out / "comparison.csv", csv.str());
    write_text_file(out / "comparison.json", cmp.to_json().dump(2) + "\n");
    write_manifest(out, "compare", {{"data", args.data_dir}},
                   {{"comparison_csv", (out / "comparison.csv").string()},
                    {"comparison_json", (out / "comparison.json").string()}},
                   train_config_json(cfg), common.seed);
  }
  return 0;
}

struct ExplainArgs {
  std::string model_path;
  std::string dict_path;
  std::string data_path;  // encoded CSV for routing statistics
  std::string out_dir;
};

int cmd_explain(const ExplainArgs& args) {
  const moelr::MoeModel model = load_model(args.model_path);
  const auto experts = moelr::explain_experts(model);
  const auto gate = moelr::explain_gate(model);
  json doc = moelr::explanations_to_json(experts, gate);

  if (!args.dict_path.empty()) {
    const moelr::FeatureDictionary dict = load_dictionary(args.dict_path);
    if (dict.d() != model.d)
      throw moelr::ShapeError("model and dictionary disagree on feature count");
    const auto raw = moelr::explain_experts_destandardized(model, dict);
    doc["experts_destandardized"] = moelr::explanations_to_json(raw, {})["experts"];
    if (!args.data_path.empty()) {
      std::ifstream in(args.data_path, std::ios::binary);
      if (!in) throw moelr::Error("cannot open " + args.data_path);
      const moelr::Dataset data = moelr::read_dataset_csv(in, dict);
      const auto summary = moelr::feature_usage_summary(model, data);
      doc["feature_usage"] = {{"union", summary.union_features},
                              {"jaccard", summary.jaccard},
                              {"routed_counts", summary.routed_counts}};
    }
  }

  std::cout << moelr::explanations_to_markdown(experts);
  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_text_file(out / "explain.json", doc.dump(2) + "\n");
    write_text_file(out / "explain.md", moelr::explanations_to_markdown(experts));
    std::ostringstream csv;
    moelr::write_explanations_csv(csv, experts);
    write_text_file(out / "weights.csv", csv.str());
  }
  return 0;
}

struct PredictArgs {
  std::string model_path;
  std::string values;
  std::string dict_path;
  std::string log_path;
  std::string schema_path;
};

json prediction_json(const moelr::MoeModel& model, const moelr::Prediction& p,
                     const std::string& case_id) {
  const auto explanations = moelr::explain_experts(model);
  const auto& chosen = explanations[static_cast<std::size_t>(p.selected_expert)];
  json entries = json::array();
  for (const auto& e : chosen.entries)
    entries.push_back({{"feature", e.feature}, {"weight", e.weight}, {"sign", e.sign()}});
  json doc = {{"probability", p.probability},
              {"selected_expert", p.selected_expert},
              {"gate_distribution", p.gate_distribution},
              {"explanation", {{"bias", chosen.bias}, {"entries", entries}}}};
  if (!case_id.empty()) doc["case_id"] = case_id;
  return doc;
}

int cmd_predict(const PredictArgs& args) {
  const moelr::MoeModel model = load_model(args.model_path);
  if (!args.values.empty()) {
    std::vector<double> x;
    std::stringstream ss(args.values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto v = moelr::parse_double(item);
      if (!v) throw moelr::ConfigError("--values expects comma-separated numbers");
      x.push_back(*v);
    }
    if (x.size() != model.d)
      throw moelr::ShapeError("got " + std::to_string(x.size()) +
                              " values, model expects " + std::to_string(model.d));
    std::cout << prediction_json(model, moelr::predict(model, x), "").dump() << "\n";
    return 0;
  }
  if (args.dict_path.empty() || args.log_path.empty() || args.schema_path.empty())
    throw moelr::ConfigError("predict needs --values or all of --dict, --log, --schema");
  const moelr::FeatureDictionary dict = load_dictionary(args.dict_path);
  if (dict.d() != model.d)
    throw moelr::ShapeError("model and dictionary disagree on feature count");
  const moelr::LogSchema schema = moelr::LogSchema::from_file(args.schema_path);
  const moelr::EventLog log = moelr::parse_event_log_file(args.log_path, schema);
  if (log.traces.empty()) throw moelr::EmptyDataError("event log contains no cases");
  for (const auto& trace : log.traces) {
    moelr::PrefixInstance prefix{trace.case_id, trace.events,
                                 static_cast<int>(trace.events.size()), trace.label};
    const auto derived = moelr::derive_temporal_features(prefix, dict.temporal);
    const moelr::FeatureVector fv = moelr::encode_prefix(derived, dict);
    std::cout << prediction_json(model, moelr::predict(model, fv.values), trace.case_id)
                     .dump()
              << "\n";
  }
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const moelr::DivergenceError*>(&e)) return kExitDivergence;
  if (dynamic_cast<const moelr::ShapeError*>(&e)) return kExitShape;
  if (dynamic_cast<const moelr::EmptyDataError*>(&e) ||
      dynamic_cast<const moelr::SplitError*>(&e) ||
      dynamic_cast<const moelr::UndefinedAucError*>(&e))
    return kExitEmpty;
  if (dynamic_cast<const moelr::SchemaError*>(&e) ||
      dynamic_cast<const moelr::RowError*>(&e) ||
      dynamic_cast<const moelr::LabelError*>(&e) ||
      dynamic_cast<const moelr::SerializationError*>(&e) ||
      dynamic_cast<const moelr::FitError*>(&e) ||
      dynamic_cast<const moelr::EncodingError*>(&e) ||
      dynamic_cast<const moelr::ConfigError*>(&e))
    return kExitSchema;
  return kExitGeneric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse mixture of logistic-regression experts for process outcome prediction"};
  app.set_version_flag("--version", std::string(moelr::kVersion));
  app.set_config("--config", "", "Read flags from a TOML file ([subcommand] sections)");
  app.require_subcommand(1);

  CommonOptions common;
  TrainFlags flags;

  EncodeArgs encode_args;
  auto* encode = app.add_subcommand("encode", "Split a labeled event log and encode it");
  encode->add_option("--log", encode_args.log_path, "Event log CSV")->required();
  encode->add_option("--schema", encode_args.schema_path, "Schema JSON")->required();
  encode->add_option("--out", encode_args.out_dir, "Output directory")->required();
  encode->add_option("--split", common.split, "train,valid,test fractions")
      ->envname("MOELR_SPLIT");
  encode->add_option("--min-prefix-len", common.min_prefix_len, "Minimum prefix length")
      ->envname("MOELR_MIN_PREFIX_LEN");
  encode->add_option("--max-prefix-len", common.max_prefix_len,
                     "Maximum prefix length (0 = unbounded)")
      ->envname("MOELR_MAX_PREFIX_LEN");
  encode->add_flag("--no-standardize", encode_args.no_standardize,
                   "Skip z-score standardization");
  encode->add_option("--rare-threshold", encode_args.rare_threshold,
                     "Categorical values under this event share collapse into _other");
  encode->add_option("--seed", common.seed, "Seed recorded in the manifest")
      ->envname("MOELR_SEED");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train the mixture on an encoded directory");
  train->add_option("--data", train_args.data_dir, "Encoded directory from 'encode'")
      ->required();
  train->add_option("--out", train_args.out_dir, "Output directory")->required();
  auto add_train_flags = [&](CLI::App* cmd) {
    cmd->add_option("--m", flags.m, "Number of experts")->envname("MOELR_M");
    cmd->add_option("--ktop", flags.ktop, "Features per sub-net, integer or ALL")
        ->envname("MOELR_KTOP");
    cmd->add_option("--lambda-r", flags.lambda_r, "L1 regularization weight")
        ->envname("MOELR_LAMBDA_R");
    cmd->add_option("--epochs-e2e", flags.epochs_e2e, "End-to-end epochs")
        ->envname("MOELR_EPOCHS_E2E");
    cmd->add_option("--epochs-gate", flags.epochs_gate, "Gate fine-tuning epochs")
        ->envname("MOELR_EPOCHS_GATE");
    cmd->add_option("--lr-gate", flags.lr_gate, "Gate learning rate")
        ->envname("MOELR_LR_GATE");
    cmd->add_option("--lr-experts", flags.lr_experts, "Expert learning rate")
        ->envname("MOELR_LR_EXPERTS");
    cmd->add_option("--batch-size", flags.batch_size, "Mini-batch size")
        ->envname("MOELR_BATCH_SIZE");
    cmd->add_option("--seed", common.seed, "Seed for init and shuffling")
        ->envname("MOELR_SEED");
    cmd->add_option("--selection", flags.selection,
                    "Snapshot selection: 'best' (validation AUC) or 'last'")
        ->envname("MOELR_SELECTION");
  };
  add_train_flags(train);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "AUC and complexity on a labeled log");
  evaluate->add_option("--model", eval_args.model_path, "Model JSON")->required();
  evaluate->add_option("--dict", eval_args.dict_path, "Feature dictionary JSON")->required();
  evaluate->add_option("--log", eval_args.log_path, "Labeled event log CSV")->required();
  evaluate->add_option("--schema", eval_args.schema_path, "Schema JSON")->required();
  evaluate->add_option("--out", eval_args.out_dir, "Optional output directory");
  evaluate->add_option("--min-prefix-len", common.min_prefix_len, "Minimum prefix length")
      ->envname("MOELR_MIN_PREFIX_LEN");
  evaluate->add_option("--max-prefix-len", common.max_prefix_len,
                       "Maximum prefix length (0 = unbounded)")
      ->envname("MOELR_MAX_PREFIX_LEN");

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "Mixture vs 1-LR baseline on one split");
  compare->add_option("--data", compare_args.data_dir, "Encoded directory from 'encode'")
      ->required();
  compare->add_option("--out", compare_args.out_dir, "Optional output directory");
  compare->add_option("--dataset-name", compare_args.dataset_name, "Label for the CSV");
  compare->add_option("--min-prefix-len", common.min_prefix_len, "Minimum prefix length")
      ->envname("MOELR_MIN_PREFIX_LEN");
  add_train_flags(compare);

  ExplainArgs explain_args;
  auto* explain = app.add_subcommand("explain", "Per-expert feature-weight reports");
  explain->add_option("--model", explain_args.model_path, "Model JSON")->required();
  explain->add_option("--dict", explain_args.dict_path,
                      "Dictionary JSON (adds de-standardized view)");
  explain->add_option("--data", explain_args.data_path,
                      "Encoded CSV for routing statistics (needs --dict)");
  explain->add_option("--out", explain_args.out_dir, "Optional output directory");

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Score one instance or a log of prefixes");
  predict->add_option("--model", predict_args.model_path, "Model JSON")->required();
  predict->add_option("--values", predict_args.values, "Comma-separated encoded features");
  predict->add_option("--dict", predict_args.dict_path, "Feature dictionary JSON");
  predict->add_option("--log", predict_args.log_path, "Raw prefix log CSV");
  predict->add_option("--schema", predict_args.schema_path, "Schema JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (encode->parsed()) return cmd_encode(encode_args, common);
    if (train->parsed()) return cmd_train(train_args, flags, common);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, common);
    if (compare->parsed()) return cmd_compare(compare_args, flags, common);
    if (explain->parsed()) return cmd_explain(explain_args);
    if (predict->parsed()) return cmd_predict(predict_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
