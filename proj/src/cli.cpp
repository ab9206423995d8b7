#include "caqc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "caqc/compiler.hpp"
#include "caqc/cqca.hpp"
#include "caqc/mbqc.hpp"
#include "caqc/pqc.hpp"
#include "caqc/resource.hpp"
#include "caqc/stabilizer.hpp"

namespace caqc {

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
  uint64_t seed = 0;
  std::string out_dir;
  std::string format = "json";
  std::string command_line;
};

Cqca load_rule(const std::string& spec) {
  for (const Cqca& t : builtin_rules()) {
    if (t.name == spec) {
      return t;
    }
  }
  std::ifstream in(spec);
  if (!in) {
    throw FormatError("rule is neither a builtin name nor a readable file: " +
                      spec);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad rule file: ") + e.what());
  }
  return cqca_from_json(j);
}

void write_file(const GlobalOpts& g, const std::string& name,
                const std::string& content) {
  std::filesystem::path path = std::filesystem::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  out << content;
}

void emit_manifest(const GlobalOpts& g) {
  nlohmann::json manifest = {{"command", g.command_line},
                             {"seed", g.seed},
                             {"version", kVersion},
                             {"format", g.format}};
  write_file(g, "manifest.json", manifest.dump(2) + "\n");
}

/// Prints the primary JSON (or its text alternative) and mirrors it to the
/// output directory together with the run manifest.
void emit(const GlobalOpts& g, const std::string& name,
          const nlohmann::json& j, const std::string& text = "") {
  if (g.format == "text" && !text.empty()) {
    std::cout << text;
  } else {
    std::cout << j.dump(2) << "\n";
  }
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    write_file(g, name + ".json", j.dump(2) + "\n");
    if (!text.empty()) {
      write_file(g, name + ".txt", text);
    }
    emit_manifest(g);
  }
}

std::vector<std::vector<double>> parse_angles(const std::string& spec,
                                              int cells, int n,
                                              uint64_t default_seed) {
  if (spec.rfind("random:", 0) == 0 || spec == "random") {
    uint64_t seed = default_seed;
    if (spec.size() > 7) {
      try {
        seed = std::stoull(spec.substr(7));
      } catch (const std::exception&) {
        throw FormatError("bad angle seed: " + spec);
      }
    }
    Rng rng = Rng::stream(seed, "angles");
    std::vector<std::vector<double>> grid(cells, std::vector<double>(n, 0));
    for (auto& row : grid) {
      for (double& a : row) {
        a = rng.uniform(-M_PI, M_PI);
      }
    }
    return grid;
  }
  std::ifstream in(spec);
  if (!in) {
    throw FormatError("cannot open angle file: " + spec);
  }
  std::vector<std::vector<double>> grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw FormatError("bad angle value: " + field);
      }
    }
    grid.push_back(std::move(row));
  }
  if (static_cast<int>(grid.size()) != cells) {
    throw FormatError("angle file must have " + std::to_string(cells) +
                      " rows, got " + std::to_string(grid.size()));
  }
  for (const auto& row : grid) {
    if (static_cast<int>(row.size()) != n) {
      throw FormatError("angle rows must have " + std::to_string(n) +
                        " entries");
    }
  }
  return grid;
}

nlohmann::json classification_json(const Cqca& t,
                                   const CqcaClassification& c) {
  nlohmann::json j = {{"rule", t.name},
                      {"simple", c.is_simple},
                      {"entangling", c.is_entangling},
                      {"kind", kind_name(c.kind)}};
  if (c.pattern_period.has_value()) {
    j["period"] = *c.pattern_period;
  }
  if (c.glider.has_value()) {
    j["glider"] = {{"shift", c.glider->shift},
                   {"pattern", pattern_to_json(c.glider->pattern)}};
  }
  return j;
}

int run_cqca_classify(const GlobalOpts& g, const std::string& rule_spec,
                      int n) {
  Cqca t = load_rule(rule_spec);
  require_valid(t, n);
  CqcaClassification c = classify(t);
  emit(g, "classify", classification_json(t, c));
  return 0;
}

int run_cqca_period(const GlobalOpts& g, const std::string& rule_spec, int n,
                    int cap_factor) {
  Cqca t = load_rule(rule_spec);
  int l = period(t, n, cap_factor);
  emit(g, "period", nlohmann::json{{"rule", t.name}, {"n", n}, {"period", l}});
  return 0;
}

int run_cqca_lemma2(const GlobalOpts& g, const std::string& rule_spec, int n) {
  Cqca t = load_rule(rule_spec);
  Lemma2Coefficients c = lemma2_solve(t, n);
  emit(g, "lemma2",
       nlohmann::json{{"rule", t.name},
                      {"n", n},
                      {"m", c.m},
                      {"alpha", c.alpha},
                      {"beta", c.beta},
                      {"phase", c.phase_exp}});
  return 0;
}

int run_compile(const GlobalOpts& g, const std::string& rule_spec, int n,
                int blocks, bool extended) {
  Cqca t = load_rule(rule_spec);
  RotationLayerProgram prog = extended ? compile_extended_block(t, n, blocks)
                                       : compile_block(t, n, blocks);
  emit(g, "program", program_to_json(prog));
  return 0;
}

int run_mbqc(const GlobalOpts& g, const std::string& rule_spec, int n,
             int depth, const std::string& angle_spec, bool uncorrected,
             bool extended, bool folded, const std::string& dump_path) {
  Cqca t = load_rule(rule_spec);
  const int cells = extended ? 2 * depth : depth;
  std::vector<std::vector<double>> angles =
      parse_angles(angle_spec, cells, n, g.seed);
  MbqcOptions opt;
  opt.corrected = !uncorrected;
  opt.extended = extended;
  opt.fold_rotations = folded;
  opt.seed = g.seed;
  MbqcRun run = run_algorithm1(t, n, depth, angles, opt);

  nlohmann::json j = {{"rule", t.name},         {"n", n},
                      {"depth", depth},         {"extended", extended},
                      {"corrected", !uncorrected}, {"seed", g.seed},
                      {"angles", angles},       {"outcomes", run.outcomes}};
  int l = period(t, n);
  if (depth % l == 0) {
    RotationLayerProgram prog = theorem2_program(t, n, depth, extended);
    std::vector<double> flat;
    for (const auto& row : angles) {
      flat.insert(flat.end(), row.begin(), row.end());
    }
    if (!uncorrected) {
      DenseState ref = evaluate_program(prog, flat, prepare_plus(n));
      j["fidelity_vs_theorem2"] = fidelity(run.final_state, ref);
      j["byproduct_tail"] = nullptr;
    } else {
      ByproductLedger ledger = make_ledger(run, prog);
      CommutedByproducts cb = commute_byproducts(ledger, prog);
      DenseState rebuilt = evaluate_program(cb.flipped, flat, prepare_plus(n));
      apply_pauli(rebuilt, cb.tail);
      j["byproduct_tail"] = to_json(cb.tail);
      j["sign_flips"] = cb.sign_flips;
      j["fidelity_vs_theorem2"] = fidelity(run.final_state, rebuilt);
    }
  } else {
    j["fidelity_vs_theorem2"] = nullptr;
    j["byproduct_tail"] = nullptr;
  }
  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    if (!out) {
      throw FormatError("cannot write state dump: " + dump_path);
    }
    write_state(out, run.final_state);
  }
  emit(g, "mbqc", j);
  return 0;
}

int run_resource(const GlobalOpts& g, const std::string& rule_spec, int n,
                 int depth, bool extended, bool ghz) {
  Cqca t = load_rule(rule_spec);
  LatticeCode lat;
  if (ghz) {
    lat = build_ghz_case(t, n, depth);
  } else if (extended) {
    lat = build_prop2(t, n, depth);
  } else {
    lat = build_theorem3(t, n, depth);
  }
  static const char* role_names[] = {"left", "bulk", "right"};
  nlohmann::json gens = nlohmann::json::array();
  for (size_t k = 0; k < lat.code.stabilizers.size(); ++k) {
    gens.push_back(
        nlohmann::json{{"generator", to_json(lat.code.stabilizers[k])},
                       {"text", to_text(lat.code.stabilizers[k])},
                       {"role", role_names[static_cast<int>(lat.roles[k])]},
                       {"row", lat.anchor_rows[k] + 1},
                       {"column", lat.anchor_cols[k] + 1}});
  }
  nlohmann::json j = {{"rule", t.name},       {"rows", lat.rows},
                      {"cols", lat.cols},     {"extended", extended},
                      {"ghz", ghz},           {"generators", gens}};
  std::string text = ascii_lattice(lat);
  auto edges = recognize_graph_state(lat);
  if (edges.has_value()) {
    std::string dot = to_dot(*edges, lat.rows, lat.cols);
    nlohmann::json edge_list = nlohmann::json::array();
    for (const auto& [a, b] : *edges) {
      edge_list.push_back({a, b});
    }
    j["graph"] = {{"edges", edge_list}, {"dot", dot}};
    text += "\n" + dot;
    if (!g.out_dir.empty()) {
      std::filesystem::create_directories(g.out_dir);
      write_file(g, "resource.dot", dot);
    }
  } else {
    j["graph"] = nullptr;
  }
  emit(g, "resource", j, text);
  return 0;
}

int run_pqc_label(const GlobalOpts& g, const std::string& rule_spec, int n,
                  int depth, bool extended, int samples, int reps) {
  PqcModel labeler = make_model(load_rule(rule_spec), n, depth, extended, reps);
  std::vector<std::vector<double>> inputs =
      synthetic_inputs(samples, n, g.seed);
  Dataset d = make_stilted_dataset(labeler, inputs, g.seed);
  nlohmann::json j = {{"inputs", d.inputs},
                      {"labels", d.labels},
                      {"label_norm", d.label_norm},
                      {"provenance", d.provenance},
                      {"labeler_params", labeler.params}};
  emit(g, "dataset", j);
  return 0;
}

Dataset dataset_from_json(const nlohmann::json& j) {
  Dataset d;
  try {
    d.inputs = j.at("inputs").get<std::vector<std::vector<double>>>();
    d.labels = j.at("labels").get<std::vector<double>>();
    d.label_norm = j.value("label_norm", 1.0);
    d.provenance = j.value("provenance", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad dataset JSON: ") + e.what());
  }
  if (d.inputs.size() != d.labels.size()) {
    throw FormatError("dataset input/label counts differ");
  }
  return d;
}

int run_pqc_train(const GlobalOpts& g, const std::string& rule_spec, int n,
                  int depth, bool extended, int reps,
                  const std::string& data_path, int epochs, double lr,
                  const std::string& grad) {
  std::ifstream in(data_path);
  if (!in) {
    throw FormatError("cannot open dataset: " + data_path);
  }
  nlohmann::json dj;
  try {
    in >> dj;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad dataset file: ") + e.what());
  }
  Dataset d = dataset_from_json(dj);
  PqcModel m = make_model(load_rule(rule_spec), n, depth, extended, reps);
  m.label_norm = d.label_norm;
  Rng init = Rng::stream(g.seed, "init");
  for (double& p : m.params) {
    p = init.uniform(-M_PI, M_PI);
  }
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.learning_rate = lr;
  if (grad == "finite-diff") {
    cfg.grad = GradMethod::FiniteDiff;
  } else if (grad != "parameter-shift") {
    throw FormatError("unknown gradient method: " + grad);
  }
  TrainLog log = train(m, d, cfg);
  std::ostringstream csv;
  csv << "epoch,loss\n";
  for (size_t e = 0; e < log.epoch_loss.size(); ++e) {
    csv << e << "," << log.epoch_loss[e] << "\n";
  }
  nlohmann::json j = {{"rule", m.rule},
                      {"extended", m.extended},
                      {"epochs", epochs},
                      {"learning_rate", lr},
                      {"grad", grad},
                      {"seed", g.seed},
                      {"final_loss", log.final_loss},
                      {"epoch_loss", log.epoch_loss},
                      {"params", m.params}};
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    write_file(g, "training.csv", csv.str());
  }
  emit(g, "training", j, g.format == "csv" ? csv.str() : "");
  return 0;
}

int run_pqc_experiment(const GlobalOpts& g, const std::string& config_path) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      throw FormatError("cannot open config: " + config_path);
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad config file: ") + e.what());
    }
    cfg = experiment_config_from_json(j);
  }
  ExperimentResults res = run_experiment(cfg);
  nlohmann::json summary = results_summary_json(res);
  if (!g.out_dir.empty()) {
    std::filesystem::create_directories(g.out_dir);
    std::ostringstream csv;
    write_results_csv(csv, res);
    write_file(g, "results.csv", csv.str());
    write_file(g, "summary.json", summary.dump(2) + "\n");
  }
  emit(g, "experiment", summary);
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  GlobalOpts g;
  {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) {
      cmd << (i ? " " : "") << argv[i];
    }
    g.command_line = cmd.str();
  }

  CLI::App app{"Automaton-based quantum computation laboratory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--out-dir", g.out_dir,
                 "directory for output files and the run manifest");
  app.add_option("--format", g.format, "stdout format")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  std::string rule = "cluster";
  int n = 4;
  int depth = 2;
  int blocks = 1;
  int cap_factor = 4;
  bool extended = false;
  bool uncorrected = false;
  bool folded = false;
  bool ghz = false;
  std::string angle_spec = "random";
  std::string dump_path;
  int samples = 200;
  int reps = 2;
  std::string data_path;
  std::string config_path;
  int epochs = 200;
  double lr = 0.05;
  std::string grad = "parameter-shift";

  CLI::App* cqca = app.add_subcommand("cqca", "transition-rule queries");
  cqca->require_subcommand(1);
  CLI::App* cls = cqca->add_subcommand("classify", "rule classification");
  cls->add_option("--rule", rule, "builtin name or rule JSON file");
  cls->add_option("--n", n, "ring size")->required();
  CLI::App* per = cqca->add_subcommand("period", "smallest closing power");
  per->add_option("--rule", rule, "builtin name or rule JSON file");
  per->add_option("--n", n, "ring size")->required();
  per->add_option("--cap-factor", cap_factor, "search cap multiplier");
  CLI::App* lem = cqca->add_subcommand("lemma2", "two-step decomposition");
  lem->add_option("--rule", rule, "builtin name or rule JSON file");
  lem->add_option("--n", n, "ring size")->required();

  CLI::App* comp = app.add_subcommand("compile", "emit a rotation program");
  comp->add_option("--rule", rule, "builtin name or rule JSON file");
  comp->add_option("--n", n, "ring size")->required();
  comp->add_option("--blocks", blocks, "number of whole blocks");
  comp->add_flag("--extended", extended, "extended (alternating) scheme");

  CLI::App* mbqc = app.add_subcommand("mbqc", "measurement-driven runs");
  mbqc->require_subcommand(1);
  CLI::App* runcmd = mbqc->add_subcommand("run", "unit-cell measurement loop");
  runcmd->add_option("--rule", rule, "builtin name or rule JSON file");
  runcmd->add_option("--n", n, "ring size")->required();
  runcmd->add_option("--depth", depth, "unit cells (pairs when extended)")
      ->required();
  runcmd->add_option("--angles", angle_spec,
                     "angle CSV file or random[:seed]");
  runcmd->add_flag("--uncorrected", uncorrected,
                   "record byproducts instead of correcting");
  runcmd->add_flag("--extended", extended, "alternate with Hadamard cells");
  runcmd->add_flag("--folded", folded, "fold rotations into the measurements");
  runcmd->add_option("--dump-state", dump_path, "binary state dump path");

  CLI::App* res = app.add_subcommand("resource", "resource-state builders");
  res->require_subcommand(1);
  CLI::App* build = res->add_subcommand("build", "lattice stabilizer code");
  build->add_option("--rule", rule, "builtin name or rule JSON file");
  build->add_option("--n", n, "ring size")->required();
  build->add_option("--depth", depth, "measured columns")->required();
  build->add_flag("--extended", extended, "extended (decorated) construction");
  build->add_flag("--ghz", ghz, "degenerate T(Z)=Z construction");

  CLI::App* pqc = app.add_subcommand("pqc", "learning-model tools");
  pqc->require_subcommand(1);
  CLI::App* label = pqc->add_subcommand("label", "emit a stilted dataset");
  label->add_option("--rule", rule, "builtin name or rule JSON file");
  label->add_option("--n", n, "ring size")->required();
  label->add_option("--depth", depth, "rotation layers")->required();
  label->add_flag("--extended", extended, "extended ansatz");
  label->add_option("--samples", samples, "sample count");
  label->add_option("--encoder-reps", reps, "feature-map repetitions");
  CLI::App* traincmd = pqc->add_subcommand("train", "train one model");
  traincmd->add_option("--rule", rule, "builtin name or rule JSON file");
  traincmd->add_option("--n", n, "ring size")->required();
  traincmd->add_option("--depth", depth, "rotation layers")->required();
  traincmd->add_flag("--extended", extended, "extended ansatz");
  traincmd->add_option("--encoder-reps", reps, "feature-map repetitions");
  traincmd->add_option("--data", data_path, "dataset JSON file")->required();
  traincmd->add_option("--epochs", epochs, "training epochs");
  traincmd->add_option("--lr", lr, "Adam learning rate");
  traincmd->add_option("--grad", grad, "parameter-shift or finite-diff");
  CLI::App* exp = pqc->add_subcommand("experiment", "cross-model grid");
  exp->add_option("--config", config_path, "experiment config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cls->parsed()) {
      return run_cqca_classify(g, rule, n);
    }
    if (per->parsed()) {
      return run_cqca_period(g, rule, n, cap_factor);
    }
    if (lem->parsed()) {
      return run_cqca_lemma2(g, rule, n);
    }
    if (comp->parsed()) {
      return run_compile(g, rule, n, blocks, extended);
    }
    if (runcmd->parsed()) {
      return run_mbqc(g, rule, n, depth, angle_spec, uncorrected, extended,
                      folded, dump_path);
    }
    if (build->parsed()) {
      return run_resource(g, rule, n, depth, extended, ghz);
    }
    if (label->parsed()) {
      return run_pqc_label(g, rule, n, depth, extended, samples, reps);
    }
    if (traincmd->parsed()) {
      return run_pqc_train(g, rule, n, depth, extended, reps, data_path,
                           epochs, lr, grad);
    }
    if (exp->parsed()) {
      return run_pqc_experiment(g, config_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help() << "\n";
  return 2;
}

}  // namespace caqc
