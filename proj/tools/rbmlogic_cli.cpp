// Copyright 2026 The rbmlogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rbmlogic command-line tool. Uses only the C interface of librbmlogic.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbmlogic/rbmlogic.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kLimit = 3 };

// Unwinds to main with the exit code matching a library status.
struct Failure {
  int code;
};

int exit_code(rbml_status st) {
  switch (st) {
    case RBML_OK: return kOk;
    case RBML_ERR_VERIFY: return kVerifyFailed;
    case RBML_ERR_LIMIT: return kLimit;
    default: return kUsage;
  }
}

void check(rbml_status st, const std::string& context) {
  if (st == RBML_OK) return;
  std::cerr << "rbmlogic: " << context << ": " << rbml_last_error() << "\n";
  throw Failure{exit_code(st)};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "rbmlogic: " << message << "\n";
  throw Failure{kUsage};
}

// Owning wrappers for library handles and strings.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p) Free(p);
  }
  T** out() { return &p; }
  T* get() const { return p; }
};
using Kb = Handle<rbml_kb, rbml_kb_free>;
using ModelHandle = Handle<rbml_model, rbml_model_free>;
using DatasetHandle = Handle<rbml_dataset, rbml_dataset_free>;

struct Str {
  char* p = nullptr;
  Str() = default;
  Str(const Str&) = delete;
  Str& operator=(const Str&) = delete;
  ~Str() { rbml_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) usage_error("cannot write '" + path + "'");
}

std::vector<std::string> csv_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::vector<std::string> names;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    names.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return names;
}

void load_model(const std::string& path, ModelHandle& m) {
  check(rbml_model_load(path.c_str(), m.out()), "loading model '" + path + "'");
}

void load_kb(const std::string& path, Kb& kb) {
  check(rbml_kb_load(path.c_str(), kb.out()), "loading knowledge base '" + path + "'");
}

void save_model(const ModelHandle& m, const std::string& path) {
  if (path.empty() || path == "-") {
    Str text;
    check(rbml_model_to_json(m.get(), text.out()), "serialising model");
    std::cout << text.str();
  } else {
    check(rbml_model_save(m.get(), path.c_str()), "writing model '" + path + "'");
  }
}

struct CompileArgs {
  std::string kb, output, baseline = "sdnf", names_from, elimination = "descending";
  double epsilon = 0.5, init_scale = 0.1, tau = 1.0;
  std::size_t extra_hidden = 0;
  std::uint64_t seed = 0;
  bool fold = false, subsumption = false;
};

int run_compile(const CompileArgs& a) {
  if (a.kb.empty() && a.names_from.empty()) usage_error("compile needs a knowledge base or --names-from");
  json opt{{"epsilon", a.epsilon},       {"baseline", a.baseline},        {"extra_hidden", a.extra_hidden},
           {"init_scale", a.init_scale}, {"seed", a.seed},                {"fold_unit_clauses", a.fold},
           {"subsumption_merge", a.subsumption}, {"elimination", a.elimination}, {"tau", a.tau}};
  if (!a.names_from.empty()) opt["names"] = csv_header(a.names_from);
  Kb kb;
  if (!a.kb.empty()) load_kb(a.kb, kb);
  ModelHandle model;
  Str report;
  check(rbml_compile(kb.get(), opt.dump().c_str(), model.out(), report.out()), "compile");
  const auto rep = json::parse(report.str());
  std::cerr << "hidden units: " << rep["hidden_units"].get<std::size_t>()
            << " (visible " << rep["visible_units"].get<std::size_t>() << ", baseline "
            << rep["baseline"].get<std::string>() << ")\n";
  for (const auto& f : rep["formulas"])
    std::cerr << "  " << f["clauses"].get<std::size_t>() << " clauses [" << f["route"].get<std::string>()
              << "] " << f["weight"].get<double>() << ": " << f["formula"].get<std::string>() << "\n";
  save_model(model, a.output);
  return kOk;
}

struct ReasonArgs {
  std::string model, query, kb;
};

int run_reason(const ReasonArgs& a) {
  ModelHandle model;
  load_model(a.model, model);
  Kb kb;
  if (!a.kb.empty()) load_kb(a.kb, kb);
  const std::string query = read_text(a.query);
  Str report;
  check(rbml_reason(model.get(), query.c_str(), kb.get(), report.out()), "reason");
  std::cout << report.str();
  return kOk;
}

struct TrainArgs {
  std::string model, data, from_clauses, output, log;
  std::vector<std::string> targets;
  double alpha = 0.0, beta = 1.0, lr = 0.1, momentum = 0.0;
  std::size_t epochs = 100, batch_size = 0, cd_k = 1;
  std::uint64_t seed = 0;
  bool freeze = false;
};

int run_train(const TrainArgs& a) {
  if (a.data.empty() == a.from_clauses.empty()) usage_error("train needs exactly one of DATA or --from-clauses");
  ModelHandle model;
  load_model(a.model, model);
  const std::string targets = json(a.targets).dump();
  DatasetHandle data;
  if (!a.data.empty()) {
    check(rbml_dataset_load_csv(a.data.c_str(), targets.c_str(), data.out()), "loading '" + a.data + "'");
  } else {
    Kb kb;
    load_kb(a.from_clauses, kb);
    check(rbml_dataset_from_clauses(kb.get(), targets.c_str(), data.out()), "materialising clauses");
  }
  json cfg{{"alpha", a.alpha},   {"beta", a.beta}, {"lr", a.lr},     {"momentum", a.momentum},
           {"epochs", a.epochs}, {"batch_size", a.batch_size}, {"cd_k", a.cd_k},
           {"seed", a.seed},     {"freeze_structure", a.freeze}};
  ModelHandle trained;
  Str log;
  check(rbml_train(model.get(), data.get(), cfg.dump().c_str(), trained.out(), log.out()), "train");
  if (!a.log.empty()) write_text(a.log, log.str());
  save_model(trained, a.output);
  return kOk;
}

struct ExtractArgs {
  std::string model, data, json_out;
  std::vector<std::string> classes;
  std::vector<double> prune;
};

int run_extract(const ExtractArgs& a) {
  ModelHandle model;
  load_model(a.model, model);
  DatasetHandle data;
  if (!a.data.empty()) {
    const std::string targets = json(a.classes).dump();
    check(rbml_dataset_load_csv(a.data.c_str(), targets.c_str(), data.out()), "loading '" + a.data + "'");
  } else if (!a.classes.empty()) {
    usage_error("--class needs --data");
  }
  json opt = json::object();
  if (!a.prune.empty()) opt["prune_fractions"] = a.prune;
  Str listing, report;
  check(rbml_extract(model.get(), data.get(), opt.dump().c_str(), listing.out(), report.out()), "extract");
  std::cout << listing.str();
  if (!a.json_out.empty()) write_text(a.json_out, report.str());
  return kOk;
}

struct VerifyArgs {
  std::string model, kb, report;
  double epsilon = 0.0, tolerance = 1e-9;
  bool table = false;
};

int run_verify(const VerifyArgs& a) {
  ModelHandle model;
  load_model(a.model, model);
  Kb kb;
  load_kb(a.kb, kb);
  double deviation = 0.0;
  Str report;
  const rbml_status st = rbml_verify(model.get(), kb.get(), a.epsilon, a.tolerance, &deviation, report.out());
  if (st != RBML_OK && st != RBML_ERR_VERIFY) check(st, "verify");
  const auto rep = json::parse(report.str());
  if (a.table) {
    const auto& names = rep["names"];
    for (const auto& n : names) std::printf("%s ", n.get<std::string>().c_str());
    std::printf("| s(x)  | E_rank(x)\n");
    for (const auto& row : rep["rows"]) {
      const auto x = row["x"].get<std::string>();
      for (std::size_t i = 0; i < x.size(); ++i)
        std::printf("%*c ", static_cast<int>(names[i].get<std::string>().size()), x[i]);
      std::printf("| %-5g | %g\n", row["weighted_sat"].get<double>(), row["energy_rank"].get<double>());
    }
  }
  if (!a.report.empty()) write_text(a.report, report.str());
  std::printf("max deviation %.3g (epsilon %g, tolerance %g): %s\n", deviation, rep["epsilon"].get<double>(),
              a.tolerance, st == RBML_OK ? "equivalent" : "NOT equivalent");
  if (st == RBML_ERR_VERIFY) {
    std::printf("witness:");
    for (const auto& [name, v] : rep["witness"].items()) std::printf(" %s=%d", name.c_str(), v.get<int>());
    std::printf("\n");
  }
  return st == RBML_OK ? kOk : kVerifyFailed;
}

struct IngestArgs {
  std::string csv, spec, output, resolved;
};

int run_ingest(const IngestArgs& a) {
  const std::string spec = read_text(a.spec);
  DatasetHandle data;
  Str resolved;
  check(rbml_ingest(a.csv.c_str(), spec.c_str(), data.out(), resolved.out()), "ingest");
  if (!a.resolved.empty()) write_text(a.resolved, resolved.str());
  if (a.output.empty() || a.output == "-") usage_error("ingest needs -o FILE");
  check(rbml_dataset_save_csv(data.get(), a.output.c_str()), "writing '" + a.output + "'");
  std::cerr << rbml_dataset_row_count(data.get()) << " rows, " << rbml_dataset_column_count(data.get())
            << " propositions\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile weighted propositional knowledge into RBMs, reason, train and extract rules"};
  app.set_version_flag("--version", std::string(rbml_version()));
  app.require_subcommand(1);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a knowledge base into a model file");
  compile->add_option("kb", ca.kb, "Knowledge base file")->check(CLI::ExistingFile);
  compile->add_option("-o,--output", ca.output, "Model file (default: stdout)");
  compile->add_option("--epsilon", ca.epsilon, "Margin in (0, 1)")->capture_default_str();
  compile->add_option("--baseline", ca.baseline, "Construction")
      ->check(CLI::IsMember({"sdnf", "penalty", "universal"}))
      ->capture_default_str();
  compile->add_option("--extra-hidden", ca.extra_hidden, "Unannotated hidden units to append");
  compile->add_option("--init-scale", ca.init_scale, "Range of extra-unit initial weights")->capture_default_str();
  compile->add_option("--seed", ca.seed, "Random seed");
  compile->add_option("--tau", ca.tau, "Temperature stored in the model")->capture_default_str();
  compile->add_option("--names-from", ca.names_from, "CSV whose header adds visible units")
      ->check(CLI::ExistingFile);
  compile->add_option("--elimination", ca.elimination, "Body elimination order")
      ->check(CLI::IsMember({"descending", "ascending"}));
  compile->add_flag("--fold-unit-clauses", ca.fold, "Encode single-literal clauses as visible biases");
  compile->add_flag("--subsumption-merge", ca.subsumption, "Fold clauses into more general ones");

  ReasonArgs ra;
  auto* reason = app.add_subcommand("reason", "Answer a JSON query against a model");
  reason->add_option("model", ra.model, "Model file")->required()->check(CLI::ExistingFile);
  reason->add_option("query", ra.query, "Query file")->required()->check(CLI::ExistingFile);
  reason->add_option("--kb", ra.kb, "Knowledge base for weighted_sat")->check(CLI::ExistingFile);

  TrainArgs ta;
  auto* trainc = app.add_subcommand("train", "Train a model on data");
  trainc->add_option("model", ta.model, "Model file")->required()->check(CLI::ExistingFile);
  trainc->add_option("data", ta.data, "CSV of 0/1 columns")->check(CLI::ExistingFile);
  trainc->add_option("--from-clauses", ta.from_clauses, "Use one preferred model per formula of this KB")
      ->check(CLI::ExistingFile);
  trainc->add_option("--targets", ta.targets, "Target (y) propositions");
  trainc->add_option("--alpha", ta.alpha, "Generative weight")->capture_default_str();
  trainc->add_option("--beta", ta.beta, "Discriminative weight")->capture_default_str();
  trainc->add_option("--lr", ta.lr, "Learning rate")->capture_default_str();
  trainc->add_option("--momentum", ta.momentum, "Momentum")->capture_default_str();
  trainc->add_option("--epochs", ta.epochs, "Epochs")->capture_default_str();
  trainc->add_option("--batch-size", ta.batch_size, "Rows per batch (0: all)")->capture_default_str();
  trainc->add_option("--cd-k", ta.cd_k, "Gibbs steps per CD estimate")->capture_default_str();
  trainc->add_option("--seed", ta.seed, "Random seed");
  trainc->add_flag("--freeze-structure", ta.freeze, "Train only the confidence of clause units");
  trainc->add_option("-o,--output", ta.output, "Trained model file (default: stdout)");
  trainc->add_option("--log", ta.log, "Loss trace CSV");

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "List the clauses encoded by a model");
  extract->add_option("model", ea.model, "Model file")->required()->check(CLI::ExistingFile);
  extract->add_option("--data", ea.data, "CSV for reliability ratios")->check(CLI::ExistingFile);
  extract->add_option("--class", ea.classes, "Class propositions");
  extract->add_option("--prune", ea.prune, "Prune fractions")->delimiter(',');
  extract->add_option("--json", ea.json_out, "Machine-readable output file");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check that a model encodes a knowledge base");
  verify->add_option("model", va.model, "Model file")->required()->check(CLI::ExistingFile);
  verify->add_option("kb", va.kb, "Knowledge base file")->required()->check(CLI::ExistingFile);
  verify->add_option("--epsilon", va.epsilon, "Margin (default: the model's)");
  verify->add_option("--tolerance", va.tolerance, "Allowed deviation")->capture_default_str();
  verify->add_flag("--table", va.table, "Print the truth table with energies");
  verify->add_option("--report", va.report, "JSON report file");

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "One-hot encode a categorical CSV");
  ingest->add_option("csv", ia.csv, "Input CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--spec", ia.spec, "One-hot spec (JSON)")->required()->check(CLI::ExistingFile);
  ingest->add_option("-o,--output", ia.output, "Output 0/1 CSV")->required();
  ingest->add_option("--resolved-spec", ia.resolved, "Write the spec with inferred values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) return run_compile(ca);
    if (*reason) return run_reason(ra);
    if (*trainc) return run_train(ta);
    if (*extract) return run_extract(ea);
    if (*verify) return run_verify(va);
    if (*ingest) return run_ingest(ia);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "rbmlogic: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
