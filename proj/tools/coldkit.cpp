// Copyright 2026 The coldkit Authors.
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

// coldkit command-line driver.
//
//   coldkit gen-scenes --seed 7 --count 10 --distractors chair:2 --out scenes/
//   coldkit generate   --scenes scenes/ --out run/
//   coldkit ground     --scenes scenes/ --instructions run/instructions.jsonl
//   coldkit evaluate   --scenes scenes/ --instructions run/instructions.jsonl --perturb close
//   coldkit perturb    --scenes scenes/ --instructions run/instructions.jsonl --mode far
//   coldkit losses selftest
//
// A JSON file given with --config supplies values for flags that are absent
// from the command line. Keys are flag names with '_' or '-'.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coldkit/errors.hpp"
#include "coldkit/io.hpp"
#include "coldkit/pipeline.hpp"
#include "json.hpp"

namespace {

using coldkit::RunConfig;

// The innermost subcommand named by the leading words of args.
const CLI::App* selected_command(const CLI::App& app, const std::vector<std::string>& args) {
  const CLI::App* cmd = &app;
  for (const auto& a : args) {
    if (a.rfind('-', 0) == 0) break;
    const CLI::App* sub = cmd->get_subcommand_no_throw(a);
    if (sub == nullptr) break;
    cmd = sub;
  }
  return cmd;
}

// Appends "--flag value..." for every config key the user did not pass and
// the selected subcommand accepts.
std::vector<std::string> merge_config(std::vector<std::string> args, const CLI::App& app) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const std::string name = a.substr(0, a.find('='));
    given.insert(name);
    if (name == "--config") {
      if (a.size() > name.size()) {
        path = a.substr(name.size() + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw coldkit::MalformedFile("cannot open config " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw coldkit::MalformedFile("config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw coldkit::MalformedFile("config " + path + " must be a JSON object");
  if (cfg.contains("thresholds") && cfg["thresholds"].is_object()) {
    for (const auto& [k, v] : cfg["thresholds"].items()) cfg[k] = v;
    cfg.erase("thresholds");
  }

  const CLI::App* cmd = selected_command(app, args);
  auto scalar = [](const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (char& c : flag) c = c == '_' ? '-' : c;
    if (given.count(flag) || value.is_null() || flag == "--config") continue;
    if (cmd->get_option_no_throw(flag) == nullptr) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(v));
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

void add_common(CLI::App* cmd, RunConfig& c, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON file with default flag values");
  cmd->add_option("--seed", c.seed, "Master seed")->envname("COLDKIT_SEED");
  cmd->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_thresholds(CLI::App* cmd, RunConfig& c) {
  auto& th = c.thresholds;
  cmd->add_option("--near-max", th.near_max, "Centroid distance below which objects are near");
  cmd->add_option("--far-min", th.far_min, "Centroid distance above which objects are far");
  cmd->add_option("--support-gap", th.support_gap, "Max bottom/top gap for 'on'");
  cmd->add_option("--between-perp", th.between_perp, "Max distance to the anchor segment");
  cmd->add_option("--between-t-lo", th.between_t_lo, "Lower bound of the projection onto the anchor segment");
  cmd->add_option("--between-t-hi", th.between_t_hi, "Upper bound of the projection onto the anchor segment");
}

void write_or_print(const std::string& out, const coldkit::ordered_json& value) {
  if (out.empty()) {
    std::cout << value.dump(2) << '\n';
  } else {
    coldkit::write_json(out, value);
  }
}

void write_or_print_lines(const std::string& out, const std::vector<coldkit::ordered_json>& rows) {
  if (out.empty()) {
    for (const auto& r : rows) std::cout << r.dump() << '\n';
  } else {
    coldkit::write_jsonl(out, rows);
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  std::string config_path;
  std::string distractors;
  std::vector<double> room;
  std::string perturb_mode;
  std::string out_file;
  int selftest_batches = 100;
  int selftest_pairs = 1000;

  CLI::App app{"coldkit: distractor-aware spatial instruction toolkit", "coldkit"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-scenes", "Generate synthetic indoor scenes");
  add_common(gen, config, config_path);
  gen->add_option("--count", config.scene_count, "Number of scenes")->check(CLI::NonNegativeNumber);
  gen->add_option("--objects", config.object_count, "Pool objects per scene");
  gen->add_option("--distractors", distractors, "category:k forces k distractors of a category");
  gen->add_option("--room", room, "Room extent x y z")->expected(3);
  gen->add_option("--min-separation", config.min_separation, "Minimum centroid distance");
  gen->add_option("--pool", config.category_pool, "Category pool (default: built-in list)");
  gen->add_option("-o,--out", config.output_dir, "Output directory");

  auto* generate = app.add_subcommand("generate", "Generate instructions and token sequences");
  add_common(generate, config, config_path);
  add_thresholds(generate, config);
  generate->add_option("--scenes", config.scenes_path, "Scene directory or file")->required();
  generate->add_option("-o,--out", config.output_dir, "Output directory");
  generate->add_option("--classifier", config.classifier, "Distractor classifier")
      ->check(CLI::IsMember({"oracle", "features"}));
  generate->add_option("--prototypes", config.prototypes_path, "Prototype file for --classifier features");
  generate->add_option("--max-anchors", config.max_anchors, "Anchors per token sequence")->check(CLI::PositiveNumber);
  generate->add_option("--ambiguous-rate", config.ambiguous_rate, "Probability of injecting an ambiguous anchor")->check(CLI::Range(0.0, 1.0));
  generate->add_flag("--all-targets", config.all_targets, "Also emit objects without distractors");

  auto* ground = app.add_subcommand("ground", "Ground instructions with the rule-based oracle");
  add_common(ground, config, config_path);
  add_thresholds(ground, config);
  ground->add_option("--scenes", config.scenes_path, "Scene directory or file")->required();
  ground->add_option("--instructions", config.instructions_path, "Instructions JSONL")->required();
  ground->add_option("-o,--out", out_file, "Output JSONL (default stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Grounding, metric and perturbation report");
  add_common(evaluate, config, config_path);
  add_thresholds(evaluate, config);
  evaluate->add_option("--scenes", config.scenes_path, "Scene directory or file")->required();
  evaluate->add_option("--instructions", config.instructions_path, "Instructions JSONL")->required();
  evaluate->add_option("--references", config.references_path, "Reference instructions JSONL");
  evaluate->add_option("--perturb", perturb_mode, "Add a perturbation study in this mode")->check(CLI::IsMember({"far", "close"}));
  evaluate->add_option("-o,--out", out_file, "Output JSON (default stdout)");

  auto* perturb = app.add_subcommand("perturb", "Replace spatial terms with far/close");
  add_common(perturb, config, config_path);
  add_thresholds(perturb, config);
  perturb->add_option("--scenes", config.scenes_path, "Scene directory or file")->required();
  perturb->add_option("--instructions", config.instructions_path, "Instructions JSONL")->required();
  perturb->add_option("--mode", perturb_mode, "Replacement phrase")->required()->check(CLI::IsMember({"far", "close"}));
  perturb->add_option("-o,--out", out_file, "Output JSONL (default stdout)");

  auto* losses = app.add_subcommand("losses", "Alignment loss utilities");
  losses->require_subcommand(1);
  auto* selftest = losses->add_subcommand("selftest", "Finite-difference gradient checks");
  add_common(selftest, config, config_path);
  selftest->add_option("--batches", selftest_batches, "Random embedding batches")->check(CLI::PositiveNumber);
  selftest->add_option("--pairs", selftest_pairs, "Random distribution pairs")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args), app);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const coldkit::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 1;
  }

  try {
    if (!distractors.empty()) config.distractors = coldkit::parse_distractor_flag(distractors);
    if (!room.empty()) config.room_extent = Eigen::Vector3d(room[0], room[1], room[2]);
    if (!perturb_mode.empty()) config.perturb = coldkit::perturb_mode_from_string(perturb_mode);

    if (gen->parsed()) {
      const auto paths = coldkit::cmd_gen_scenes(config);
      std::cerr << "wrote " << paths.size() << " scenes to " << config.output_dir << '\n';
    } else if (generate->parsed()) {
      const auto corpus = coldkit::cmd_generate(config);
      std::cerr << "wrote " << corpus.instructions.size() << " instructions to "
                << config.output_dir << '\n';
    } else if (ground->parsed()) {
      write_or_print_lines(out_file, coldkit::cmd_ground(config));
    } else if (evaluate->parsed()) {
      write_or_print(out_file, coldkit::cmd_evaluate(config));
    } else if (perturb->parsed()) {
      std::vector<coldkit::ordered_json> rows;
      for (const auto& ins : coldkit::cmd_perturb(config)) rows.push_back(coldkit::to_json(ins));
      write_or_print_lines(out_file, rows);
    } else if (selftest->parsed()) {
      const auto s = coldkit::run_loss_selftest(config.seed, selftest_batches, selftest_pairs);
      coldkit::ordered_json j;
      j["batches"] = s.batches;
      j["max_stage1_grad_error"] = s.max_stage1_error;
      j["max_probability_grad_error"] = s.max_probability_grad_error;
      j["max_logit_grad_error"] = s.max_logit_grad_error;
      j["tolerance"] = coldkit::kGradientTolerance;
      j["zero_iff_failures"] = s.zero_iff_failures;
      j["gibbs_violations"] = s.gibbs_violations;
      j["passed"] = s.passed();
      std::cout << j.dump(2) << '\n';
      if (!s.passed()) return 1;
    }
  } catch (const coldkit::Error& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "Error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
