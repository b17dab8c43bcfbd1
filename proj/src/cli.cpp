#include "retrial/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "retrial/bench.hpp"

namespace retrial {

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig load_scenario(const std::string& scenario_path, Variant variant) {
  ScenarioConfig cfg;
  if (!scenario_path.empty()) {
    cfg = ScenarioConfig::from_json(read_text_file(scenario_path));
  }
  cfg.variant = variant;
  return cfg;
}

constexpr const char* kSchemaFooter = R"(File formats (all JSON, snake_case keys):
  demos   line 1 header {"format":"retrial-demos","version":1,"variant",...,
          "count","mean_length","feature_mean","feature_std"}; then one
          trajectory per line {"id","hidden","steps":[{"obs":[15],"proprio":[3],
          "action":[3],"reward"}]}.
  value   single object {"format":"retrial-value","version":1,"backend",
          layer shapes, row-major "w1","b1","w2","b2","feature_mean",
          "feature_std","metadata"}.
  bench   {"variants":[...],"trials":N,"demos":path,"value_models":[paths],
          "model_seeds":[...],"methods":[...],"horizon","max_recoveries","n_skew"}.
  scenario {"variant","placement_region":{"x_min",...},"affordance_offsets":
          [[dx,dy]x4],"goal_center":[x,y],"goal_radius","grasp_radius",
          "v_max","home":[x,y,gripper]}.
)";

int run_gen_demos(const std::string& variant, int count, std::uint64_t seed,
                  const std::string& out_path, const std::string& scenario_path) {
  ScenarioConfig cfg = load_scenario(scenario_path, variant_from_string(variant));
  SeedStream rng(seed, 0);
  Dataset dataset = generate_demos(cfg, count, rng);
  write_dataset(dataset, out_path);
  std::cout << "wrote " << dataset.trajectories.size() << " demos (mean length "
            << dataset.meta.mean_length << ") to " << out_path << "\n";
  return 0;
}

int run_train_value(const std::string& demos_path, const std::string& backend_name,
                    std::uint64_t seed, int steps, double lr, int batch,
                    const std::string& out_path) {
  const Dataset dataset = read_dataset(demos_path);
  TrainConfig cfg;
  cfg.seed = seed;
  cfg.steps = steps;
  cfg.learning_rate = lr;
  cfg.batch_size = batch;
  TrainReport rep;
  const ValueModel model = train(dataset, backend_from_string(backend_name), cfg, &rep);
  write_model(model, out_path);
  const std::size_t tail = std::min<std::size_t>(100, rep.losses.size());
  double tail_loss = 0.0;
  for (std::size_t i = rep.losses.size() - tail; i < rep.losses.size(); ++i)
    tail_loss += rep.losses[i];
  std::cout << "trained " << backend_name << " value model (" << steps << " steps, final loss "
            << tail_loss / tail << ") to " << out_path << "\n";
  return 0;
}

int run_eval(const std::string& config_path, const std::string& out_dir) {
  BenchConfig cfg = BenchConfig::from_json(read_text_file(config_path));
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (cfg.out_dir.empty()) throw ConfigError("eval: no output directory given");
  const std::vector<TrialRecord> records = run_matched(cfg);
  const Summary summary = summarize(records);
  report(summary, records, cfg.out_dir);
  std::cout << "wrote " << records.size() << " trial records to " << cfg.out_dir << "\n";
  for (const auto& ms : summary.entries) {
    std::cout << "  " << to_string(ms.variant) << " / " << to_string(ms.method) << ": success "
              << ms.success_mean << " +- " << ms.success_std << ", steps " << ms.steps_mean
              << "\n";
  }
  return 0;
}

int run_report(const std::string& records_path, const std::string& out_dir) {
  std::ifstream in(records_path);
  if (!in) throw ParseError("cannot open: " + records_path);
  std::vector<TrialRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    records.push_back(record_from_json(line, line_no));
  }
  const Summary summary = summarize(records);
  report(summary, records, out_dir);
  std::cout << "summarized " << records.size() << " records into " << out_dir << "\n";
  return 0;
}

int run_trace(const std::string& demos_path, const std::string& value_path,
              std::uint64_t scenario_seed, const std::string& variant_name,
              const std::string& out_path, const std::string& scenario_path) {
  const Dataset dataset = read_dataset(demos_path);
  const RetrievalPolicy policy(dataset);
  const ValueModel model = read_model(value_path);
  ScenarioConfig scenario = load_scenario(scenario_path, variant_from_string(variant_name));

  DeployConfig deploy = make_deploy_config(Method::ours_full, dataset.meta.mean_length, 400, 20);
  deploy.monitor.backend = model.backend;

  SeedStream scenario_rng(scenario_seed, 0);
  SeedStream dynamics_rng(scenario_seed, 1);
  SeedStream policy_rng(scenario_seed, 2);
  const EpisodeResult result =
      run_episode(scenario, policy, &model, deploy, scenario_rng, dynamics_rng, policy_rng);

  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open for writing: " + out_path);
  out << "step,delta,threshold,triggered\n";
  for (const auto& row : result.trace)
    out << row.step << ',' << row.delta << ',' << row.threshold << ',' << (row.triggered ? 1 : 0)
        << '\n';
  if (!out) throw ParseError("write failed: " + out_path);

  std::cout << "episode " << (result.success ? "succeeded" : "failed") << " after " << result.steps
            << " steps with " << result.recoveries << " recoveries; trace in " << out_path << "\n";
  return 0;
}

}  // namespace

int cli(int argc, const char* const* argv) {
  CLI::App app{"retrial: value-guided trial-and-error deployment in a synthetic grasp world"};
  app.footer(kSchemaFooter);
  app.require_subcommand(1);

  // gen-demos
  auto* gen = app.add_subcommand("gen-demos", "Generate expert demonstrations");
  std::string gen_variant = "train", gen_out, gen_scenario;
  int gen_count = 100;
  std::uint64_t gen_seed = 0;
  gen->add_option("--variant", gen_variant, "Scenario variant")->capture_default_str();
  gen->add_option("--count", gen_count, "Number of demos")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output dataset path")->required();
  gen->add_option("--scenario", gen_scenario, "Scenario config JSON file");

  // train-value
  auto* tv = app.add_subcommand("train-value", "Train a value model from demos");
  std::string tv_demos, tv_backend = "categorical", tv_out;
  std::uint64_t tv_seed = 0;
  int tv_steps = 20000, tv_batch = 64;
  double tv_lr = 1e-3;
  tv->add_option("--demos", tv_demos, "Demos dataset path")->required();
  tv->add_option("--backend", tv_backend, "scalar or categorical")->capture_default_str();
  tv->add_option("--seed", tv_seed, "Training seed")->capture_default_str();
  tv->add_option("--steps", tv_steps, "Gradient steps")->capture_default_str();
  tv->add_option("--lr", tv_lr, "Learning rate")->capture_default_str();
  tv->add_option("--batch", tv_batch, "Batch size")->capture_default_str();
  tv->add_option("--out", tv_out, "Output model path")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "Run the matched-pair benchmark");
  std::string ev_config, ev_out;
  ev->add_option("--config", ev_config, "Bench config JSON file")->required();
  ev->add_option("--out", ev_out, "Output directory (overrides config out_dir)");

  // report
  auto* rp = app.add_subcommand("report", "Re-summarize a trials.jsonl file");
  std::string rp_records, rp_out;
  rp->add_option("--records", rp_records, "trials.jsonl path")->required();
  rp->add_option("--out", rp_out, "Output directory")->required();

  // trace
  auto* tr = app.add_subcommand("trace", "Emit a monitor trace for one episode");
  std::string tr_demos, tr_value, tr_variant = "adversarial_slip", tr_out, tr_scenario;
  std::uint64_t tr_seed = 0;
  tr->add_option("--demos", tr_demos, "Demos dataset path")->required();
  tr->add_option("--value", tr_value, "Value model path")->required();
  tr->add_option("--scenario-seed", tr_seed, "Episode seed")->capture_default_str();
  tr->add_option("--variant", tr_variant, "Scenario variant")->capture_default_str();
  tr->add_option("--out", tr_out, "Output CSV path")->required();
  tr->add_option("--scenario", tr_scenario, "Scenario config JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return run_gen_demos(gen_variant, gen_count, gen_seed, gen_out, gen_scenario);
    if (tv->parsed())
      return run_train_value(tv_demos, tv_backend, tv_seed, tv_steps, tv_lr, tv_batch, tv_out);
    if (ev->parsed()) return run_eval(ev_config, ev_out);
    if (rp->parsed()) return run_report(rp_records, rp_out);
    if (tr->parsed()) return run_trace(tr_demos, tr_value, tr_seed, tr_variant, tr_out, tr_scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace retrial
