#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "negotiation/config.hpp"
#include "negotiation/experiments.hpp"
#include "negotiation/neural/checkpoint.hpp"
#include "negotiation/tft_agents.hpp"
#include "negotiation/time_agents.hpp"

using namespace negotiation;
using namespace negotiation::experiments;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "neg_exp_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("agent specs parse into the right kinds and parameters") {
  AgentSpec lin = parse_agent_spec(" linear ");
  CHECK(lin.kind == AgentSpec::Kind::kTime);
  CHECK(lin.time.c == 1.0);
  CHECK(lin.text == "linear");

  AgentSpec bw = parse_agent_spec("boulware");
  CHECK(bw.time.c == 0.5);
  AgentSpec cj = parse_agent_spec("conceder");
  CHECK(cj.time.c == 2.0);
  AgentSpec c10 = parse_agent_spec("conceder(c=10)");
  CHECK(c10.time.c == 10.0);
  CHECK(c10.text == "conceder(c=10)");

  AgentSpec full =
      parse_agent_spec("time(c=2, mode=preference, noise_sigma=0.1, "
                       "p_min=0.2, p_max=0.9, k=0.05)");
  CHECK(full.time.c == 2.0);
  CHECK(full.time.mode == OfferMode::kPreference);
  CHECK(full.time.noise_sigma == 0.1);
  CHECK(full.time.p_min == 0.2);
  CHECK(full.time.p_max == 0.9);
  CHECK(full.time.k == 0.05);

  CHECK(parse_agent_spec("hardliner").kind == AgentSpec::Kind::kHardliner);
  CHECK(parse_agent_spec("random").kind == AgentSpec::Kind::kRandom);
  AgentSpec tft = parse_agent_spec("tft(delta=2)");
  CHECK(tft.kind == AgentSpec::Kind::kRelativeTft);
  CHECK(tft.tft_delta == 2);
  AgentSpec btft = parse_agent_spec("bayes_tft");
  CHECK(btft.kind == AgentSpec::Kind::kBayesianTft);
  CHECK(btft.tft_delta == 1);
}

TEST_CASE("agent spec errors") {
  CHECK_THROWS_AS((void)parse_agent_spec(""), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(c=1"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("frank"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(c=0)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(c=-1)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(c=abc)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("hardliner(c=1)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("tft(delta=0)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(delta=1)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(foo=1)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(c)"), ConfigError);
  CHECK_THROWS_AS((void)parse_agent_spec("time(mode=weird)"), ConfigError);
}

TEST_CASE("make_agent instantiates the matching agent type") {
  auto lin = make_agent(parse_agent_spec("linear"));
  CHECK(dynamic_cast<TimeAgent*>(lin.get()) != nullptr);
  auto hard = make_agent(parse_agent_spec("hardliner"));
  CHECK(dynamic_cast<Hardliner*>(hard.get()) != nullptr);
  auto rnd = make_agent(parse_agent_spec("random"));
  CHECK(dynamic_cast<RandomWalker*>(rnd.get()) != nullptr);
  auto tft = make_agent(parse_agent_spec("tft(delta=3)"));
  CHECK(dynamic_cast<RelativeTftAgent*>(tft.get()) != nullptr);
  auto btft = make_agent(parse_agent_spec("bayes_tft(delta=2)"));
  CHECK(dynamic_cast<BayesianTftAgent*>(btft.get()) != nullptr);
}

TEST_CASE("config parsing, lookup and strict consumption") {
  Config cfg = Config::parse_string(
      "top = 1\n"
      "# comment\n"
      "; other comment\n"
      "[scenario]\n"
      "deadline = 12\n"
      "discount = 0.9\n"
      "centipede = on\n"
      "[train]\n"
      "lr = 3e-4\n"
      "seed = 9000000000\n"
      "name = hello world\n",
      "test.ini");

  CHECK(cfg.has("top"));
  CHECK(cfg.has("scenario.deadline"));
  CHECK_FALSE(cfg.has("scenario.missing"));

  CHECK(cfg.get_int("top") == 1);
  CHECK(cfg.get_int("scenario.deadline", 20) == 12);
  CHECK(cfg.get_double("scenario.discount") == 0.9);
  CHECK(cfg.get_bool("scenario.centipede", false));
  CHECK(cfg.get_double("train.lr", 1.0) == 3e-4);
  CHECK(cfg.get_u64("train.seed", 1) == 9000000000ULL);
  CHECK(cfg.get_u64("train.absent", 7) == 7);
  CHECK(cfg.get_string("train.name") == "hello world");
  CHECK(cfg.get_string("train.absent2", "x") == "x");
  cfg.require_consumed();

  Config strict = Config::parse_string("[train]\nstray = 1\n", "s.ini");
  CHECK(strict.unconsumed() == std::vector<std::string>{"train.stray"});
  CHECK_THROWS_WITH_AS(strict.require_consumed(),
                       "unknown field: 'train.stray' (s.ini:2)", ConfigError);

  Config typed = Config::parse_string("a = xyz\nb = 1.5\nc = 1x\n", "t.ini");
  CHECK_THROWS_AS((void)typed.get_double("a"), ConfigError);
  CHECK_THROWS_AS((void)typed.get_int("b"), ConfigError);
  CHECK_THROWS_AS((void)typed.get_int("c"), ConfigError);
  CHECK_THROWS_AS((void)typed.get_bool("a", true), ConfigError);
  CHECK_THROWS_AS((void)typed.get_string("missing"), ConfigError);

  CHECK_THROWS_AS((void)Config::parse_string("[open\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("[]\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("bare line\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("= 5\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_string("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_file("/nonexistent/path.ini"),
                  ConfigError);

  // has() alone does not consume.
  Config peek = Config::parse_string("k = 1\n", "p.ini");
  CHECK(peek.has("k"));
  CHECK_THROWS_AS(peek.require_consumed(), ConfigError);
}

TEST_CASE("resolved config renders grouped ini text") {
  ResolvedConfig snap;
  snap.set("alpha", "x");
  snap.set("run.command", "train");
  snap.set("run.seed", std::uint64_t{7});
  snap.set("scenario.deadline", 20);
  snap.set("scenario.discount", 1.0);
  snap.set("train.lr", 3e-5);
  snap.set("train.fresh", true);
  CHECK(snap.str() ==
        "alpha = x\n"
        "\n"
        "[run]\n"
        "command = train\n"
        "seed = 7\n"
        "\n"
        "[scenario]\n"
        "deadline = 20\n"
        "discount = 1\n"
        "\n"
        "[train]\n"
        "lr = 3e-05\n"
        "fresh = true\n");
}

TEST_CASE("output root honors the environment override") {
  const char* saved = std::getenv(kOutputRootEnv);
  const std::string saved_value = saved ? saved : "";
  setenv(kOutputRootEnv, "/tmp/neg-root", 1);
  CHECK(default_output_root() == "/tmp/neg-root");
  unsetenv(kOutputRootEnv);
  CHECK(default_output_root() == "runs");
  if (saved) setenv(kOutputRootEnv, saved_value.c_str(), 1);
}

TEST_CASE("cmd_train runs presets, snapshots and refuses clobbering") {
  const fs::path dir = fresh_dir("train_accept");
  const fs::path cfg_path = dir / "override.ini";
  write_file(cfg_path, "[train]\nhidden = 8\n");

  TrainArgs args;
  args.experiment = "accept_vs_conceder";
  args.config_path = cfg_path.string();
  args.output_dir = (dir / "run").string();
  args.seed = 5;
  args.epochs = 12;
  args.eval_games = 3;

  std::ostringstream out, err;
  REQUIRE(cmd_train(args, out, err) == kExitOk);
  CHECK(out.str().find("train accept_vs_conceder seed 5 (12 epochs)") !=
        std::string::npos);

  const std::string metrics = slurp(dir / "run" / "metrics.csv");
  CHECK(metrics.rfind("# schema: negotiation.metrics v1\n", 0) == 0);
  CHECK(count_lines(metrics) == 2 + 12);

  const std::string summary = slurp(dir / "run" / "eval_summary.csv");
  CHECK(summary.rfind("# schema: negotiation.summary v1\n", 0) == 0);
  CHECK(summary.find("\n3,") != std::string::npos);  // games column

  const std::string snap = slurp(dir / "run" / "config.ini");
  CHECK(snap.find("experiment = accept_vs_conceder") != std::string::npos);
  CHECK(snap.find("spec = time(c=10)") != std::string::npos);
  CHECK(snap.find("hidden = 8") != std::string::npos);
  CHECK(snap.find("seed = 5") != std::string::npos);

  const auto ckpt =
      neural::load_checkpoint((dir / "run" / "checkpoint.bin").string());
  CHECK(ckpt.epochs_trained == 12);
  CHECK(ckpt.master_seed == 5);
  REQUIRE(ckpt.policies.size() == 1);
  CHECK(ckpt.policies[0].binary->cfg.hidden == 8);

  // A second run into the same directory refuses to overwrite...
  std::ostringstream out2, err2;
  CHECK(cmd_train(args, out2, err2) == kExitUsage);
  CHECK(err2.str().find("already exists") != std::string::npos);

  // ...and --overwrite reruns byte-identically (same seed, same stream).
  args.overwrite = true;
  std::ostringstream out3, err3;
  REQUIRE(cmd_train(args, out3, err3) == kExitOk);
  CHECK(slurp(dir / "run" / "metrics.csv") == metrics);
}

TEST_CASE("cmd_train usage errors") {
  std::ostringstream out, err;
  TrainArgs unknown;
  unknown.experiment = "nope";
  CHECK(cmd_train(unknown, out, err) == kExitUsage);
  CHECK(err.str().find("unknown experiment 'nope'") != std::string::npos);
  CHECK(err.str().find("accept_vs_linear") != std::string::npos);

  const fs::path dir = fresh_dir("train_usage");

  // custom requires train.mode.
  TrainArgs custom;
  custom.experiment = "custom";
  custom.output_dir = (dir / "c1").string();
  std::ostringstream out2, err2;
  CHECK(cmd_train(custom, out2, err2) == kExitUsage);
  CHECK(err2.str().find("train.mode") != std::string::npos);

  // train.mode conflicts with concrete presets.
  write_file(dir / "mode.ini", "[train]\nmode = accept\n");
  TrainArgs preset;
  preset.experiment = "accept_vs_linear";
  preset.config_path = (dir / "mode.ini").string();
  preset.output_dir = (dir / "c2").string();
  std::ostringstream out3, err3;
  CHECK(cmd_train(preset, out3, err3) == kExitUsage);

  // Unknown config keys are rejected.
  write_file(dir / "stray.ini", "[train]\nhidden = 8\nbogus = 1\n");
  TrainArgs stray;
  stray.experiment = "accept_vs_linear";
  stray.config_path = (dir / "stray.ini").string();
  stray.output_dir = (dir / "c3").string();
  std::ostringstream out4, err4;
  CHECK(cmd_train(stray, out4, err4) == kExitUsage);
  CHECK(err4.str().find("bogus") != std::string::npos);

  // Accept training needs a time-based opponent.
  write_file(dir / "opp.ini", "[train]\nhidden = 8\n[opponent]\nspec = hardliner\n");
  TrainArgs opp;
  opp.experiment = "accept_vs_linear";
  opp.config_path = (dir / "opp.ini").string();
  opp.output_dir = (dir / "c4").string();
  std::ostringstream out5, err5;
  CHECK(cmd_train(opp, out5, err5) == kExitUsage);
  CHECK(err5.str().find("time-based") != std::string::npos);
}

TEST_CASE("cmd_train custom mode and resume") {
  const fs::path dir = fresh_dir("train_custom");
  write_file(dir / "offer.ini",
             "[train]\n"
             "mode = offer\n"
             "trunk_width = 8\n"
             "value_width = 8\n"
             "value_layers = 2\n"
             "head_width = 4\n"
             "head = cauchy\n"
             "[opponent]\n"
             "spec = linear\n");

  TrainArgs args;
  args.experiment = "custom";
  args.config_path = (dir / "offer.ini").string();
  args.output_dir = (dir / "a").string();
  args.seed = 3;
  args.epochs = 4;
  args.eval_games = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_train(args, out, err) == kExitOk);
  const auto first =
      neural::load_checkpoint((dir / "a" / "checkpoint.bin").string());
  CHECK(first.epochs_trained == 4);
  REQUIRE(first.policies.size() == 1);
  CHECK(first.policies[0].kind == neural::PolicyKind::kOffer);
  CHECK(first.policies[0].offer->cfg.head == neural::HeadKind::kCauchy);

  TrainArgs more = args;
  more.output_dir = (dir / "b").string();
  more.resume_path = (dir / "a" / "checkpoint.bin").string();
  std::ostringstream out2, err2;
  REQUIRE(cmd_train(more, out2, err2) == kExitOk);
  const auto second =
      neural::load_checkpoint((dir / "b" / "checkpoint.bin").string());
  CHECK(second.epochs_trained == 8);
  const std::string snap = slurp(dir / "b" / "config.ini");
  CHECK(snap.find("resumed = true") != std::string::npos);
}

TEST_CASE("cmd_play random baseline and trained checkpoints") {
  const fs::path dir = fresh_dir("play");

  PlayArgs random_args;
  random_args.checkpoint = "random";
  random_args.output_dir = (dir / "rand").string();
  random_args.games = 500;
  random_args.seed = 3;
  std::ostringstream out, err;
  REQUIRE(cmd_play(random_args, out, err) == kExitOk);
  const std::string summary = slurp(dir / "rand" / "summary.csv");
  CHECK(summary.find("\n500,nan,nan,nan,") != std::string::npos);
  CHECK(count_lines(slurp(dir / "rand" / "transcripts.csv")) == 2);

  // Train a small accept net, then play it against a conceder.
  write_file(dir / "small.ini", "[train]\nhidden = 8\n");
  TrainArgs train;
  train.experiment = "accept_vs_conceder";
  train.config_path = (dir / "small.ini").string();
  train.output_dir = (dir / "ckpt").string();
  train.seed = 4;
  train.epochs = 6;
  train.eval_games = 2;
  std::ostringstream tout, terr;
  REQUIRE(cmd_train(train, tout, terr) == kExitOk);

  PlayArgs play;
  play.checkpoint = (dir / "ckpt" / "checkpoint.bin").string();
  play.opponent = "conceder(c=10)";
  play.output_dir = (dir / "games").string();
  play.games = 4;
  play.seed = 2;
  std::ostringstream pout, perr;
  REQUIRE(cmd_play(play, pout, perr) == kExitOk);
  const std::string psum = slurp(dir / "games" / "summary.csv");
  CHECK(psum.find("\n4,") != std::string::npos);
  CHECK(slurp(dir / "games" / "config.ini").find("opponent = conceder(c=10)") !=
        std::string::npos);

  // A scenario the checkpoint's input layer cannot serve is a runtime error.
  write_file(dir / "two.ini",
             "[scenario]\nweights_a = 1,1\nweights_b = 1,1\n");
  PlayArgs mismatch = play;
  mismatch.config_path = (dir / "two.ini").string();
  mismatch.output_dir = (dir / "mismatch").string();
  std::ostringstream mout, merr;
  CHECK(cmd_play(mismatch, mout, merr) == kExitRuntime);
  CHECK(merr.str().find("checkpoint mismatch") != std::string::npos);

  PlayArgs missing = play;
  missing.checkpoint = (dir / "no_such.bin").string();
  missing.output_dir = (dir / "missing").string();
  std::ostringstream nout, nerr;
  CHECK(cmd_play(missing, nout, nerr) == kExitRuntime);
}

TEST_CASE("cmd_analyze writes the oracle bundle") {
  const fs::path dir = fresh_dir("analyze");
  AnalyzeArgs args;
  args.output_dir = (dir / "a").string();
  args.nash_step = 0.05;
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(args, out, err) == kExitOk);

  CHECK(slurp(dir / "a" / "frontier.csv") ==
        "# schema: negotiation.frontier v1\n"
        "a,b,c,u_a_min,u_a_max\n"
        "0.3333333333,1,-6,0,3\n"
        "1,1,-8,3,5\n"
        "3,1,-18,5,6\n");

  CHECK(slurp(dir / "a" / "nash.csv") ==
        "# schema: negotiation.nash v1\n"
        "share_1,share_2,share_3,u_a,u_b,product\n"
        "0,0.5,1,4,4,16\n");

  const std::string spne = slurp(dir / "a" / "spne.csv");
  CHECK(spne.find("centipede,0,0.9,0.1\n") != std::string::npos);
  CHECK(spne.find("bargaining,0,0.9,0.1\n") != std::string::npos);

  const std::string stopping = slurp(dir / "a" / "stopping.csv");
  CHECK(count_lines(stopping) == 2 + 8 * 5);
  CHECK(stopping.find("\n1,1,20,1\n") != std::string::npos);  // d=1: wait

  const std::string derivs = slurp(dir / "a" / "derivatives.csv");
  CHECK(count_lines(derivs) == 2 + 8 * 5 * 20);

  AnalyzeArgs bad = args;
  bad.nash_step = 0.0;
  std::ostringstream out2, err2;
  CHECK(cmd_analyze(bad, out2, err2) == kExitUsage);

  // Scenario overrides flow through: one issue leaves a single segment.
  write_file(dir / "uni.ini", "[scenario]\nweights_a = 2\nweights_b = 2\n");
  AnalyzeArgs uni;
  uni.config_path = (dir / "uni.ini").string();
  uni.output_dir = (dir / "u").string();
  std::ostringstream out3, err3;
  REQUIRE(cmd_analyze(uni, out3, err3) == kExitOk);
  CHECK(count_lines(slurp(dir / "u" / "frontier.csv")) == 3);
  CHECK(slurp(dir / "u" / "nash.csv").find("0.5,1,1,1\n") !=
        std::string::npos);
}

TEST_CASE("cmd_selfplay runs the bargain mini-game at toy scale") {
  const fs::path dir = fresh_dir("selfplay");

  SelfplayArgs bad;
  bad.mode = "tug_of_war";
  std::ostringstream bout, berr;
  CHECK(cmd_selfplay(bad, bout, berr) == kExitUsage);
  CHECK(berr.str().find("bargain, centipede, multivariate") !=
        std::string::npos);

  write_file(dir / "tiny.ini", "[train]\nhidden = 8\n");
  SelfplayArgs args;
  args.mode = "bargain";
  args.config_path = (dir / "tiny.ini").string();
  args.output_dir = (dir / "run").string();
  args.seed = 6;
  args.epochs = 8;
  args.eval_games = 2;
  std::ostringstream out, err;
  REQUIRE(cmd_selfplay(args, out, err) == kExitOk);
  const auto ckpt =
      neural::load_checkpoint((dir / "run" / "checkpoint.bin").string());
  CHECK(ckpt.epochs_trained == 8);
  CHECK(ckpt.policies.size() == 4);
  const std::string snap = slurp(dir / "run" / "config.ini");
  CHECK(snap.find("mode = bargain") != std::string::npos);
  CHECK(snap.find("discount = 0.9") != std::string::npos);
}

TEST_CASE("cmd_reproduce rejects unknown ids") {
  ReproduceArgs args;
  args.id = "table-9.9";
  std::ostringstream out, err;
  CHECK(cmd_reproduce(args, out, err) == kExitUsage);
  CHECK(err.str().find("table-4.1") != std::string::npos);
  CHECK(err.str().find("fig-4.15") != std::string::npos);
  CHECK(reproduce_ids().size() == 9);
}
