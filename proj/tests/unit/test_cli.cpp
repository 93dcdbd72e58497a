#include <doctest.h>

#include <CLI11.hpp>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "headctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = head::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("headctl_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("every option of every subcommand is documented") {
  const auto app = head::cli::make_app();
  const auto subs = app->get_subcommands([](CLI::App*) { return true; });
  CHECK(subs.size() == 5);
  for (const auto* sub : subs) {
    CHECK_FALSE(sub->get_description().empty());
    for (const auto* opt : sub->get_options()) {
      INFO(sub->get_name() << " " << opt->get_name());
      CHECK_FALSE(opt->get_description().empty());
    }
  }
}

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == head::cli::kExitOk);
  for (const char* sub : {"simulate", "orchestrate", "evaluate", "pfi-demo", "synth"}) {
    const auto r = run({sub, "--help"});
    CHECK(r.code == head::cli::kExitOk);
    CHECK_FALSE(r.out.empty());
  }
  CHECK(run({}).code == head::cli::kExitUsage);
  CHECK(run({"simulate", "--bogus"}).code == head::cli::kExitUsage);
  CHECK(run({"simulate", "--p", "1.5", "--sims", "10"}).code == head::cli::kExitUsage);
  CHECK(run({"simulate", "--profile", "HEaD 99"}).code == head::cli::kExitUsage);
  CHECK(run({"simulate", "--threads", "0"}).code == head::cli::kExitUsage);
  CHECK(run({"evaluate"}).code == head::cli::kExitUsage);
}

TEST_CASE("data errors exit with code 3") {
  const auto dir = scratch_dir();
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"([{"prompt": "p", "seed": 0, "requested_objects": [], "present_objects": [5]}])";
  const auto r = run({"evaluate", "--manifest", bad.string()});
  CHECK(r.code == head::cli::kExitData);
  CHECK(r.err.find("record 0") != std::string::npos);
  CHECK(run({"orchestrate", "--manifest", (dir / "missing.json").string()}).code == head::cli::kExitData);
}

TEST_CASE("simulate output is reproducible and thread-count independent") {
  const auto dir = scratch_dir();
  const std::vector<std::string> base = {"simulate", "--sims", "20000", "--ct-grid", "5,10,25"};
  auto with = [&](std::vector<std::string> extra, const std::string& name) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("--csv");
    args.push_back((dir / name).string());
    REQUIRE(run(args).code == 0);
    return slurp(dir / name);
  };
  const auto a = with({"--rng-seed", "11", "--threads", "1"}, "a.csv");
  const auto b = with({"--rng-seed", "11", "--threads", "1"}, "b.csv");
  const auto c = with({"--rng-seed", "11", "--threads", "3"}, "c.csv");
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.rfind("# {", 0) == 0);
  CHECK(a.find("ct,recall,tn_rate,p,k,saving_closed_form,saving_mc,std_error") != std::string::npos);
  const auto other = with({"--rng-seed", "12"}, "d.csv");
  CHECK(other != a);
}

TEST_CASE("synth, evaluate and orchestrate chain deterministically") {
  const auto dir = scratch_dir();
  const auto manifest = (dir / "m.json").string();
  REQUIRE(run({"synth", "--prompts", "30", "--seeds-per-prompt", "4", "--k", "2", "--relation",
               "--ct-grid", "5,25", "--rng-seed", "3", "--out", manifest})
              .code == 0);

  const auto e1 = run({"evaluate", "--manifest", manifest, "--n-max", "2", "--ct", "25", "--json", "-"});
  const auto e2 = run({"evaluate", "--manifest", manifest, "--n-max", "2", "--ct", "25", "--json", "-"});
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e2.out);

  const std::vector<std::string> orch = {"orchestrate", "--manifest", manifest, "--profile", "HEaD 25",
                                         "--rng-seed", "9", "--json", "-"};
  auto t1 = orch, t3 = orch;
  t1.insert(t1.end(), {"--threads", "1"});
  t3.insert(t3.end(), {"--threads", "3"});
  const auto o1 = run(t1), o1b = run(t1), o3 = run(t3);
  REQUIRE(o1.code == 0);
  CHECK(o1.out == o1b.out);
  CHECK(o1.out == o3.out);
  CHECK(o1.out.find("\"aggregate\"") != std::string::npos);
}

TEST_CASE("the seed can come from the environment or a config file") {
  const auto dir = scratch_dir();
  auto sim = [&](const std::string& prefix, const std::string& extra, const std::string& global = "") {
    const auto out = dir / "env.csv";
    const std::string cmd = prefix + " " + HEADCTL_PATH + " " + global + " simulate --sims 5000 --ct-grid 10 " + extra +
                            " --csv " + out.string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    return slurp(out);
  };
  const auto flag = sim("", "--rng-seed 77");
  CHECK(sim("HEAD_RNG_SEED=77", "") == flag);
  CHECK(sim("HEAD_RNG_SEED=78", "--rng-seed 77") == flag);

  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "[simulate]\nrng-seed = 77\n";
  CHECK(sim("", "", "--config " + cfg.string()) == flag);
  CHECK(sim("HEAD_RNG_SEED=78", "", "--config " + cfg.string()) == flag);
  CHECK(sim("", "--rng-seed 76", "--config " + cfg.string()) == sim("", "--rng-seed 76"));
}

TEST_CASE("pfi-demo runs on a custom schedule") {
  const auto r = run({"pfi-demo", "--total-steps", "40", "--ct-grid", "1,5,10,40", "--trials", "5", "--csv", "-"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("ct,") != std::string::npos);
  CHECK(run({"pfi-demo", "--alpha-bar", "1,0.5,0.6"}).code == head::cli::kExitUsage);
  // the scaled reference schedule needs T > 20 to keep every beta below 1
  CHECK(run({"pfi-demo", "--total-steps", "20"}).code == head::cli::kExitUsage);
}
