#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string cli_path() {
  const char* env = std::getenv("RLAB_CLI");
  REQUIRE_MESSAGE(env != nullptr, "RLAB_CLI must point at the rlab binary");
  return env;
}

RunResult run(const std::string& args) {
  std::string command = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[512];
  while (fgets(buffer, sizeof(buffer), pipe)) result.output += buffer;
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("rlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kTinyTrain =
    "algorithm = nprm\n"
    "game = rps-sampled\n"
    "horizon = 8\n"
    "epochs = 6\n"
    "batch_size = 2\n"
    "hidden_dim = 4\n"
    "eval_every = 0\n"
    "timing = false\n"
    "seed = 11\n";

}  // namespace

TEST_CASE("missing required config key names the key and exits 2") {
  fs::path dir = fresh_dir("missing_key");
  write_file(dir / "train.cfg", "algorithm = nprm\n");  // no `game`
  RunResult r = run("train --config " + (dir / "train.cfg").string() + " --out " +
                    (dir / "out").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("game") != std::string::npos);
}

TEST_CASE("unknown config key is rejected with its line") {
  fs::path dir = fresh_dir("unknown_key");
  write_file(dir / "train.cfg", std::string(kTinyTrain) + "learning_rate = 3\n");
  RunResult r = run("train --config " + (dir / "train.cfg").string() + " --out " +
                    (dir / "out").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("learning_rate") != std::string::npos);
}

TEST_CASE("training twice with the same seed gives byte-identical checkpoints") {
  fs::path dir = fresh_dir("repro");
  write_file(dir / "train.cfg", kTinyTrain);
  RunResult a = run("train --config " + (dir / "train.cfg").string() + " --out " +
                    (dir / "a").string());
  RunResult b = run("train --config " + (dir / "train.cfg").string() + " --out " +
                    (dir / "b").string());
  REQUIRE_MESSAGE(a.exit_code == 0, a.output);
  REQUIRE(b.exit_code == 0);
  CHECK(read_file(dir / "a" / "checkpoint.ckpt") == read_file(dir / "b" / "checkpoint.ckpt"));
  CHECK(read_file(dir / "a" / "training.csv") == read_file(dir / "b" / "training.csv"));
  CHECK(read_file(dir / "a" / "config.resolved") == read_file(dir / "b" / "config.resolved"));
}

TEST_CASE("output collisions require --force") {
  fs::path dir = fresh_dir("collision");
  write_file(dir / "train.cfg", kTinyTrain);
  std::string out = (dir / "out").string();
  RunResult first = run("train --config " + (dir / "train.cfg").string() + " --out " + out);
  REQUIRE_MESSAGE(first.exit_code == 0, first.output);
  RunResult second = run("train --config " + (dir / "train.cfg").string() + " --out " + out);
  CHECK(second.exit_code == 2);
  CHECK(second.output.find("--force") != std::string::npos);
  RunResult forced =
      run("train --config " + (dir / "train.cfg").string() + " --out " + out + " --force");
  CHECK(forced.exit_code == 0);
}

TEST_CASE("eval writes one row per step") {
  fs::path dir = fresh_dir("eval_rows");
  RunResult r = run("eval --algo rm --game rps-fixed --games 1 --steps 8 --timing false --out " +
                    (dir / "out").string());
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  std::string csv = read_file(dir / "out" / "rm.csv");
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 9);  // header + 8 steps
  CHECK(csv.rfind("step,expl_mean,expl_stderr,env_time_ms,algo_time_ms", 0) == 0);
}

TEST_CASE("unknown ids are rejected") {
  fs::path dir = fresh_dir("unknown_ids");
  RunResult bad_algo = run("eval --algo sarsa --game rps-fixed --out " + (dir / "a").string());
  CHECK(bad_algo.exit_code == 2);
  RunResult bad_game = run("eval --algo rm --game chess --out " + (dir / "b").string());
  CHECK(bad_game.exit_code == 2);
  RunResult neural_without_ckpt =
      run("eval --algo nprm --game rps-fixed --out " + (dir / "c").string());
  CHECK(neural_without_ckpt.exit_code == 2);
}

TEST_CASE("checkpoint/game mismatch is a structured error") {
  fs::path dir = fresh_dir("mismatch");
  write_file(dir / "train.cfg", kTinyTrain);
  RunResult train = run("train --config " + (dir / "train.cfg").string() + " --out " +
                        (dir / "out").string());
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);
  RunResult eval = run("eval --checkpoint " + (dir / "out" / "checkpoint.ckpt").string() +
                       " --game endgame-sampled --games 1 --steps 4 --out " +
                       (dir / "eval").string());
  CHECK(eval.exit_code == 2);
  CHECK(eval.output.find("action count") != std::string::npos);
}

TEST_CASE("svg output is deterministic for identical inputs") {
  fs::path dir = fresh_dir("svg");
  std::string common =
      "eval --algo rm+ --game rps-fixed --games 2 --steps 8 --timing false --svg --out ";
  RunResult a = run(common + (dir / "a").string());
  RunResult b = run(common + (dir / "b").string());
  REQUIRE_MESSAGE(a.exit_code == 0, a.output);
  REQUIRE(b.exit_code == 0);
  std::string svg_a = read_file(dir / "a" / "rm+.svg");
  CHECK(!svg_a.empty());
  CHECK(svg_a == read_file(dir / "b" / "rm+.svg"));
  CHECK(read_file(dir / "a" / "rm+.csv") == read_file(dir / "b" / "rm+.csv"));
}

TEST_CASE("table handles a single curve and rejects bad targets") {
  fs::path dir = fresh_dir("table");
  write_file(dir / "rm.csv",
             "step,expl_mean,expl_stderr,env_time_ms,algo_time_ms\n"
             "1,0.5,0,0,0\n"
             "2,0.2,0,0,0\n"
             "3,0.05,0,0,0\n");
  RunResult ok = run("table --curves " + (dir / "rm.csv").string() + " --targets 0.25 --out " +
                     (dir / "table.csv").string());
  REQUIRE_MESSAGE(ok.exit_code == 0, ok.output);
  CHECK(ok.output.find("rm") != std::string::npos);
  std::string table_csv = read_file(dir / "table.csv");
  CHECK(table_csv.find("rm,2") != std::string::npos);

  RunResult bad = run("table --curves " + (dir / "rm.csv").string() + " --targets 0.1,0.4");
  CHECK(bad.exit_code == 2);

  RunResult reference = run("table --curves " + (dir / "rm.csv").string() +
                            " --targets 0.25 --paper-reference");
  CHECK(reference.exit_code == 0);
  CHECK(reference.output.find("615") != std::string::npos);
}

TEST_CASE("gradcheck exits by threshold") {
  fs::path dir = fresh_dir("gradcheck");
  write_file(dir / "ok.cfg",
             "graph = nprm\n"
             "game = uniform-3x3\n"
             "hidden_dim = 4\n"
             "horizon = 4\n"
             "instances = 3\n"
             "seed = 5\n");
  RunResult ok = run("gradcheck --config " + (dir / "ok.cfg").string());
  REQUIRE_MESSAGE(ok.exit_code == 0, ok.output);
  CHECK(ok.output.find("max relative error") != std::string::npos);
  CHECK(ok.output.find("head.weight") != std::string::npos);

  write_file(dir / "strict.cfg",
             "graph = noa\n"
             "game = rps-fixed\n"
             "hidden_dim = 4\n"
             "horizon = 4\n"
             "instances = 2\n"
             "seed = 5\n"
             "threshold = 1e-13\n");
  RunResult strict = run("gradcheck --config " + (dir / "strict.cfg").string());
  CHECK(strict.exit_code == 1);
}

TEST_CASE("dump-game emits a replayable snapshot") {
  RunResult r = run("dump-game --game rps-sampled --seed 123");
  REQUIRE_MESSAGE(r.exit_code == 0, r.output);
  CHECK(r.output.find("distribution = rps-sampled") != std::string::npos);
  CHECK(r.output.find("seed = 123") != std::string::npos);
  CHECK(r.output.find("payoff_row_0") != std::string::npos);

  RunResult again = run("dump-game --game rps-sampled --seed 123");
  CHECK(r.output == again.output);
}

TEST_CASE("ood on a fresh untrained checkpoint reports the verdict") {
  fs::path dir = fresh_dir("ood");
  write_file(dir / "train.cfg",
             "algorithm = nprm\n"
             "game = rps-sampled\n"
             "horizon = 8\n"
             "epochs = 0\n"
             "batch_size = 1\n"
             "hidden_dim = 4\n"
             "eval_every = 0\n"
             "timing = false\n");
  RunResult train = run("train --config " + (dir / "train.cfg").string() + " --out " +
                        (dir / "out").string());
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);
  RunResult ood = run("ood --checkpoint " + (dir / "out" / "checkpoint.ckpt").string() +
                      " --eval-dist uniform-3x3 --games 8 --steps 16 --timing false --out " +
                      (dir / "ood_out").string());
  REQUIRE_MESSAGE(ood.exit_code == 0, ood.output);
  CHECK(ood.output.find("verdict: bound holds") != std::string::npos);
  CHECK(fs::exists(dir / "ood_out" / "in_dist.csv"));
  CHECK(fs::exists(dir / "ood_out" / "out_dist.csv"));

  RunResult wrong_dist = run("ood --checkpoint " + (dir / "out" / "checkpoint.ckpt").string() +
                             " --train-dist uniform-3x3 --eval-dist rps-sampled --out " +
                             (dir / "ood_bad").string());
  CHECK(wrong_dist.exit_code == 2);
}
