// End-to-end tests that drive the installed `cmx` binary through a shell.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string fixture(const std::string& name) {
  return std::string(CMX_FIXTURE_DIR) + "/" + name;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the CLI with stdout/stderr captured to temp files.
RunResult run(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "cli_stdout_" + std::to_string(counter) + ".txt";
  const std::string err_path = "cli_stderr_" + std::to_string(counter) + ".txt";
  ++counter;
  const std::string cmd = std::string(CMX_BIN) + " " + args + " >" + out_path +
                          " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// hyperparameters that converge on the small fixture corpora
const char* kQuickConfig = R"({
  "language": "ta",
  "classifier": "sgd",
  "sgd": {"learning_rate": 0.05, "alpha": 1e-5, "epochs": 30},
  "logreg": {"C": 1.0, "tol": 1e-5},
  "seed": 7
})";

struct TrainedModel {
  std::string path = "cli_model.json";
  TrainedModel() {
    write_file("cli_config.json", kQuickConfig);
    const RunResult r = run("train --train " + fixture("cli_train.tsv") +
                            " --config cli_config.json --model " + path);
    REQUIRE(r.exit_code == 0);
  }
};

const TrainedModel& model() {
  static const TrainedModel m;
  return m;
}

}  // namespace

TEST_CASE("train writes a model and prints a validation report") {
  write_file("cli_config.json", kQuickConfig);
  const RunResult r = run("train --train " + fixture("cli_train.tsv") +
                          " --val " + fixture("cli_val.tsv") +
                          " --config cli_config.json --model cli_model_val.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("trained sgd") != std::string::npos);
  CHECK(r.out.find("weighted") != std::string::npos);
  std::ifstream model_file("cli_model_val.json");
  CHECK(model_file.good());

  // the fixture corpus is easy: the validation F1 must be high
  const RunResult eval = run("evaluate --model cli_model_val.json --input " +
                             fixture("cli_val.tsv") + " --format json");
  REQUIRE(eval.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(eval.out);
  CHECK(j["weighted"]["f1"].get<double>() >= 0.9);
}

TEST_CASE("missing input file exits 2 and names the path") {
  const RunResult r = run("train --train no_such_file.tsv --model m.json");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("no_such_file.tsv") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("train --model only.json").exit_code == 1);  // --train missing
  CHECK(run("nonsense-subcommand").exit_code == 1);
  CHECK(run("").exit_code == 1);  // subcommand required
  const RunResult bad_lang = run(
      "train --train " + fixture("cli_train.tsv") +
      " --model m.json --lang xx");
  CHECK(bad_lang.exit_code == 1);
}

TEST_CASE("the same seed reproduces the model file byte for byte") {
  write_file("cli_config.json", kQuickConfig);
  const std::string base = "train --train " + fixture("cli_train.tsv") +
                           " --config cli_config.json --seed 42 --model ";
  REQUIRE(run(base + "cli_seed_a.json").exit_code == 0);
  REQUIRE(run(base + "cli_seed_b.json").exit_code == 0);
  CHECK(slurp("cli_seed_a.json") == slurp("cli_seed_b.json"));
  // a different seed produces a different SGD model
  REQUIRE(run("train --train " + fixture("cli_train.tsv") +
              " --config cli_config.json --seed 43 --model cli_seed_c.json")
              .exit_code == 0);
  CHECK(slurp("cli_seed_a.json") != slurp("cli_seed_c.json"));
}

TEST_CASE("predict labels a text-only file") {
  write_file("cli_predict_in.tsv",
             "semma padam vera level\n"
             "mokka padam waste\n"
             "\xF0\x9F\x94\xA5\xF0\x9F\x94\xA5 semma\n");
  const RunResult r = run("predict --model " + model().path +
                          " --input cli_predict_in.tsv --output cli_predict_out.tsv");
  REQUIRE(r.exit_code == 0);
  const std::string out = slurp("cli_predict_out.tsv");
  std::istringstream lines(out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find('\t') != std::string::npos);
    ++n;
  }
  CHECK(n == 3);
  CHECK(out.find("semma padam vera level\tpositive") != std::string::npos);
  CHECK(out.find("mokka padam waste\tnegative") != std::string::npos);
  CHECK(out.find("\xF0\x9F\x94\xA5\xF0\x9F\x94\xA5 semma\tpositive") !=
        std::string::npos);
}

TEST_CASE("predict on an empty input produces an empty output") {
  write_file("cli_empty.tsv", "");
  const RunResult r = run("predict --model " + model().path +
                          " --input cli_empty.tsv --output cli_empty_out.tsv");
  CHECK(r.exit_code == 0);
  CHECK(slurp("cli_empty_out.tsv").empty());
}

TEST_CASE("evaluate text format prints per-label rows") {
  const RunResult r = run("evaluate --model " + model().path + " --input " +
                          fixture("cli_val.tsv"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("label") != std::string::npos);
  CHECK(r.out.find("positive") != std::string::npos);
  CHECK(r.out.find("not-tamil") != std::string::npos);
  CHECK(r.out.find("weighted") != std::string::npos);
}

TEST_CASE("evaluate warns when --lang contradicts the model") {
  const RunResult r = run("evaluate --model " + model().path + " --input " +
                          fixture("cli_val.tsv") + " --lang ml");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("tune over a single point matches plain training") {
  std::string config = kQuickConfig;
  config.insert(config.rfind('}'), ", \"grid\": {\"sgd.epochs\": [30]}");
  write_file("cli_tune1.json", config);
  const RunResult r = run("tune --train " + fixture("cli_train.tsv") +
                          " --val " + fixture("cli_val.tsv") +
                          " --config cli_tune1.json --model cli_tuned1.json");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("evaluated 1 combinations") != std::string::npos);

  // same data, same config -> identical model bytes as a plain train run
  write_file("cli_config.json", kQuickConfig);
  REQUIRE(run("train --train " + fixture("cli_train.tsv") +
              " --config cli_config.json --model cli_plain1.json")
              .exit_code == 0);
  CHECK(slurp("cli_tuned1.json") == slurp("cli_plain1.json"));
}

TEST_CASE("tune writes a full grid report") {
  std::string config = kQuickConfig;
  config.insert(config.rfind('}'),
                ", \"grid\": {\"sgd.epochs\": [5, 30],"
                " \"features.ngram_max\": [1, 2, 3]}");
  write_file("cli_tune6.json", config);
  const RunResult r = run("tune --train " + fixture("cli_train.tsv") +
                          " --val " + fixture("cli_val.tsv") +
                          " --config cli_tune6.json --model cli_tuned6.json"
                          " --report cli_grid6.json --threads 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("evaluated 6 combinations") != std::string::npos);
  const nlohmann::json report = nlohmann::json::parse(slurp("cli_grid6.json"));
  REQUIRE(report["points"].size() == 6);
  const std::size_t best = report["best_index"].get<std::size_t>();
  const double best_score = report["best_score"].get<double>();
  for (const auto& point : report["points"]) {
    REQUIRE(point["score"].is_number());
    CHECK(point["score"].get<double>() <= best_score);
  }
  CHECK(report["points"][best]["score"].get<double>() == best_score);
}

TEST_CASE("tune without a config grid exits 1") {
  write_file("cli_config.json", kQuickConfig);
  const RunResult r = run("tune --train " + fixture("cli_train.tsv") +
                          " --config cli_config.json --model cli_x.json");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("grid") != std::string::npos);
}

TEST_CASE("evaluate on a corrupt model exits 2") {
  write_file("cli_bad_model.json", "{\"magic\": \"WRONG\"}");
  const RunResult r = run("evaluate --model cli_bad_model.json --input " +
                          fixture("cli_val.tsv"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("magic") != std::string::npos);
}
