#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "pfsic/io.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CliFixture {
  fs::path dir;

  CliFixture() {
    std::string templ =
        (fs::temp_directory_path() / "pfsic_cli_XXXXXX").string();
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    REQUIRE(mkdtemp(buf.data()) != nullptr);
    dir = buf.data();
  }

  ~CliFixture() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  fs::path path(const std::string& name) const { return dir / name; }

  int run(const std::string& args, bool prepend_cli = true) const {
    const std::string head =
        prepend_cli ? std::string(PFSIC_CLI_PATH) + " " : std::string();
    const std::string cmd = head + args + " > " +
                            (dir / "stdout.txt").string() + " 2> " +
                            (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
  }

  std::string stdout_text() const { return read_file(dir / "stdout.txt"); }
  std::string stderr_text() const { return read_file(dir / "stderr.txt"); }
  json stdout_json() const { return json::parse(stdout_text()); }
};

}  // namespace

TEST_CASE("construct writes a POVM with its manifest and verify accepts it") {
  CliFixture cli;
  const std::string povm = cli.path("povm.json").string();
  REQUIRE(cli.run("construct --kind minimal --d 4 --out " + povm) == 0);

  const json loaded = json::parse(read_file(povm));
  CHECK(loaded.at("n") == 7);
  CHECK(loaded.at("dim") == 4);

  const json manifest = json::parse(read_file(cli.path("povm.manifest.json")));
  CHECK(manifest.at("command") == "construct");
  CHECK(manifest.at("toolkit_version").is_string());
  CHECK(manifest.at("outputs")[0] == povm);

  CHECK(cli.run("verify " + povm + " --pfsic") == 0);
  CHECK(cli.run("verify " + povm + " --pfsic --strict") == 0);
}

TEST_CASE("construct without --out prints the POVM") {
  CliFixture cli;
  REQUIRE(cli.run("construct --kind two-basis --d 2 --p-chi 0.5") == 0);
  CHECK(cli.stdout_json().at("n") == 4);
}

TEST_CASE("construct rejects d = 1 with a domain exit code") {
  CliFixture cli;
  CHECK(cli.run("construct --kind minimal --d 1") == 1);
  CHECK(cli.run("construct --kind unknown --d 3") == 1);
}

TEST_CASE("verify rejects non-PFSIC POVMs and truncated files") {
  CliFixture cli;
  pfsic::save_povm(pfsic::test::computational_basis_povm(2),
                   cli.path("basis.json").string());
  CHECK(cli.run("verify " + cli.path("basis.json").string()) == 0);
  CHECK(cli.run("verify " + cli.path("basis.json").string() + " --pfsic") ==
        1);
  CHECK(cli.run("verify " + cli.path("basis.json").string() + " --strict") ==
        1);

  std::ofstream bad(cli.path("bad.json"));
  bad << "{ \"dim\": 2, \"n\": 3, \"vect";
  bad.close();
  CHECK(cli.run("verify " + cli.path("bad.json").string()) == 2);
  CHECK(cli.run("verify " + cli.path("missing.json").string()) == 2);

  std::ofstream empty(cli.path("empty.json"));
  empty << R"({ "dim": 2, "n": 0, "vectors": [] })";
  empty.close();
  CHECK(cli.run("verify " + cli.path("empty.json").string()) == 1);
}

TEST_CASE("verify flags incomplete POVMs with exit 1 and the residual") {
  CliFixture cli;
  json j{{"dim", 2},
         {"n", 2},
         {"vectors",
          json::array({json::array({json::array({1.0, 0.0}),
                                    json::array({0.0, 0.0})}),
                       json::array({json::array({0.0, 0.0}),
                                    json::array({0.5, 0.0})})})}};
  std::ofstream out(cli.path("incomplete.json"));
  out << j.dump();
  out.close();
  const std::string report_path = cli.path("report.json").string();
  CHECK(cli.run("verify " + cli.path("incomplete.json").string() + " --out " +
                report_path) == 1);
  const json report = json::parse(read_file(report_path));
  CHECK(report.at("valid") == false);
  CHECK(report.at("completeness_residual").get<double>() ==
        doctest::Approx(0.75));
}

TEST_CASE("fisher reports the PFSIC analysis") {
  CliFixture cli;
  const std::string povm = cli.path("povm.json").string();
  REQUIRE(cli.run("construct --kind minimal --d 3 --out " + povm) == 0);
  REQUIRE(cli.run("fisher " + povm + " --fd-check") == 0);
  const json report = cli.stdout_json();
  CHECK(report.at("gill_massar").get<double>() == doctest::Approx(2.0));
  CHECK(report.at("symmetry").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("pfsic").at("is_pfsic") == true);
  CHECK(report.at("fd_check").at("max_abs_deviation").get<double>() < 1e-6);
}

TEST_CASE("fisher on a weighted two-basis POVM") {
  CliFixture cli;
  const std::string povm = cli.path("tb.json").string();
  REQUIRE(
      cli.run("construct --kind two-basis --d 2 --p-chi 0.3 --out " + povm) ==
      0);
  REQUIRE(cli.run("fisher " + povm) == 0);
  const json report = cli.stdout_json();
  CHECK(report.at("classical_fisher")[0][0].get<double>() ==
        doctest::Approx(1.2));
  CHECK(report.at("classical_fisher")[1][1].get<double>() ==
        doctest::Approx(2.8));
  CHECK(report.at("gill_massar").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("pfsic").at("is_pfsic") == false);
}

TEST_CASE("mix grows a PFSIC and honors the identity and matrix hooks") {
  CliFixture cli;
  const std::string povm = cli.path("trine.json").string();
  REQUIRE(cli.run("construct --kind minimal --d 2 --out " + povm) == 0);

  const std::string mixed = cli.path("mixed.json").string();
  REQUIRE(cli.run("mix " + povm + " --seed 5 --size 4 --out " + mixed) == 0);
  CHECK(json::parse(read_file(mixed)).at("n") == 4);
  CHECK(cli.run("verify " + mixed + " --pfsic") == 0);

  const std::string same = cli.path("same.json").string();
  REQUIRE(cli.run("mix " + povm + " --identity --out " + same) == 0);
  CHECK(json::parse(read_file(same)).at("vectors") ==
        json::parse(read_file(povm)).at("vectors"));

  std::ofstream bad(cli.path("matrix.json"));
  bad << "[[1.0, 1.0], [0.0, 1.0]]";
  bad.close();
  CHECK(cli.run("mix " + povm + " --size 2 --matrix " +
                cli.path("matrix.json").string()) == 1);
}

TEST_CASE("simulate writes report, csv, and manifest; reruns byte-identically") {
  CliFixture cli;
  const std::string povm = cli.path("povm.json").string();
  REQUIRE(cli.run("construct --kind minimal --d 2 --out " + povm) == 0);

  const std::string prefix = cli.path("run").string();
  REQUIRE(cli.run("simulate --povm " + povm +
                  " --shots 2000 --trials 50 --seed 7 --out " + prefix) == 0);
  const json report = json::parse(read_file(prefix + ".json"));
  CHECK(report.at("seed") == 7);
  CHECK(report.at("trials") == 50);
  CHECK(report.at("rng") == "splitmix64");

  // Same seed, different prefix: identical data files.
  const std::string prefix2 = cli.path("run2").string();
  REQUIRE(cli.run("simulate --povm " + povm +
                  " --shots 2000 --trials 50 --seed 7 --out " + prefix2) == 0);
  CHECK(read_file(prefix + ".csv") == read_file(prefix2 + ".csv"));
  CHECK(read_file(prefix + ".json") == read_file(prefix2 + ".json"));

  // Replaying the manifest's argv reproduces the outputs byte for byte.
  const json manifest = json::parse(read_file(prefix + ".manifest.json"));
  const std::string json_before = read_file(prefix + ".json");
  const std::string csv_before = read_file(prefix + ".csv");
  std::string replay;
  const auto& argv = manifest.at("argv");
  for (std::size_t i = 1; i < argv.size(); ++i) {
    if (i > 1) {
      replay += ' ';
    }
    replay += argv[i].get<std::string>();
  }
  REQUIRE(cli.run(replay) == 0);
  CHECK(read_file(prefix + ".json") == json_before);
  CHECK(read_file(prefix + ".csv") == csv_before);
}

TEST_CASE("simulate fails on singular Fisher matrices with exit 1") {
  CliFixture cli;
  pfsic::save_povm(pfsic::test::computational_basis_povm(2),
                   cli.path("basis.json").string());
  CHECK(cli.run("simulate --povm " + cli.path("basis.json").string() +
                " --shots 100 --trials 5 --seed 1 --out " +
                cli.path("out").string()) == 1);
  CHECK(cli.stderr_text().find("not locally informationally complete") !=
        std::string::npos);
}

TEST_CASE("construct-verify round trip across kinds and dimensions") {
  CliFixture cli;
  for (const int d : {2, 9, 16}) {
    const std::string minimal = cli.path("m.json").string();
    REQUIRE(cli.run("construct --kind minimal --d " + std::to_string(d) +
                    " --out " + minimal) == 0);
    CHECK(cli.run("verify " + minimal + " --pfsic --strict") == 0);

    const std::string two_basis = cli.path("tb.json").string();
    REQUIRE(cli.run("construct --kind two-basis --d " + std::to_string(d) +
                    " --out " + two_basis) == 0);
    CHECK(cli.run("verify " + two_basis + " --pfsic --strict") == 0);
  }
}

TEST_CASE("PFSIC_THREADS does not change simulate output") {
  CliFixture cli;
  const std::string povm = cli.path("povm.json").string();
  REQUIRE(cli.run("construct --kind minimal --d 2 --out " + povm) == 0);
  const std::string base = " --povm " + povm +
                           " --shots 1000 --trials 40 --seed 11 --out ";
  REQUIRE(cli.run("simulate" + base + cli.path("one").string() +
                  " --threads 1") == 0);
  REQUIRE(cli.run("PFSIC_THREADS=4 " + std::string(PFSIC_CLI_PATH) +
                      " simulate" + base + cli.path("many").string(),
                  /*prepend_cli=*/false) == 0);
  CHECK(read_file(cli.path("one.csv")) == read_file(cli.path("many.csv")));
}

TEST_CASE("simulate accepts a config file with a descriptor") {
  CliFixture cli;
  json config{{"povm", json{{"kind", "minimal"}, {"d", 3}}},
              {"true_params", json::array({0.0, 0.0, 0.0, 0.0})},
              {"shots_per_trial", 500},
              {"trials", 10},
              {"seed", 3}};
  std::ofstream out(cli.path("config.json"));
  out << config.dump();
  out.close();
  REQUIRE(cli.run("simulate --config " + cli.path("config.json").string() +
                  " --out " + cli.path("cfg_run").string()) == 0);
  const json report = json::parse(read_file(cli.path("cfg_run.json")));
  CHECK(report.at("dim") == 3);
  CHECK(report.at("seed") == 3);
}

TEST_CASE("argument errors exit with the parse code") {
  CliFixture cli;
  CHECK(cli.run("construct --kind minimal") == 2);   // missing --d
  CHECK(cli.run("frobnicate") == 2);                 // unknown subcommand
  CHECK(cli.run("simulate --shots 10 --trials 2 --out x") == 1);  // no povm
}
