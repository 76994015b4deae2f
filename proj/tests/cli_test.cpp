/*******************************************************************************
 * Copyright 2026 the nnfir authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

// Drives the installed binary end to end through /bin/sh.

#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nnfir/io.hpp"
#include "nnfir/linop.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  if (const char* env = std::getenv("NNFIR_CLI")) return env;
#ifdef NNFIR_CLI_PATH
  return NNFIR_CLI_PATH;
#else
  return "nnfir";
#endif
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nnfir_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string dir(const std::string& name) const {
    return (path / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd = "'" + cli_path() + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("simulate -> fit -> kkt round trip") {
  REQUIRE(fs::exists(cli_path()));
  TempDir tmp;
  const std::string sim = tmp.dir("sim");
  const std::string out = tmp.dir("out");

  CHECK(run("simulate --q 3 --N 12 --m 4 --sigma 0 --seed 11 "
            "--h-star 0.8,1.5,0.3,0.9 --out-dir '" + sim + "'") == 0);
  CHECK(run("fit --u '" + sim + "/U.csv' --y '" + sim + "/Y.csv' --q 3 "
            "--out-dir '" + out + "'") == 0);

  const json h = load_json(out + "/h_hat.json");
  REQUIRE(h["h"].size() == 4);
  const std::vector<double> expect{0.8, 1.5, 0.3, 0.9};
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(std::abs(h["h"][k].get<double>() - expect[k]) <= 1e-6);
  const std::string status = h["status"].get<std::string>();
  CHECK((status == "converged_param" || status == "converged_divergence"));

  // the fitted point passes its own optimality check
  CHECK(run("kkt --u '" + sim + "/U.csv' --y '" + sim + "/Y.csv' --h-file '" +
            out + "/h_hat.json'") == 0);

  // a perturbed component fails it
  json bad = h;
  bad["h"][1] = h["h"][1].get<double>() * 1.1;
  nnfir::io::write_text_file(out + "/h_bad.json", bad.dump());
  CHECK(run("kkt --u '" + sim + "/U.csv' --y '" + sim + "/Y.csv' --h-file '" +
            out + "/h_bad.json'") == 1);

  // the trace's final divergence equals the independently recomputed value
  const nnfir::SignalMatrix u = nnfir::io::read_matrix_csv(sim + "/U.csv");
  const nnfir::SignalMatrix y = nnfir::io::read_matrix_csv(sim + "/Y.csv");
  std::vector<double> hv;
  for (const auto& v : h["h"]) hv.push_back(v.get<double>());
  const double recomputed =
      nnfir::objective(nnfir::ImpulseResponse(hv), u, y).value();
  std::ifstream trace(out + "/trace.csv");
  REQUIRE(trace.good());
  std::string line, last;
  std::getline(trace, line);  // header
  while (std::getline(trace, line))
    if (!line.empty()) last = line;
  const double traced = std::strtod(
      last.substr(last.find_last_of(',') + 1).c_str(), nullptr);
  CHECK(std::abs(traced - recomputed) <= 1e-12 * std::max(1.0, recomputed));

  // manifests exist and carry digests
  const json manifest = load_json(out + "/manifest.json");
  CHECK(manifest["command"] == "fit");
  CHECK(manifest["inputs"]["u"]["fnv1a64"].get<std::string>().size() == 16);
}

TEST_CASE("fit at order zero writes one post-initialization trace row") {
  TempDir tmp;
  const std::string sim = tmp.dir("sim0");
  const std::string out = tmp.dir("out0");
  CHECK(run("simulate --q 0 --N 8 --m 2 --sigma 0.1 --seed 3 --out-dir '" +
            sim + "'") == 0);
  CHECK(run("fit --u '" + sim + "/U.csv' --y '" + sim + "/Y.csv' --q 0 "
            "--out-dir '" + out + "'") == 0);
  std::ifstream trace(out + "/trace.csv");
  REQUIRE(trace.good());
  std::string line;
  std::size_t data_rows = 0;
  std::getline(trace, line);  // header
  while (std::getline(trace, line))
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == 2);  // initialization plus exactly one update
}

TEST_CASE("simulate rejects a negative true response as a usage error") {
  TempDir tmp;
  const std::string d = tmp.dir("neg");
  CHECK(run("simulate --q 1 --N 4 --m 2 --h-star 1.0,-0.5 --out-dir '" + d +
            "'") == 2);
}

TEST_CASE("simulate is reproducible byte for byte") {
  TempDir tmp;
  const std::string a = tmp.dir("a");
  const std::string b = tmp.dir("b");
  const std::string flags =
      "simulate --q 2 --N 8 --m 3 --sigma 0.1 --seed 77 --out-dir ";
  CHECK(run(flags + "'" + a + "'") == 0);
  CHECK(run(flags + "'" + b + "'") == 0);
  CHECK(nnfir::io::read_text_file(a + "/U.csv") ==
        nnfir::io::read_text_file(b + "/U.csv"));
  CHECK(nnfir::io::read_text_file(a + "/Y.csv") ==
        nnfir::io::read_text_file(b + "/Y.csv"));
}

TEST_CASE("exit codes distinguish usage, data, and ill-posed errors") {
  TempDir tmp;
  const std::string d = tmp.dir("w");
  fs::create_directories(d);

  // usage: unknown regime, replications < 2, missing required flags
  CHECK(run("experiment --regime sideways_iid --scales '(10,5)' "
            "--replications 10 --q 2 --out-dir '" + d + "'") == 2);
  CHECK(run("experiment --regime array_iid --scales '(10,5)' "
            "--replications 1 --q 2 --out-dir '" + d + "'") == 2);
  CHECK(run("fit --q 1") == 2);

  // data: negative cell
  nnfir::io::write_text_file(d + "/u.csv", "1.0\n2.0\n");
  nnfir::io::write_text_file(d + "/y_neg.csv", "1.0\n-2.0\n");
  CHECK(run("fit --u '" + d + "/u.csv' --y '" + d + "/y_neg.csv' --q 0 "
            "--out-dir '" + d + "'") == 3);

  // ill-posed: zero initial input with positive outputs
  nnfir::io::write_text_file(d + "/u0.csv", "0.0\n1.0\n");
  nnfir::io::write_text_file(d + "/y1.csv", "1.0\n1.0\n");
  CHECK(run("fit --u '" + d + "/u0.csv' --y '" + d + "/y1.csv' --q 0 "
            "--out-dir '" + d + "'") == 4);
}

TEST_CASE("the kernel backend override is accepted end to end") {
  TempDir tmp;
  const std::string sim = tmp.dir("simk");
  const std::string out = tmp.dir("outk");
  CHECK(run("simulate --q 1 --N 6 --m 2 --sigma 0 --seed 5 --out-dir '" +
            sim + "'") == 0);
  const std::string cmd = "NNFIR_KERNELS=scalar '" + cli_path() + "' fit --u '" +
                          sim + "/U.csv' --y '" + sim + "/Y.csv' --q 1 "
                          "--out-dir '" + out + "' >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("experiment reports are byte-identical across thread counts") {
  TempDir tmp;
  const std::string a = tmp.dir("serial");
  const std::string b = tmp.dir("parallel");
  const std::string common =
      "experiment --regime array_iid --scales '(6,3),(12,6)' "
      "--replications 20 --q 2 --sigma 0.1 --seed 555 ";
  CHECK(run(common + "--threads 1 --out-dir '" + a + "'") == 0);
  CHECK(run(common + "--threads 4 --out-dir '" + b + "'") == 0);
  CHECK(nnfir::io::read_text_file(a + "/report.json") ==
        nnfir::io::read_text_file(b + "/report.json"));
  CHECK(nnfir::io::read_text_file(a + "/estimates.csv") ==
        nnfir::io::read_text_file(b + "/estimates.csv"));
}

TEST_CASE("misspecified experiment flags boundary components") {
  TempDir tmp;
  const std::string d = tmp.dir("mis");
  CHECK(run("experiment --misspecified iir --gen-b 1.0,0.5 --gen-a 0.5 "
            "--scales '(8,10)' --replications 10 --q 5 --seed 9 "
            "--out-dir '" + d + "'") == 0);
  const json report = load_json(d + "/report.json");
  CHECK(report["misspecified"] == true);
  REQUIRE(report["scales"].size() == 1);
  CHECK(report["scales"][0]["excluded"] == 0);
  CHECK(report["scales"][0].contains("boundary_counts"));
  CHECK(report["scales"][0].contains("seed_half_gap"));
}
