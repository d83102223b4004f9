#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dixmier/error.hpp"
#include "dixmier/experiments.hpp"
#include "dixmier/parallel.hpp"

namespace fs = std::filesystem;
using namespace dixmier;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
  out << text;
  if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dixmier trace and zeta-residue experiments"};
  std::string id, config_path, regression;
  std::string out_dir = ".";
  int nthreads = 1;
  app.add_option("experiment", id, "experiment id")->required()->check(CLI::IsMember(experiment_ids()));
  app.add_option("--config", config_path, "JSON config merged over the defaults");
  app.add_option("--out", out_dir, "directory for <id>.csv and <id>.json");
  app.add_option("--threads", nthreads, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--regression", regression, "golden CSV; captured when missing, compared byte for byte otherwise");
  CLI11_PARSE(app, argc, argv);

  try {
    set_threads(nthreads);
    pin_blas_threads();
    nlohmann::json user = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        user = nlohmann::json::parse(read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Validation, config_path + ": " + e.what());
      }
    }
    const auto cfg = ExperimentConfig::make(id, user);
    const auto rec = run_experiment(cfg);
    const std::string csv = to_csv(rec);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
    write_file(fs::path(out_dir) / (id + ".csv"), csv);
    write_file(fs::path(out_dir) / (id + ".json"), to_json(rec).dump(2) + "\n");

    bool ok = rec.passed();
    for (const auto& p : rec.predicates)
      std::printf("[%s] %s: %s\n", p.pass ? "PASS" : "FAIL", p.name.c_str(), p.detail.c_str());
    if (!regression.empty()) {
      if (!fs::exists(regression)) {
        write_file(regression, csv);
        std::printf("[INFO] golden file captured at %s\n", regression.c_str());
      } else if (read_file(regression) != csv) {
        std::printf("[FAIL] regression: output differs from %s\n", regression.c_str());
        ok = false;
      } else {
        std::printf("[PASS] regression: identical to %s\n", regression.c_str());
      }
    }
    std::printf("%s %s config %s in %.1f s\n", id.c_str(), ok ? "passed" : "failed", rec.config_hash.c_str(),
                rec.wall_clock);
    return ok ? 0 : 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.code()), e.what());
    if (e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::DimensionCap) return 3;
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
