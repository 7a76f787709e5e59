#include "doctest.h"
#include "seal/cli.hpp"
#include "support.hpp"

using namespace seal;

namespace {

std::size_t count_entries(const std::filesystem::path& dir) {
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++n;
  return n;
}

}  // namespace

TEST_CASE("run writes five files under seed<seed>") {
  const auto dir = test::fresh_dir("cli_run");
  CHECK(run_cli({"run", "--synthetic", "--seed", "7", "--days", "63", "--out", dir.string()}) == kExitOk);
  const auto run = dir / "seed7";
  for (const char* kind : {"agent", "firm", "general", "house", "regional"}) {
    CHECK_MESSAGE(!test::find_output(run, kind).empty(), kind);
  }
  CHECK(test::read_lines(test::find_output(run, "general")).size() == 3);
}

TEST_CASE("validation failures exit with 1") {
  const auto dir = test::fresh_dir("cli_bad");
  std::ofstream(dir / "bad.cfg") << "ALPHA=0.3\nNOT_A_KEY=1\n";
  CHECK(run_cli({"run", "--synthetic", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}) ==
        kExitValidation);
  std::ofstream(dir / "range.cfg") << "ALPHA=7\n";
  CHECK(run_cli({"run", "--synthetic", "--config", (dir / "range.cfg").string(), "--out", dir.string()}) ==
        kExitValidation);
  CHECK(run_cli({"run", "--out", dir.string()}) == kExitValidation);
  CHECK(run_cli({"frobnicate"}) == kExitValidation);
  CHECK(run_cli({"run", "--synthetic", "--set", "BETA"}) == kExitValidation);
  CHECK(run_cli({"multirun", "--synthetic", "--runs", "1"}) == kExitValidation);
  CHECK(run_cli({"run", "--snapshot", (dir / "missing.seal-snap").string(), "--out", dir.string()}) != kExitOk);
}

TEST_CASE("sensitivity from the command line") {
  const auto dir = test::fresh_dir("cli_sens");
  CHECK(run_cli({"sensitivity", "--synthetic", "--values", "6", "--days", "21", "--out", dir.string()}) == kExitOk);
  CHECK(count_entries(dir / "runs") == 54);
  CHECK(test::read_lines(dir / "sensitivity_report.csv").size() == 56);  // header, baseline, 54 runs
}

TEST_CASE("snapshot then run from it") {
  const auto dir = test::fresh_dir("cli_snap");
  const auto snap = (dir / "w.seal-snap").string();
  CHECK(run_cli({"gen-snapshot", "--synthetic", "--seed", "3", "--snapshot-out", snap}) == kExitOk);
  CHECK(run_cli({"run", "--snapshot", snap, "--seed", "3", "--days", "42", "--out", (dir / "a").string()}) ==
        kExitOk);
  CHECK(run_cli({"run", "--synthetic", "--seed", "3", "--days", "42", "--out", (dir / "b").string()}) == kExitOk);
  CHECK(test::read_text(test::find_output(dir / "a" / "seed3", "general")) ==
        test::read_text(test::find_output(dir / "b" / "seed3", "general")));
}

TEST_CASE("validate-data and data directories") {
  const auto dir = test::fresh_dir("cli_data");
  write_world_data(synthetic_world(), dir / "data");
  CHECK(run_cli({"validate-data", "--data-dir", (dir / "data").string()}) == kExitOk);
  CHECK(run_cli({"run", "--data-dir", (dir / "data").string(), "--days", "21", "--out", (dir / "out").string()}) ==
        kExitOk);
  CHECK(run_cli({"validate-data", "--data-dir", (dir / "nowhere").string()}) != kExitOk);
}

TEST_CASE("autoadjust and multirun write their summaries") {
  const auto dir = test::fresh_dir("cli_batch");
  CHECK(run_cli({"autoadjust", "--synthetic", "--values", "2", "--iterations", "1", "--days", "21", "--out",
                 (dir / "adj").string()}) == kExitOk);
  CHECK(test::read_lines(dir / "adj" / "autoadjust_trace.csv").size() == 1 + 4 * 2);
  CHECK(std::filesystem::exists(dir / "adj" / "autoadjust_best.cfg"));
  CHECK(run_cli({"multirun", "--synthetic", "--runs", "2", "--days", "21", "--out", (dir / "multi").string()}) ==
        kExitOk);
  CHECK(std::filesystem::exists(dir / "multi" / "multirun_summary.csv"));
  CHECK(run_cli({"acp-compare", "--synthetic", "--days", "21", "--out", (dir / "acp").string()}) == kExitOk);
  CHECK(std::filesystem::exists(dir / "acp" / "acp_deltas.csv"));
}
