// volex: scenario-driven checks of volumetric-expansion identities on
// user-defined charts. See docs/scenario.md for the input format.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "volex/analysis.hpp"
#include "volex/errors.hpp"
#include "volex/report.hpp"
#include "volex/scenario.hpp"
#include "volex/version.hpp"

namespace {

enum ExitCode { kPass = 0, kCheckFailed = 1, kInputError = 2, kNumericalError = 3 };

int do_validate(const std::string& path) {
  const auto scenario = volex::cli::load_scenario(path);
  std::printf("ok: scenario '%s' (%d-dimensional %s chart)\n", scenario.name.c_str(),
              scenario.chart->dim(),
              scenario.chart->lorentzian() ? "Lorentzian" : "Riemannian");
  return kPass;
}

int do_run(const std::string& path, const std::string& analysis,
           const volex::cli::AnalysisOptions& opt, const std::string& out_path,
           const std::string& csv_path) {
  const auto scenario = volex::cli::load_scenario(path);
  const auto report = volex::cli::run_analysis(scenario, analysis, opt);
  const std::string json = volex::cli::to_json(report);
  if (out_path.empty())
    std::fputs(json.c_str(), stdout);
  else
    volex::cli::write_text_file(out_path, json);
  if (!csv_path.empty()) volex::cli::write_text_file(csv_path, volex::cli::to_csv(report));
  return report.pass ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks of volumetric-expansion identities"};
  app.set_version_flag("--version", std::string("volex ") + volex::kVersion);
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("file", validate_path, "scenario JSON file")->required();

  std::string run_path, run_analysis_name, out_path, csv_path;
  volex::cli::AnalysisOptions opt;
  int grid_override = 0;
  double tol_override = 0.0;
  auto* run = app.add_subcommand("run", "run one analysis on a scenario");
  run->add_option("file", run_path, "scenario JSON file")->required();
  auto* analysis_opt =
      run->add_option("--analysis", run_analysis_name, "analysis to run")->required();
  analysis_opt->check(CLI::IsMember(volex::cli::analysis_names()));
  auto* grid_opt = run->add_option("--grid", grid_override, "override per-axis grid count");
  auto* tol_opt = run->add_option("--tol", tol_override, "override the default tolerance");
  run->add_option("--out", out_path, "write the JSON report to this path");
  run->add_option("--csv", csv_path, "write the per-sample CSV table to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kInputError;
  }

  try {
    if (*validate) return do_validate(validate_path);
    if (*grid_opt) opt.grid = grid_override;
    if (*tol_opt) opt.tol = tol_override;
    return do_run(run_path, run_analysis_name, opt, out_path, csv_path);
  } catch (const volex::IoError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::SchemaError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::SignatureMismatch& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::NotLapseForm& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::NonCompactDomain& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::FaceNotSlice& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kInputError;
  } catch (const volex::Error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
}
