// metric-frag: command-line front end for the fragmentation library.
//
//   metric-frag frag --generator uniform:n=8 --distortion 4 --trials 1000 --seed 1
//   metric-frag exponent --theta 6
//   metric-frag oracle --input path3.csv --distortion 1.9 --max-subset
//   metric-frag gen --generator euclidean:dim=3,n=128,seed=7 --out space.csv
//   metric-frag check

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfrag/acceptance.hpp"
#include "mfrag/errors.hpp"
#include "mfrag/exponents.hpp"
#include "mfrag/generators.hpp"
#include "mfrag/harness.hpp"
#include "mfrag/io.hpp"
#include "mfrag/oracle.hpp"

namespace {

using namespace mfrag;
using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw HarnessError(kExitConfig, "cannot write '" + out_path + "'");
  out << text;
}

json solution_json(const ExponentSolution& s) {
  return {{"value", s.value}, {"residual", s.residual}, {"bracket", {s.bracket.first, s.bracket.second}}};
}

std::vector<Point> parse_subset(const std::string& text) {
  std::vector<Point> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<Point>(v));
    } catch (const std::exception&) {
      throw HarnessError(kExitConfig, "bad subset entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized metric fragmentation into ultrametric subsets"};
  app.require_subcommand(1);

  // frag
  ExperimentConfig config;
  std::string schedule_text = "optimal";
  std::string output_text = "json";
  std::string frag_out;
  auto* frag = app.add_subcommand("frag", "Run fragmentation trials and report survivor statistics");
  auto* frag_input = frag->add_option("--input", config.input_path, "Distance-matrix file");
  auto* frag_gen = frag->add_option("--generator", config.generator, "Generator spec, e.g. euclidean:dim=3,n=128,seed=7");
  frag_input->excludes(frag_gen);
  frag->add_option("--distortion", config.distortion, "Target distortion D > 2")->required();
  frag->add_option("--trials", config.trials, "Number of trials");
  frag->add_option("--seed", config.seed, "Master seed");
  frag->add_option("--schedule", schedule_text, "optimal | mn07 | file:PATH");
  frag->add_option("--output", output_text, "json | csv");
  frag->add_option("--out", frag_out, "Write the report here instead of stdout");
  frag->add_flag("--checks", config.checks, "Verify every invariant on every trial");
  frag->add_flag("--runs", config.include_runs, "Embed each fragmentation result in the JSON report");

  // exponent
  std::optional<double> theta_d, beta_alpha, sup_d;
  std::vector<double> beta_p_args;
  std::size_t grid = 10'000;
  std::string exponent_output = "text";
  auto* exponent = app.add_subcommand("exponent", "Solve the exponent equations");
  exponent->add_option("--theta", theta_d, "theta(D) for distortion D");
  exponent->add_option("--beta", beta_alpha, "beta(alpha)");
  exponent->add_option("--beta-p", beta_p_args, "beta_p(alpha) as: ALPHA P")->expected(2);
  exponent->add_option("--sup", sup_d, "sup over r of the interval sum for distortion D");
  exponent->add_option("--grid", grid, "Radii grid size for --sup");
  exponent->add_option("--output", exponent_output, "text | json");

  // oracle
  std::string oracle_input, oracle_gen, subset_text;
  double oracle_d = 0.0;
  bool want_max = false, want_subdominant = false;
  auto* oracle = app.add_subcommand("oracle", "Exact embeddability checks");
  auto* oracle_in = oracle->add_option("--input", oracle_input, "Distance-matrix file");
  auto* oracle_g = oracle->add_option("--generator", oracle_gen, "Generator spec");
  oracle_in->excludes(oracle_g);
  oracle->add_option("--distortion", oracle_d, "Distortion D >= 1");
  oracle->add_option("--subset", subset_text, "Comma-separated point indices to test");
  oracle->add_flag("--max-subset", want_max, "Largest embeddable subset (n <= 20)");
  oracle->add_flag("--subdominant", want_subdominant, "Print the subdominant ultrametric");

  // gen
  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "Emit a generated distance matrix");
  gen->add_option("--generator", gen_spec, "Generator spec")->required();
  gen->add_option("--out", gen_out, "Output path");

  auto* check = app.add_subcommand("check", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (frag->parsed()) {
      if (schedule_text == "optimal") {
        config.schedule = ScheduleChoice::optimal;
      } else if (schedule_text == "mn07") {
        config.schedule = ScheduleChoice::mn07;
      } else if (schedule_text.rfind("file:", 0) == 0) {
        config.schedule = ScheduleChoice::file;
        config.schedule_path = schedule_text.substr(5);
      } else {
        throw HarnessError(kExitConfig, "unknown schedule '" + schedule_text + "'");
      }
      if (output_text == "json") {
        config.output = OutputFormat::json;
      } else if (output_text == "csv") {
        config.output = OutputFormat::csv;
      } else {
        throw HarnessError(kExitConfig, "unknown output format '" + output_text + "'");
      }
      const auto report = run_unchecked(config);
      emit(config.output == OutputFormat::json ? report_to_json(report) : report_to_csv(report), frag_out);
      for (const auto& rec : report.records) {
        if (!rec.violations.empty()) {
          std::cerr << "invariant violation in trial " << rec.index << " (seed " << rec.seed
                    << "): " << rec.violations.front() << '\n';
          return kExitInvariant;
        }
      }
      return 0;
    }

    if (exponent->parsed()) {
      json out = json::object();
      if (theta_d) out["theta"] = solution_json(solve_theta(*theta_d));
      if (beta_alpha) out["beta"] = solution_json(solve_beta(*beta_alpha));
      if (beta_p_args.size() == 2) {
        const auto m = beta_p_minimum(beta_p_args[0], beta_p_args[1]);
        out["beta_p"] = {{"value", m.value}, {"minimizer", m.minimizer}};
      }
      if (sup_d) {
        const double beta = solve_beta(2.0 / *sup_d).value;
        out["sup_interval_sum"] = {{"beta", beta}, {"sup", sup_interval_sum(beta, *sup_d, grid)}};
      }
      if (out.empty()) throw HarnessError(kExitConfig, "exponent: give --theta, --beta, --beta-p or --sup");
      if (exponent_output == "json") {
        std::cout << out.dump(2) << '\n';
      } else {
        std::cout.precision(17);
        if (theta_d) {
          const auto& s = out["theta"];
          std::cout << "theta(" << *theta_d << ") = " << s["value"].get<double>()
                    << "  residual " << s["residual"].get<double>() << '\n';
        }
        if (beta_alpha) {
          const auto& s = out["beta"];
          std::cout << "beta(" << *beta_alpha << ") = " << s["value"].get<double>()
                    << "  residual " << s["residual"].get<double>() << '\n';
        }
        if (out.contains("beta_p")) {
          std::cout << "beta_p(" << beta_p_args[0] << ", p=" << beta_p_args[1] << ") = "
                    << out["beta_p"]["value"].get<double>() << "  at x = " << out["beta_p"]["minimizer"].get<double>()
                    << '\n';
        }
        if (sup_d) {
          std::cout << "sup interval sum (D=" << *sup_d << ") = " << out["sup_interval_sum"]["sup"].get<double>()
                    << "  beta = " << out["sup_interval_sum"]["beta"].get<double>() << '\n';
        }
      }
      return 0;
    }

    if (oracle->parsed()) {
      ExperimentConfig source;
      source.input_path = oracle_input;
      source.generator = oracle_gen;
      if (oracle_input.empty() == oracle_gen.empty()) {
        throw HarnessError(kExitConfig, "oracle: exactly one of --input and --generator is required");
      }
      const auto space = load_input(source);
      json out = {{"n", space.size()}};
      if (want_subdominant) out["subdominant"] = subdominant_ultrametric(space).matrix();
      if (!subset_text.empty() || want_max) {
        if (!(oracle_d >= 1.0)) throw HarnessError(kExitConfig, "oracle: --distortion must be at least 1");
        out["D"] = oracle_d;
      }
      if (!subset_text.empty()) {
        const auto subset = parse_subset(subset_text);
        out["subset"] = subset;
        out["embeddable"] = embeddable(space, subset, oracle_d);
      }
      if (want_max) {
        const auto best = max_subset(space, oracle_d);
        out["max_subset"] = {{"size", best.size}, {"witness", best.witness}};
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (gen->parsed()) {
      GeneratorSpec spec;
      try {
        spec = parse_generator_spec(gen_spec);
      } catch (const Error& e) {
        throw HarnessError(kExitConfig, e.what());
      }
      emit(format_matrix(generate(spec)), gen_out);
      return 0;
    }

    if (check->parsed()) {
      bool all = true;
      for (const auto& result : acceptance::run_all()) {
        std::cout << acceptance::format_line(result) << '\n';
        all = all && result.passed;
      }
      return all ? 0 : kExitInvariant;
    }
  } catch (const HarnessError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::DomainError || e.code() == Errc::TooLarge ? kExitConfig : kExitInput;
  }
  return 0;
}
