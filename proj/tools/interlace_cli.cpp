#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "interlace/errors.hpp"
#include "interlace/pipeline.hpp"
#include "interlace/stats.hpp"

// Command line front end.  Each subcommand is a thin wrapper over one
// library entry point; all failures map to the stable exit-code table
// in exit_code_for_current_exception (documented in the README).

namespace {

using namespace interlace;

AlphaStrategy parse_strategy(const std::string& name) {
  if (name == "midpoint") return Midpoint{};
  if (name == "optimal") return Optimal{};
  if (name == "optimal:first") return Optimal{Anchor::first_element()};
  if (name == "optimal:max") return Optimal{Anchor::max_delta()};
  if (name == "optimal:mean") return Optimal{Anchor::mean_delta()};
  if (name.rfind("optimal:", 0) == 0) {
    char* end = nullptr;
    const double v = std::strtod(name.c_str() + 8, &end);
    if (end != nullptr && *end == '\0')
      return Optimal{Anchor::explicit_value(v)};
  }
  throw DomainError("unknown strategy '" + name +
                    "' (midpoint, optimal, optimal:first, optimal:max, "
                    "optimal:mean, optimal:<value>)");
}

RegularityCriterion parse_criterion(const std::string& name) {
  if (name == "gamma-corridor") return RegularityCriterion::GammaCorridor;
  if (name == "spacing-range") return RegularityCriterion::SpacingRange;
  throw DomainError("unknown criterion '" + name +
                    "' (gamma-corridor, spacing-range)");
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return std::move(body).str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::fwrite(content.data(), 1, content.size(), stdout);
  else
    write_text_file(out_path, content);
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CountingModel model_for(const std::string& name,
                        const SpectralSequence& seq) {
  if (name == "fit") return fit_linear_average(seq);
  if (name == "riemann") return RiemannVonMangoldt{};
  if (name == "spacing") return LocalSpacing{};
  if (name.rfind("weyl:", 0) == 0) {
    char* end = nullptr;
    const double len = std::strtod(name.c_str() + 5, &end);
    if (end != nullptr && *end == '\0' && len > 0.0) return WeylLinear{len};
  }
  throw DomainError("unknown counting model '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral sequence irregularity analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // Shared option storage; each subcommand binds the flags it uses.
  std::string input, url, out, model = "riemann", strategy = "optimal";
  std::string criterion = "gamma-corridor", cache_dir;
  int max_depth = 32, m_max = 3, count = 100, bins = 24, graph_levels = 500;
  long long prime_cutoff = 1000;
  double orbit_cutoff = 0.0;
  bool offline = false, flatten = false;
  bool emit_histogram = false, emit_staircase = false;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Unfold a spectrum and build its separating hierarchy");
  analyze->add_option("--input", input, "zero table, eigenvalue list or graph JSON");
  analyze->add_option("--url", url, "fetch the input from this URL instead");
  analyze->add_option("--model", model,
                      "counting model: riemann, fit, spacing, weyl:<length>");
  analyze->add_option("--strategy", strategy,
                      "midpoint, optimal, optimal:first, optimal:max, "
                      "optimal:mean, optimal:<value>");
  analyze->add_option("--criterion", criterion,
                      "regularity test: gamma-corridor or spacing-range");
  analyze->add_option("--max-depth", max_depth, "hierarchy generation cap");
  analyze->add_option("--prime-cutoff", prime_cutoff,
                      "staircase expansion prime cutoff");
  analyze->add_option("--m-max", m_max, "staircase expansion repetition cap");
  analyze->add_option("--orbit-cutoff", orbit_cutoff,
                      "orbit metric length cutoff for graph staircases");
  analyze->add_option("--graph-levels", graph_levels,
                      "roots fed to the hierarchy for graph input");
  analyze->add_flag("--flatten", flatten,
                    "stagger degenerate graph eigenvalues instead of failing");
  analyze->add_option("--out", out, "artifact directory");
  analyze->add_flag("--emit-histogram", emit_histogram,
                    "also write the level-0 spacing histogram");
  analyze->add_flag("--emit-staircase", emit_staircase,
                    "also write staircase samples");
  analyze->add_option("--cache-dir", cache_dir, "download cache directory");
  analyze->add_flag("--offline", offline, "never touch the network");

  CLI::App* unfold_cmd = app.add_subcommand(
      "unfold", "Emit the unfolded level-0 sequence as CSV");
  unfold_cmd->add_option("--input", input, "zero or eigenvalue table")
      ->required();
  unfold_cmd->add_option("--model", model, "counting model");
  unfold_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* graph_cmd = app.add_subcommand(
      "graph-spectrum", "Root-find a metric graph spectrum");
  graph_cmd->add_option("--input", input, "graph JSON")->required();
  graph_cmd->add_option("--count", count, "number of distinct roots");
  graph_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* orbits_cmd =
      app.add_subcommand("orbits", "Enumerate periodic orbits of a graph");
  orbits_cmd->add_option("--input", input, "graph JSON")->required();
  orbits_cmd->add_option("--orbit-cutoff", orbit_cutoff, "metric length cutoff")
      ->required();
  orbits_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* expansion_cmd = app.add_subcommand(
      "expansion",
      "Staircase expansion as JSON: graph orbits or prime powers");
  expansion_cmd->add_option("--input", input,
                            "graph JSON (omit for the zero staircase)");
  expansion_cmd->add_option("--orbit-cutoff", orbit_cutoff,
                            "metric length cutoff for graph input");
  expansion_cmd->add_option("--prime-cutoff", prime_cutoff,
                            "prime cutoff for the zero staircase");
  expansion_cmd->add_option("--m-max", m_max, "repetition cap");
  expansion_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* reconstruct_cmd = app.add_subcommand(
      "reconstruct",
      "Recover levels from a staircase expansion between separators");
  reconstruct_cmd->add_option("--input", input,
                              "graph JSON (omit to reconstruct zero heights)");
  reconstruct_cmd->add_option("--orbit-cutoff", orbit_cutoff,
                              "metric length cutoff for graph input");
  reconstruct_cmd->add_option("--prime-cutoff", prime_cutoff,
                              "prime cutoff for the zero staircase");
  reconstruct_cmd->add_option("--m-max", m_max, "repetition cap");
  reconstruct_cmd->add_option("--count", count, "levels to reconstruct");
  reconstruct_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* stats_cmd = app.add_subcommand(
      "stats", "Histogram of unfolded nearest-neighbour spacings");
  stats_cmd->add_option("--input", input, "zero or eigenvalue table")
      ->required();
  stats_cmd->add_option("--model", model, "counting model");
  stats_cmd->add_option("--bins", bins, "histogram bins");
  stats_cmd->add_option("--out", out, "output file (default stdout)");

  CLI::App* fetch_cmd =
      app.add_subcommand("fetch", "Download a dataset into the cache");
  fetch_cmd->add_option("--url", url, "dataset URL")->required();
  fetch_cmd->add_option("--cache-dir", cache_dir, "cache directory");
  fetch_cmd->add_flag("--offline", offline, "fail unless already cached");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*analyze) {
      AnalysisConfig config;
      config.input_path = input;
      config.fetch_url = url;
      config.cache_dir = cache_dir;
      config.model = model;
      config.strategy = parse_strategy(strategy);
      config.criterion = parse_criterion(criterion);
      config.max_depth = max_depth;
      config.prime_cutoff = prime_cutoff;
      config.m_max = m_max;
      config.orbit_cutoff = orbit_cutoff;
      config.graph_levels = graph_levels;
      config.flatten_degenerate = flatten;
      config.out_dir = out;
      config.emit_histogram = emit_histogram;
      config.emit_staircase = emit_staircase;
      config.offline = offline;
      if (config.input_path.empty() && config.fetch_url.empty())
        throw DomainError("analyze needs --input or --url");
      RunReport report = run_analyze(config);
      std::fputs(report_json(report).c_str(), stdout);
    } else if (*unfold_cmd) {
      SpectralSequence seq = parse_zero_table(read_input(input));
      UnfoldedSequence u = unfold(seq, model_for(model, seq));
      emit(out, level_csv(HierarchyLevel::from_values(0, u.values)));
    } else if (*graph_cmd) {
      QuantumGraph g = parse_graph_json(read_input(input));
      double k_max = (count + 8) * std::numbers::pi / g.total_length();
      GraphSpectrum sp = compute_spectrum(g, k_max);
      while (sp.values.size() < count) {
        k_max *= 1.3;
        sp = compute_spectrum(g, k_max);
      }
      std::string csv = "n, k, multiplicity\n";
      for (Eigen::Index i = 0; i < count && i < sp.values.size(); ++i) {
        csv += std::to_string(i + 1) + ", " + fmt17(sp.values[i]) + ", " +
               std::to_string(sp.multiplicities[static_cast<std::size_t>(i)]) +
               "\n";
      }
      emit(out, csv);
    } else if (*orbits_cmd) {
      QuantumGraph g = parse_graph_json(read_input(input));
      std::string csv = "length, amplitude_re, amplitude_im, repetition\n";
      for (const PeriodicOrbit& p : enumerate_orbits(g, orbit_cutoff))
        csv += fmt17(p.length) + ", " + fmt17(p.amplitude.real()) + ", " +
               fmt17(p.amplitude.imag()) + ", " + std::to_string(p.repetition) +
               "\n";
      emit(out, csv);
    } else if (*expansion_cmd) {
      StaircaseExpansion x =
          input.empty()
              ? riemann_expansion(prime_cutoff, m_max)
              : [&] {
                  QuantumGraph g = parse_graph_json(read_input(input));
                  return graph_expansion(g, enumerate_orbits(g, orbit_cutoff));
                }();
      emit(out, expansion_json(x) + "\n");
    } else if (*reconstruct_cmd) {
      std::string csv = "n, k\n";
      SpectralSequence rec;
      if (input.empty()) {
        StaircaseExpansion x = riemann_expansion(prime_cutoff, m_max);
        Sequence seps(count + 1);
        for (int n = 0; n <= count; ++n)
          seps[n] = invert_average(RiemannVonMangoldt{}, n);
        rec = reconstruct_spectrum(x, HierarchyLevel::from_values(0, seps));
      } else {
        QuantumGraph g = parse_graph_json(read_input(input));
        StaircaseExpansion x =
            graph_expansion(g, enumerate_orbits(g, orbit_cutoff));
        rec = regular_graph_spectrum(x, g.total_length(), 1, count);
      }
      for (Eigen::Index i = 0; i < rec.values.size(); ++i)
        csv += std::to_string(i + 1) + ", " + fmt17(rec.values[i]) + "\n";
      emit(out, csv);
    } else if (*stats_cmd) {
      SpectralSequence seq = parse_zero_table(read_input(input));
      UnfoldedSequence u = unfold(seq, model_for(model, seq));
      emit(out, histogram_csv(histogram(
                    spacings(HierarchyLevel::from_values(0, u.values)), bins)));
    } else if (*fetch_cmd) {
      const auto path = fetch_dataset(url, cache_dir, nullptr, offline);
      std::fputs((path.string() + "\n").c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fputs((std::string("error: ") + e.what() + "\n").c_str(), stderr);
    return exit_code_for_current_exception();
  }
  return 0;
}
