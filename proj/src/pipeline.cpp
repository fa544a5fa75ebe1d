#include "interlace/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "interlace/errors.hpp"
#include "interlace/stats.hpp"

namespace interlace {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream body;
  body << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return std::move(body).str();
}

struct HttpTransport final : Transport {
  std::string get(const std::string& url) override {
    const std::string scheme_sep = "://";
    const std::size_t sep = url.find(scheme_sep);
    if (sep == std::string::npos)
      throw NetworkError("URL has no scheme: " + url);
    const std::string scheme = url.substr(0, sep);
    if (scheme != "http")
      throw NetworkError("only plain http is compiled in, got scheme '" +
                         scheme + "'");
    const std::size_t host_at = sep + scheme_sep.size();
    const std::size_t slash = url.find('/', host_at);
    const std::string host_port =
        url.substr(host_at, slash == std::string::npos ? std::string::npos
                                                       : slash - host_at);
    const std::string path =
        slash == std::string::npos ? "/" : url.substr(slash);
    std::string host = host_port;
    int port = 80;
    if (const std::size_t colon = host_port.rfind(':');
        colon != std::string::npos) {
      host = host_port.substr(0, colon);
      port = std::atoi(host_port.c_str() + colon + 1);
    }
    httplib::Client client(host, port);
    client.set_follow_location(true);
    httplib::Result res = client.Get(path);
    if (!res)
      throw NetworkError("request to " + url + " failed: " +
                         httplib::to_string(res.error()));
    if (res->status != 200)
      throw NetworkError("request to " + url + " returned HTTP " +
                         std::to_string(res->status));
    return res->body;
  }
};

CountingModel zero_table_model(const std::string& name,
                               const SpectralSequence& seq) {
  if (name == "riemann") return RiemannVonMangoldt{};
  if (name == "fit") return fit_linear_average(seq);
  if (name == "spacing") return LocalSpacing{};
  if (name.rfind("weyl:", 0) == 0) {
    char* end = nullptr;
    const double len = std::strtod(name.c_str() + 5, &end);
    if (end == nullptr || *end != '\0' || !(len > 0.0))
      throw DomainError("bad total length in model '" + name + "'");
    return WeylLinear{len};
  }
  throw DomainError("unknown counting model '" + name +
                    "' (riemann, fit, spacing, weyl:<length>)");
}

// Exact counting line of a graph: nbar(k) = weyl_constant + L0 k / pi.
CountingModel graph_model(const QuantumGraph& g) {
  Eigen::VectorXd c(2);
  c << g.weyl_constant(), g.total_length() / std::numbers::pi;
  return PolynomialFit{c};
}

SpectralSequence graph_sequence(const QuantumGraph& g, int levels,
                                bool flatten) {
  double k_max =
      (levels + 8) * std::numbers::pi / g.total_length();
  for (int attempt = 0; attempt < 8; ++attempt) {
    GraphSpectrum sp = compute_spectrum(g, k_max);
    SpectralSequence seq = sp.sequence(flatten);
    if (seq.values.size() >= levels)
      return SpectralSequence::checked(seq.values.head(levels), seq.origin);
    k_max *= 1.3;
  }
  throw IterationLimit("could not collect enough graph levels");
}

double stddev(const Eigen::ArrayXd& v) {
  return std::sqrt((v - v.mean()).square().mean());
}

std::string criterion_name(RegularityCriterion c) {
  return c == RegularityCriterion::GammaCorridor ? "gamma-corridor"
                                                 : "spacing-range";
}

}  // namespace

SpectralSequence parse_zero_table(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size())
      throw ParseError(line_no, "line " + std::to_string(line_no) +
                                    ": not a real number: '" + token + "'");
    if (!std::isfinite(v))
      throw ParseError(line_no, "line " + std::to_string(line_no) +
                                    ": not finite: '" + token + "'");
    if (!values.empty() && v <= values.back())
      throw ValidationError(ValidationError::Kind::NonMonotone, line_no,
                            "line " + std::to_string(line_no) +
                                ": value " + token +
                                " does not increase over the previous line");
    values.push_back(v);
  }
  if (values.empty()) throw EmptyInput("zero table holds no values");
  Sequence s(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), s.data());
  return SpectralSequence::checked(std::move(s), "zeros");
}

std::unique_ptr<Transport> http_transport() {
  return std::make_unique<HttpTransport>();
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& dir) {
  if (!dir.empty()) return dir;
  if (const char* env = std::getenv("SPECTRAL_CACHE_DIR");
      env != nullptr && *env != '\0')
    return env;
  return std::filesystem::temp_directory_path() / "interlace-cache";
}

std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& cache_dir,
                                    Transport* transport, bool offline) {
  const std::filesystem::path dir = resolve_cache_dir(cache_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string());
  const std::filesystem::path target = dir / (hex64(fnv1a(url)) + ".dat");
  if (std::filesystem::exists(target) &&
      std::filesystem::file_size(target) > 0)
    return target;
  if (offline)
    throw NetworkError("offline and no cached copy of " + url);
  std::unique_ptr<Transport> fallback;
  if (transport == nullptr) {
    fallback = http_transport();
    transport = fallback.get();
  }
  const std::string body = transport->get(url);
  if (body.empty()) throw EmptyPayload("empty response from " + url);
  write_text_file(target, body);
  return target;
}

RunReport run_analyze(const AnalysisConfig& config, Transport* transport) {
  const auto start = std::chrono::steady_clock::now();
  if (config.max_depth < 1 || config.max_depth > 64)
    throw DomainError("max_depth must lie in [1, 64]");
  if (config.prime_cutoff < 2) throw DomainError("prime cutoff must be >= 2");
  if (config.m_max < 1) throw DomainError("m_max must be >= 1");
  if (config.graph_levels < 2) throw DomainError("graph_levels must be >= 2");

  std::filesystem::path input = config.input_path;
  if (!config.fetch_url.empty())
    input = fetch_dataset(config.fetch_url, config.cache_dir, transport,
                          config.offline);
  const std::string bytes = read_file(input);

  RunReport report;
  report.fingerprint = hex64(fnv1a(bytes));

  const std::size_t first = bytes.find_first_not_of(" \t\r\n");
  const bool is_graph = first != std::string::npos && bytes[first] == '{';

  SpectralSequence seq;
  CountingModel model = RiemannVonMangoldt{};
  std::optional<QuantumGraph> graph;
  if (is_graph) {
    graph = parse_graph_json(bytes);
    seq = graph_sequence(*graph, config.graph_levels,
                         config.flatten_degenerate);
    model = graph_model(*graph);
    report.model = "graph-exact";
  } else {
    seq = parse_zero_table(bytes);
    model = zero_table_model(config.model, seq);
    report.model = config.model;
  }
  report.element_count = seq.values.size();

  const UnfoldedSequence u = unfold(seq, model);
  const BootstrapHierarchy h =
      build_hierarchy(u, config.strategy, config.max_depth, config.criterion);

  report.degree = h.degree;
  report.strategy = strategy_name(h.strategy);
  report.criterion = criterion_name(h.criterion);
  for (std::size_t i = 0; i < h.levels.size(); ++i) {
    LevelStats stats;
    stats.j = h.levels[i].j;
    stats.count = h.levels[i].values.size();
    stats.spread = h.tests[i].spread;
    stats.roughness = h.roughness[i];
    stats.stddev_delta = stddev(h.levels[i].deltas);
    if (h.tests[i].regular) stats.gamma = h.tests[i].gamma;
    report.levels.push_back(std::move(stats));
  }

  if (!config.out_dir.empty()) {
    const std::filesystem::path& out = config.out_dir;
    if (config.emit_hierarchy_json) {
      const auto path = out / "hierarchy.json";
      write_text_file(path, hierarchy_report_json(h));
      report.artifacts.push_back(path);
    }
    if (config.emit_level_csv) {
      for (const HierarchyLevel& level : h.levels) {
        const auto path =
            out / ("level_" + std::to_string(level.j) + ".csv");
        write_text_file(path, level_csv(level));
        report.artifacts.push_back(path);
      }
    }
    if (config.emit_histogram) {
      const auto path = out / "spacing_histogram.csv";
      write_text_file(
          path, histogram_csv(histogram(spacings(h.levels.front()),
                                        config.histogram_bins)));
      report.artifacts.push_back(path);
    }
    if (config.emit_staircase) {
      StaircaseExpansion x =
          is_graph
              ? graph_expansion(*graph, [&] {
                  if (!(config.orbit_cutoff > 0.0))
                    throw DomainError(
                        "graph staircase emission needs a positive orbit "
                        "length cutoff");
                  return enumerate_orbits(*graph, config.orbit_cutoff);
                }())
              : riemann_expansion(config.prime_cutoff, config.m_max);
      const Eigen::Index view =
          std::min<Eigen::Index>(is_graph ? 100 : 60, seq.values.size());
      const double lo = is_graph
                            ? 0.0
                            : std::max(seq.values[0] - 2.0, 7.0);
      const double hi = seq.values[view - 1] +
                        (is_graph ? std::numbers::pi / graph->total_length()
                                  : 2.0);
      const int samples = 481;
      Eigen::ArrayXd k(samples), exact(samples), approx(samples),
          average(samples);
      for (int i = 0; i < samples; ++i) {
        k[i] = lo + (hi - lo) * i / (samples - 1);
        exact[i] =
            is_graph
                ? counting_function(*graph, k[i])
                : static_cast<double>(
                      std::upper_bound(seq.values.data(),
                                       seq.values.data() + seq.values.size(),
                                       k[i]) -
                      seq.values.data());
        approx[i] = staircase_eval(x, k[i]);
        average[i] = evaluate_average(x.average, k[i]);
      }
      const auto path = out / "staircase.csv";
      write_text_file(path, staircase_csv(k, exact, approx, average));
      report.artifacts.push_back(path);
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (!config.out_dir.empty()) {
    const auto path = config.out_dir / "report.json";
    write_text_file(path, report_json(report));
    report.artifacts.push_back(path);
  }
  return report;
}

std::string report_json(const RunReport& report) {
  nlohmann::json j;
  j["fingerprint"] = report.fingerprint;
  j["elements"] = report.element_count;
  if (report.degree)
    j["degree"] = *report.degree;
  else
    j["degree"] = nullptr;
  j["strategy"] = report.strategy;
  j["criterion"] = report.criterion;
  j["model"] = report.model;
  j["version"] = report.version;
  j["wall_seconds"] = report.wall_seconds;
  j["levels"] = nlohmann::json::array();
  for (const LevelStats& s : report.levels) {
    nlohmann::json level;
    level["j"] = s.j;
    level["count"] = s.count;
    level["spread"] = s.spread;
    level["F"] = s.roughness;
    level["stddev_delta"] = s.stddev_delta;
    if (s.gamma) level["gamma"] = *s.gamma;
    j["levels"].push_back(std::move(level));
  }
  j["artifacts"] = nlohmann::json::array();
  for (const auto& path : report.artifacts)
    j["artifacts"].push_back(path.filename().string());
  return j.dump(2) + "\n";
}

std::string level_csv(const HierarchyLevel& level) {
  std::string out = "n, k, delta\n";
  for (Eigen::Index i = 0; i < level.values.size(); ++i) {
    out += std::to_string(i + 1);
    out += ", ";
    out += fmt17(level.values[i]);
    out += ", ";
    out += fmt17(level.deltas[i]);
    out += '\n';
  }
  return out;
}

std::string staircase_csv(const Eigen::ArrayXd& k, const Eigen::ArrayXd& exact,
                          const Eigen::ArrayXd& expansion,
                          const Eigen::ArrayXd& average) {
  if (k.size() != exact.size() || k.size() != expansion.size() ||
      k.size() != average.size())
    throw DomainError("staircase CSV columns differ in length");
  std::string out = "k, N_exact, N_expansion, N_average\n";
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    out += fmt17(k[i]);
    out += ", ";
    out += fmt17(exact[i]);
    out += ", ";
    out += fmt17(expansion[i]);
    out += ", ";
    out += fmt17(average[i]);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw IoError("cannot create directory " +
                    path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on " + path.string());
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ValidationError&) {
    return 2;
  } catch (const DomainError&) {
    return 3;
  } catch (const ParseError&) {
    return 4;
  } catch (const IoError&) {
    return 5;
  } catch (const NetworkError&) {
    return 6;
  } catch (const EmptyPayload&) {
    return 7;
  } catch (const EmptyInput&) {
    return 8;
  } catch (const NotRegular&) {
    return 9;
  } catch (const CutoffTooLarge&) {
    return 10;
  } catch (const ZeroSpacing&) {
    return 11;
  } catch (const TrackingLoss&) {
    return 12;
  } catch (const IterationLimit&) {
    return 13;
  } catch (const RequiresModulus&) {
    return 14;
  } catch (const Error&) {
    return 15;
  } catch (...) {
    return 1;
  }
}

}  // namespace interlace
