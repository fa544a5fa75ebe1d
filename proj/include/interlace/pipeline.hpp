#ifndef INTERLACE_PIPELINE_HPP
#define INTERLACE_PIPELINE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "interlace/counting.hpp"
#include "interlace/graph.hpp"
#include "interlace/hierarchy.hpp"
#include "interlace/trace.hpp"

// Ingestion, dataset fetching and end-to-end analysis orchestration.
// Everything here is deterministic: two runs over identical input
// bytes and configuration produce byte-identical artifacts except for
// the wall-time field of the report.

namespace interlace {

inline constexpr const char* kVersion = "0.1.0";

// ── ingestion ───────────────────────────────────────────────────────

// One real per line, whitespace trimmed; '#' comment lines and blank
// lines are skipped.  Values must be strictly increasing.  Throws
// ParseError with the 1-based line number of the offending line, a
// ValidationError carrying the line number on a non-monotone value,
// and EmptyInput when no data lines remain.
SpectralSequence parse_zero_table(const std::string& text);

// ── fetching ────────────────────────────────────────────────────────

// The only place the library touches a network.  Tests inject stubs.
class Transport {
 public:
  virtual ~Transport() = default;
  // Full response body, or NetworkError.
  virtual std::string get(const std::string& url) = 0;
};

// Plain-HTTP transport.  TLS is deliberately not compiled in; https
// URLs fail with NetworkError naming the scheme.
std::unique_ptr<Transport> http_transport();

// Explicit directory if nonempty, else $SPECTRAL_CACHE_DIR, else a
// directory under the system temp path.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& dir);

// Returns the cached file for the URL, downloading it on a miss.  The
// cache key is a hash of the URL, so a second fetch never touches the
// transport.  Empty payloads are rejected (EmptyPayload) and never
// cached.  In offline mode a miss throws NetworkError immediately.
std::filesystem::path fetch_dataset(const std::string& url,
                                    const std::filesystem::path& cache_dir,
                                    Transport* transport = nullptr,
                                    bool offline = false);

// ── analysis ────────────────────────────────────────────────────────

struct AnalysisConfig {
  std::string input_path;  // local file; ignored when fetch_url is set
  std::string fetch_url;   // fetched through the cache when nonempty
  std::filesystem::path cache_dir;  // empty = resolve_cache_dir rules

  // Counting model: "riemann", "fit", "spacing", "weyl:<length>".
  // Graph inputs ignore this and unfold with their exact counting
  // line weyl_constant + L0 k / pi.
  std::string model = "riemann";

  AlphaStrategy strategy = Optimal{};
  RegularityCriterion criterion = RegularityCriterion::GammaCorridor;
  int max_depth = 32;

  long long prime_cutoff = 1000;  // zero-table staircase truncation
  int m_max = 3;
  double orbit_cutoff = 0.0;  // metric length; 0 = no graph staircase
  int graph_levels = 500;     // roots fed to the hierarchy
  bool flatten_degenerate = false;

  std::filesystem::path out_dir;  // empty = emit nothing
  bool emit_hierarchy_json = true;
  bool emit_level_csv = true;
  bool emit_histogram = false;
  bool emit_staircase = false;
  int histogram_bins = 24;

  bool offline = false;
};

struct LevelStats {
  int j = 0;
  Eigen::Index count = 0;
  double spread = 0.0;
  double roughness = 0.0;
  double stddev_delta = 0.0;
  std::optional<double> gamma;  // set on the regular level
};

struct RunReport {
  std::string fingerprint;  // FNV-1a hash of the input bytes, hex
  Eigen::Index element_count = 0;
  std::optional<int> degree;  // nullopt = hierarchy did not terminate
  std::vector<LevelStats> levels;
  std::string strategy;
  std::string criterion;
  std::string model;
  std::string version = kVersion;
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> artifacts;  // files written
};

// ingest -> unfold -> hierarchy -> stats -> artifacts.  The input is
// a zero/eigenvalue table unless its first non-space byte is '{', in
// which case it is a graph description whose spectrum is computed
// first.  Network is touched only for a fetch_url cache miss.
RunReport run_analyze(const AnalysisConfig& config,
                      Transport* transport = nullptr);

// Report as JSON; wall_seconds is the only field that varies between
// reruns on identical input.
std::string report_json(const RunReport& report);

// ── emitters ────────────────────────────────────────────────────────
// All floats are written with 17 significant digits, '.' decimal
// separator and '\n' line endings, so identical inputs give identical
// bytes.

// Header "n, k, delta"; n counts from 1.
std::string level_csv(const HierarchyLevel& level);

// Header "k, N_exact, N_expansion, N_average"; one row per sample.
std::string staircase_csv(const Eigen::ArrayXd& k, const Eigen::ArrayXd& exact,
                          const Eigen::ArrayXd& expansion,
                          const Eigen::ArrayXd& average);

// Creates parent directories as needed.  Throws IoError.
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Maps the library failure taxonomy onto stable process exit codes;
// 0 is success, 1 an unclassified exception.  Used by the CLI and
// pinned in its documentation.
int exit_code_for_current_exception();

}  // namespace interlace

#endif
