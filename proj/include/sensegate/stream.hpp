#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sensegate/error.hpp"
#include "sensegate/rng.hpp"

namespace sensegate {

enum class TruthClass : std::uint8_t { Background = 0, Foi = 1 };

// One timestep of the sensor stream. The frame period is 1/refresh_hz; frames
// are symbolic (no pixel content). `score` is filled by the detector stage and
// stays within [0, 1] whenever set.
struct Frame {
  std::uint64_t index = 0;
  TruthClass truth = TruthClass::Background;
  std::optional<double> score;

  bool operator==(const Frame&) const = default;
};

// Parameters for the synthetic segment-alternating stream. Classes appear in
// contiguous runs: FOI runs with geometric length of mean `mean_segment_len`,
// background runs with mean `ratio_m * mean_segment_len`, so the long-run
// background:FOI frame ratio is ratio_m.
struct StreamSpec {
  std::uint64_t n_frames = 0;
  double ratio_m = 1.0;
  std::uint32_t mean_segment_len = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_frames < 1) throw ConfigError("StreamSpec.n_frames: must be >= 1");
    if (!(ratio_m > 0.0) || !std::isfinite(ratio_m))
      throw ConfigError("StreamSpec.ratio_m: must be a positive finite real");
    if (mean_segment_len < 1) throw ConfigError("StreamSpec.mean_segment_len: must be >= 1");
  }
};

// Builds the alternating FOI/background stream. Deterministic in spec.seed;
// the first segment's class is Bernoulli(1/(1+M)) so short streams are
// unbiased. Scores are left unset.
inline std::vector<Frame> generate_stream(const StreamSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const double p_foi = 1.0 / (1.0 + spec.ratio_m);
  TruthClass current = rng.bernoulli(p_foi) ? TruthClass::Foi : TruthClass::Background;

  std::vector<Frame> frames;
  frames.reserve(spec.n_frames);
  while (frames.size() < spec.n_frames) {
    const double mean = current == TruthClass::Foi
                            ? static_cast<double>(spec.mean_segment_len)
                            : spec.ratio_m * static_cast<double>(spec.mean_segment_len);
    std::uint64_t len = rng.geometric_min1(mean);
    len = std::min<std::uint64_t>(len, spec.n_frames - frames.size());
    for (std::uint64_t i = 0; i < len; ++i)
      frames.push_back(Frame{frames.size(), current, std::nullopt});
    current = current == TruthClass::Foi ? TruthClass::Background : TruthClass::Foi;
  }
  return frames;
}

namespace detail {

inline std::string trace_row_error(const std::filesystem::path& path, std::size_t line,
                                   const std::string& what) {
  return path.string() + ":" + std::to_string(line) + ": " + what;
}

inline bool parse_u64(std::string_view text, std::uint64_t& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_double(std::string_view text, double& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

} // namespace detail

inline constexpr std::string_view kTraceHeader = "index,label,score";

// Reads a trace file (CSV `index,label,score`, label in {foi,bg}, score a
// decimal in [0,1]). Frames come back in file order, reindexed from 0; scores
// are preserved as written. Every failure names the offending line.
inline std::vector<Frame> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw IoError(detail::trace_row_error(path, 1, "missing header"));
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw IoError(detail::trace_row_error(path, line_no,
                                          "bad header, expected '" + std::string(kTraceHeader) + "'"));

  std::vector<Frame> frames;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::string_view row(line);
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos)
      throw IoError(detail::trace_row_error(path, line_no, "malformed row, expected 3 fields"));

    const std::string_view idx_text = row.substr(0, c1);
    const std::string_view label_text = row.substr(c1 + 1, c2 - c1 - 1);
    const std::string_view score_text = row.substr(c2 + 1);

    std::uint64_t idx = 0;
    if (!detail::parse_u64(idx_text, idx))
      throw IoError(detail::trace_row_error(path, line_no, "malformed index field"));

    TruthClass truth;
    if (label_text == "foi")
      truth = TruthClass::Foi;
    else if (label_text == "bg")
      truth = TruthClass::Background;
    else
      throw IoError(detail::trace_row_error(path, line_no,
                                            "unknown label token '" + std::string(label_text) + "'"));

    double score = 0.0;
    if (!detail::parse_double(score_text, score))
      throw IoError(detail::trace_row_error(path, line_no, "malformed score field"));
    if (!(score >= 0.0 && score <= 1.0))
      throw IoError(detail::trace_row_error(path, line_no, "score outside [0,1]"));

    frames.push_back(Frame{frames.size(), truth, score});
  }
  return frames;
}

// Writes the trace format read by load_trace. Scores are required and emitted
// with 6 fractional digits (the format's maximum).
inline void write_trace(const std::filesystem::path& path, std::span<const Frame> frames) {
  std::ofstream out(path, std::ios::binary); // binary: keep LF endings everywhere
  if (!out) throw IoError("cannot open trace file for writing: " + path.string());
  out << kTraceHeader << '\n';
  for (const Frame& f : frames) {
    if (!f.score) throw IoError("write_trace: frame " + std::to_string(f.index) + " has no score");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%llu,%s,%.6f\n", static_cast<unsigned long long>(f.index),
                  f.truth == TruthClass::Foi ? "foi" : "bg", *f.score);
    out << buf;
  }
  if (!out) throw IoError("failed writing trace file: " + path.string());
}

inline double foi_fraction(std::span<const Frame> frames) {
  if (frames.empty()) throw std::invalid_argument("foi_fraction: empty stream");
  std::uint64_t n_foi = 0;
  for (const Frame& f : frames) n_foi += f.truth == TruthClass::Foi ? 1 : 0;
  return static_cast<double>(n_foi) / static_cast<double>(frames.size());
}

} // namespace sensegate
