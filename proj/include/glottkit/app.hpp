// Copyright 2026 The glottkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Run configuration (JSON) and the four batch commands behind the CLI.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glottkit/error.hpp"
#include "glottkit/estimators.hpp"
#include "glottkit/features.hpp"
#include "glottkit/io.hpp"
#include "glottkit/lf_source.hpp"
#include "glottkit/metrics_bench.hpp"
#include "glottkit/vocal_tract.hpp"

namespace glottkit {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutEnv = "GLOTTKIT_OUT";

struct SynthConfig {
  LFParams lf;
  std::size_t cycles = 10;
  std::string vowel = "a";
  double snr_db = 80.0;
  double fs = 16000.0;
  double peak = 0.5;  // output peak as a fraction of full scale
  std::string name = "synth";
};

struct EstimateConfig {
  std::filesystem::path wav;
  std::filesystem::path markers;
  std::vector<Method> methods{Method::CPIF, Method::IAIF, Method::CCD};
  std::size_t order = 18;
  int hrf_harmonics = 10;
  bool dump = true;
};

struct BenchConfig {
  GridSpec grid;
  bool plots = true;
};

struct VQConfig {
  VQSpec spec;
  bool plots = true;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::filesystem::path output_dir = "glottkit_out";
  std::filesystem::path base_dir = ".";  // directory of the config file
  std::vector<VowelPreset> presets = vowel_presets();
  SynthConfig synth;
  EstimateConfig estimate;
  BenchConfig bench;
  VQConfig vq;
};

namespace detail {

using json = nlohmann::json;

// Object reader that refuses keys it was not asked about.
class Obj {
 public:
  Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  ~Obj() = default;

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }
  const json& at(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }
  std::string path(const std::string& k) const { return where_ + "." + k; }

  template <class T>
  void get(const std::string& k, T& out) {
    if (!has(k)) return;
    try {
      out = j_.at(k).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(k) + ": wrong type");
    }
  }
  void number(const std::string& k, double& out) {
    if (!has(k)) return;
    if (!j_.at(k).is_number()) throw ConfigError(path(k) + ": expected a number");
    out = j_.at(k).get<double>();
  }
  void range(const std::string& k, Range& r) {
    if (!has(k)) return;
    const auto& v = j_.at(k);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
      throw ConfigError(path(k) + ": expected [start, step, stop]");
    }
    r = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  }
  void interval(const std::string& k, double& lo, double& hi) {
    if (!has(k)) return;
    const auto& v = j_.at(k);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError(path(k) + ": expected [low, high]");
    }
    lo = v[0].get<double>();
    hi = v[1].get<double>();
    if (!(lo <= hi)) throw ConfigError(path(k) + ": low > high");
  }
  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

inline void parse_synth(const json& j, SynthConfig& c, const std::vector<VowelPreset>& table) {
  Obj o(j, "synth");
  o.number("f0", c.lf.f0);
  o.number("oq", c.lf.oq);
  o.number("alpha_m", c.lf.alpha_m);
  o.number("qa", c.lf.qa);
  o.number("ee", c.lf.ee);
  o.get("cycles", c.cycles);
  o.get("vowel", c.vowel);
  o.number("snr_db", c.snr_db);
  o.number("fs", c.fs);
  o.number("peak", c.peak);
  o.get("name", c.name);
  o.finish();
  validate(c.lf);
  if (c.cycles == 0) throw ConfigError("synth.cycles must be positive");
  if (!(c.peak > 0.0 && c.peak <= 1.0)) throw ConfigError("synth.peak must lie in (0, 1]");
  if (c.name.empty() || c.name.find('/') != std::string::npos) {
    throw ConfigError("synth.name must be a plain file stem");
  }
  try {
    find_vowel(c.vowel, table);
  } catch (const Error& e) {
    throw ConfigError(std::string("synth.vowel: ") + e.what());
  }
}

inline std::vector<Method> parse_methods(Obj& o, const std::string& key, std::vector<Method> def) {
  if (!o.has(key)) return def;
  const auto& v = o.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(o.path(key) + ": expected a non-empty list");
  std::vector<Method> out;
  for (const auto& m : v) {
    if (!m.is_string()) throw ConfigError(o.path(key) + ": expected method names");
    try {
      out.push_back(parse_method(m.get<std::string>()));
    } catch (const Error& e) {
      throw ConfigError(o.path(key) + ": " + e.what());
    }
  }
  return out;
}

inline void parse_estimate(const json& j, EstimateConfig& c, const std::filesystem::path& base) {
  Obj o(j, "estimate");
  std::string wav, markers;
  o.get("wav", wav);
  o.get("markers", markers);
  c.methods = parse_methods(o, "methods", c.methods);
  o.get("order", c.order);
  o.get("hrf_harmonics", c.hrf_harmonics);
  o.get("dump", c.dump);
  o.finish();
  if (!wav.empty()) c.wav = base / wav;
  if (!markers.empty()) c.markers = base / markers;
  if (c.order == 0) throw ConfigError("estimate.order must be positive");
}

inline std::vector<std::string> parse_vowels(Obj& o, const std::string& key,
                                             std::vector<std::string> def,
                                             const std::vector<VowelPreset>& table) {
  if (!o.has(key)) return def;
  std::vector<std::string> v;
  o.get(key, v);
  if (v.empty()) throw ConfigError(o.path(key) + ": expected a non-empty list");
  for (const auto& s : v) {
    try {
      find_vowel(s, table);
    } catch (const Error& e) {
      throw ConfigError(o.path(key) + ": " + e.what());
    }
  }
  return v;
}

inline void parse_bench(const json& j, BenchConfig& c, const std::vector<VowelPreset>& table) {
  Obj o(j, "bench");
  if (o.has("preset")) {
    std::string p;
    o.get("preset", p);
    if (p == "desk") c.grid = GridSpec::desk();
    else if (p == "full") c.grid = GridSpec{};
    else throw ConfigError("bench.preset: expected 'full' or 'desk'");
  }
  o.range("f0", c.grid.f0);
  o.range("oq", c.grid.oq);
  o.range("alpha_m", c.grid.alpha_m);
  c.grid.presets = table;
  c.grid.vowels = parse_vowels(o, "vowels", c.grid.vowels, table);
  o.get("snr_db", c.grid.snr_db);
  o.number("qa", c.grid.qa);
  o.get("cycles", c.grid.cycles);
  o.get("order", c.grid.order);
  o.number("threshold", c.grid.threshold);
  o.get("plots", c.plots);
  o.finish();
  try {
    (void)Grid(c.grid);
  } catch (const Error& e) {
    throw ConfigError(std::string("bench: ") + e.what());
  }
}

inline void parse_vq(const json& j, VQConfig& c, const std::vector<VowelPreset>& table) {
  Obj o(j, "vq");
  auto& s = c.spec;
  o.get("stimuli_per_class", s.stimuli_per_class);
  if (o.has("classes")) {
    const auto& v = o.at("classes");
    if (!v.is_array() || v.size() != 3) throw ConfigError("vq.classes: expected three classes");
    for (std::size_t i = 0; i < 3; ++i) {
      Obj co(v[i], "vq.classes[" + std::to_string(i) + "]");
      co.get("name", s.classes[i].name);
      co.interval("oq", s.classes[i].oq_lo, s.classes[i].oq_hi);
      co.finish();
    }
  }
  o.interval("alpha_m", s.alpha_m_lo, s.alpha_m_hi);
  o.interval("qa", s.qa_lo, s.qa_hi);
  o.interval("f0", s.f0_lo, s.f0_hi);
  o.number("snr_db", s.snr_db);
  s.presets = table;
  s.vowels = parse_vowels(o, "vowels", s.vowels, table);
  o.get("nbins", s.nbins);
  o.get("hrf_harmonics", s.hrf_harmonics);
  o.get("min_valid", s.min_valid);
  o.get("plots", c.plots);
  o.finish();
  if (s.stimuli_per_class == 0) throw ConfigError("vq.stimuli_per_class must be positive");
}

// Entries replace the built-in preset with the same label or are appended.
inline void parse_presets(const json& j, std::vector<VowelPreset>& table) {
  if (!j.is_array()) throw ConfigError("vowel_presets: expected a list");
  for (std::size_t i = 0; i < j.size(); ++i) {
    Obj o(j[i], "vowel_presets[" + std::to_string(i) + "]");
    VowelPreset v;
    o.get("label", v.label);
    std::vector<std::array<double, 2>> fb;
    o.get("formants", fb);
    o.finish();
    if (v.label.empty()) throw ConfigError(o.path("label") + ": empty label");
    for (const auto& [f, b] : fb) v.formants.push_back({f, b});
    try {
      validate(v, 16000.0);
      (void)ar_from_formants(v, 16000.0);
    } catch (const Error& e) {
      throw ConfigError(std::string("vowel_presets: ") + e.what());
    }
    auto it = std::find_if(table.begin(), table.end(), [&](const VowelPreset& p) { return p.label == v.label; });
    if (it != table.end()) *it = std::move(v);
    else table.push_back(std::move(v));
  }
}

}  // namespace detail

// Parse a configuration document. Every key is checked; unknown keys and a
// schema_version other than kSchemaVersion are errors.
inline RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".") {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.base_dir = base_dir;
  detail::Obj o(j, "config");
  if (!o.has("schema_version")) throw ConfigError("config: missing schema_version");
  o.get("schema_version", c.schema_version);
  if (c.schema_version != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  }
  o.get("seed", c.seed);
  o.get("threads", c.threads);
  std::string out;
  o.get("output_dir", out);
  if (!out.empty()) c.output_dir = base_dir / out;
  if (o.has("vowel_presets")) detail::parse_presets(o.at("vowel_presets"), c.presets);
  c.bench.grid.presets = c.presets;
  c.vq.spec.presets = c.presets;
  if (o.has("synth")) detail::parse_synth(o.at("synth"), c.synth, c.presets);
  if (o.has("estimate")) detail::parse_estimate(o.at("estimate"), c.estimate, base_dir);
  if (o.has("bench")) detail::parse_bench(o.at("bench"), c.bench, c.presets);
  if (o.has("vq")) detail::parse_vq(o.at("vq"), c.vq, c.presets);
  o.finish();
  c.bench.grid.seed = c.seed;
  c.vq.spec.seed = c.seed;
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

// Command-line overrides. Output directory precedence: --out, then the
// GLOTTKIT_OUT environment variable, then the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
};

inline void apply(RunConfig& c, const Overrides& ov) {
  if (ov.seed) {
    c.seed = *ov.seed;
    c.bench.grid.seed = c.seed;
    c.vq.spec.seed = c.seed;
  }
  if (const char* env = std::getenv(kOutEnv); env && *env) c.output_dir = env;
  if (ov.out) c.output_dir = *ov.out;
  if (ov.threads) c.threads = *ov.threads;
}

inline std::filesystem::path ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
  return p;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOutput {
  std::filesystem::path wav, markers;
  std::size_t cycles = 0;
};

inline SynthOutput cmd_synth(const RunConfig& c) {
  const auto& s = c.synth;
  const auto dir = ensure_dir(c.output_dir);
  const std::vector<LFParams> cycles(s.cycles, s.lf);
  const auto train = synth_lf_train(cycles, s.fs);
  const auto vt = ar_from_formants(find_vowel(s.vowel, c.presets), s.fs);
  auto x = add_noise(filter(train.dflow, vt), s.snr_db, mix_seed(c.seed, 0));
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : x) v *= s.peak / peak;
  }
  SynthOutput out;
  out.wav = dir / (s.name + ".wav");
  out.markers = dir / (s.name + ".markers");
  out.cycles = s.cycles;
  io::write_wav(out.wav, x, static_cast<std::uint32_t>(std::lround(s.fs)));
  io::write_markers(out.markers, {train.gci, train.goi});
  return out;
}

// ---------------------------------------------------------------------------
// estimate

struct FeatureRecord {
  std::size_t gci = 0;
  Method method = Method::CPIF;
  bool valid = false;
  double naq = std::numeric_limits<double>::quiet_NaN();
  double qoq = std::numeric_limits<double>::quiet_NaN();
  double h1h2 = std::numeric_limits<double>::quiet_NaN();
  double hrf = std::numeric_limits<double>::quiet_NaN();
  double f0_used = std::numeric_limits<double>::quiet_NaN();
  std::string diagnostic;
};

// Features of every GCI with a complete two-period frame, for every method.
// H1-H2 and HRF need four periods ending at the GCI and are left NaN
// (with a note) where those are not available.
inline std::vector<FeatureRecord> analyse_signal(std::span<const double> x, double fs,
                                                 const io::Markers& mk,
                                                 const EstimateConfig& cfg,
                                                 std::vector<GlottalEstimate>* dumps = nullptr) {
  std::vector<FeatureRecord> out;
  EstimatorOptions opt;
  opt.order = cfg.order;
  for (std::size_t j = 0; j < mk.gci.size(); ++j) {
    AnalysisContext ctx;
    ctx.gci = mk.gci;
    ctx.goi = mk.goi;
    ctx.fs = fs;
    ctx.anchor = j;
    if (j > 0) ctx.t0 = mk.gci[j] - mk.gci[j - 1];
    else if (mk.gci.size() > 1) ctx.t0 = mk.gci[1] - mk.gci[0];
    else continue;
    const std::size_t g = mk.gci[j];
    if (g < ctx.t0 || g + ctx.t0 > x.size()) continue;
    for (Method m : cfg.methods) {
      FeatureRecord r;
      r.gci = g;
      r.method = m;
      r.f0_used = fs / static_cast<double>(ctx.t0);
      const auto est = estimate(m, x, ctx, opt);
      if (dumps) dumps->push_back(est);
      r.diagnostic = est.diagnostic;
      if (est.valid) {
        try {
          const auto shape = cycle_shape(est.dflow, est.gci, ctx.t0);
          r.naq = shape.naq;
          r.qoq = shape.qoq;
          r.valid = true;
          if (g + 1 >= 4 * ctx.t0) {
            const auto four = estimate_span(m, x, ctx, {g + 1 - 4 * ctx.t0, g + 1}, opt);
            if (four.valid) {
              r.h1h2 = h1h2(four.dflow, r.f0_used, fs);
              r.hrf = hrf(four.dflow, r.f0_used, fs, cfg.hrf_harmonics);
            } else {
              r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + four.diagnostic;
            }
          } else {
            r.diagnostic += (r.diagnostic.empty() ? "" : "; ") +
                            std::string("fewer than four periods before the GCI");
          }
        } catch (const Error& e) {
          r.diagnostic += (r.diagnostic.empty() ? "" : "; ") + std::string(e.what());
          r.valid = std::isfinite(r.naq);
        }
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

struct EstimateOutput {
  std::filesystem::path features;
  std::vector<std::filesystem::path> dumps;
  std::size_t rows = 0;
};

inline EstimateOutput cmd_estimate(const RunConfig& c) {
  const auto& e = c.estimate;
  if (e.wav.empty() || e.markers.empty()) {
    throw ConfigError("estimate: both 'wav' and 'markers' are required");
  }
  const auto wav = io::read_wav(e.wav);
  const auto mk = io::read_markers(e.markers, wav.samples.size());
  const auto dir = ensure_dir(c.output_dir);
  std::vector<GlottalEstimate> ests;
  const auto recs = analyse_signal(wav.samples, wav.fs, mk, e, e.dump ? &ests : nullptr);

  EstimateOutput out;
  out.features = dir / "features.csv";
  io::CsvWriter w(out.features, {"gci", "method", "valid", "naq", "qoq", "h1h2_db", "hrf_db",
                                 "f0_used_hz", "diagnostic"});
  for (const auto& r : recs) {
    w.row({std::to_string(r.gci), std::string(to_string(r.method)), r.valid ? "1" : "0",
           io::fmt(r.naq), io::fmt(r.qoq), io::fmt(r.h1h2), io::fmt(r.hrf), io::fmt(r.f0_used),
           io::cell(r.diagnostic)});
  }
  out.rows = recs.size();
  if (e.dump) {
    for (Method m : e.methods) {
      const auto p = dir / ("estimate_" + std::string(to_string(m)) + ".csv");
      io::CsvWriter d(p, {"gci", "sample", "dflow", "flow"});
      for (std::size_t i = 0; i < ests.size(); ++i) {
        const auto& est = ests[i];
        if (est.method != m || !est.valid) continue;
        const std::size_t g = recs[i].gci;
        for (std::size_t k = 0; k < est.dflow.size(); ++k) {
          d.row({std::to_string(g), std::to_string(est.begin + k), io::fmt(est.dflow[k]),
                 io::fmt(est.flow[k])});
        }
      }
      out.dumps.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// bench

inline void write_bench_csv(const std::filesystem::path& p, std::span<const BenchRecord> recs) {
  std::vector<std::string> header{"index", "f0_hz", "f0_realized_hz", "oq", "alpha_m", "vowel",
                                  "f1_hz", "snr_db", "naq_true", "qoq_true"};
  for (Method m : bench_methods()) {
    const std::string n(to_string(m));
    for (const char* col : {"_valid", "_naq", "_qoq", "_rel_err_naq", "_rel_err_qoq", "_sd_db"}) {
      header.push_back(n + col);
    }
  }
  header.push_back("diagnostic");
  io::CsvWriter w(p, header);
  for (const auto& r : recs) {
    std::vector<std::string> row{std::to_string(r.point.index), io::fmt(r.point.f0),
                                 io::fmt(r.f0_realized), io::fmt(r.point.oq),
                                 io::fmt(r.point.alpha_m), r.point.vowel, io::fmt(r.f1),
                                 io::fmt(r.point.snr_db), io::fmt(r.naq_true), io::fmt(r.qoq_true)};
    std::string diag = r.synth_error;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& m = r.methods[k];
      row.push_back(m.valid ? "1" : "0");
      row.push_back(io::fmt(m.naq));
      row.push_back(io::fmt(m.qoq));
      row.push_back(io::fmt(m.rel_err_naq));
      row.push_back(io::fmt(m.rel_err_qoq));
      row.push_back(io::fmt(m.sd));
      if (!m.diagnostic.empty()) {
        diag += (diag.empty() ? "" : "; ") + std::string(to_string(bench_methods()[k])) + ": " +
                m.diagnostic;
      }
    }
    row.push_back(io::cell(diag));
    w.row(row);
  }
}

struct SummaryRow {
  std::string axis;
  double value = 0.0;
  std::array<MethodSummary, 3> methods;
};

// Per-level summaries along one grid axis.
template <class Key>
std::vector<SummaryRow> summarize_by(std::span<const BenchRecord> recs, const std::string& axis,
                                     Key&& key) {
  std::map<double, bool> levels;
  for (const auto& r : recs) levels[key(r)] = true;
  std::vector<SummaryRow> out;
  for (const auto& [v, _] : levels) {
    out.push_back({axis, v, summarize(recs, [&](const BenchRecord& r) { return key(r) == v; })});
  }
  return out;
}

inline void write_summary_csv(const std::filesystem::path& p, const std::vector<SummaryRow>& rows) {
  io::CsvWriter w(p, {"axis", "value", "method", "frames", "valid_rate", "mean_sd_db",
                      "error_rate_naq", "error_rate_qoq"});
  for (const auto& r : rows) {
    for (const auto& m : r.methods) {
      w.row({r.axis, io::fmt(r.value), std::string(to_string(m.method)), std::to_string(m.frames),
             io::fmt(m.valid_rate()), io::fmt(m.mean_sd), io::fmt(m.error_rate_naq),
             io::fmt(m.error_rate_qoq)});
    }
  }
}

inline void plot_summary(const std::filesystem::path& dir, const std::string& stem,
                         const std::vector<SummaryRow>& rows, const std::string& xlabel) {
  struct Measure {
    const char* name;
    const char* label;
    double (*get)(const MethodSummary&);
  };
  const Measure measures[] = {
      {"naq", "error rate on NAQ", [](const MethodSummary& m) { return m.error_rate_naq; }},
      {"qoq", "error rate on QOQ", [](const MethodSummary& m) { return m.error_rate_qoq; }},
      {"sd", "mean spectral distortion (dB)", [](const MethodSummary& m) { return m.mean_sd; }},
  };
  for (const auto& ms : measures) {
    std::vector<io::Series> series;
    for (std::size_t k = 0; k < 3; ++k) {
      io::Series s;
      s.label = std::string(to_string(bench_methods()[k]));
      for (const auto& r : rows) {
        s.x.push_back(r.value);
        s.y.push_back(ms.get(r.methods[k]));
      }
      series.push_back(std::move(s));
    }
    io::write_line_plot(dir / (stem + "_" + ms.name + ".svg"), ms.label, xlabel, ms.label, series);
  }
}

struct BenchOutput {
  std::filesystem::path records;
  std::vector<std::filesystem::path> summaries;
  std::vector<BenchRecord> data;
};

inline BenchOutput cmd_bench(const RunConfig& c) {
  const auto dir = ensure_dir(c.output_dir);
  BenchOutput out;
  out.data = run_grid(c.bench.grid, c.threads);
  out.records = dir / "bench.csv";
  write_bench_csv(out.records, out.data);
  const auto by_snr = summarize_by(out.data, "snr_db", [](const BenchRecord& r) { return r.point.snr_db; });
  const auto by_f0 = summarize_by(out.data, "f0_hz", [](const BenchRecord& r) { return r.point.f0; });
  const auto by_f1 = summarize_by(out.data, "f1_hz", [](const BenchRecord& r) { return r.f1; });
  const std::pair<const char*, const std::vector<SummaryRow>*> tables[] = {
      {"summary_snr", &by_snr}, {"summary_f0", &by_f0}, {"summary_f1", &by_f1}};
  for (const auto& [stem, rows] : tables) {
    out.summaries.push_back(dir / (std::string(stem) + ".csv"));
    write_summary_csv(out.summaries.back(), *rows);
  }
  if (c.bench.plots) {
    plot_summary(dir, "snr", by_snr, "SNR (dB)");
    plot_summary(dir, "f0", by_f0, "F0 (Hz)");
    plot_summary(dir, "f1", by_f1, "F1 (Hz)");
  }
  return out;
}

// ---------------------------------------------------------------------------
// vq

struct VQOutput {
  std::filesystem::path divergences, medians, features;
  VQResult result;
};

inline VQOutput cmd_vq(const RunConfig& c) {
  const auto dir = ensure_dir(c.output_dir);
  VQOutput out;
  out.result = voice_quality_protocol(c.vq.spec, c.threads);
  const auto& res = out.result;
  const auto& cls = res.spec.classes;

  out.divergences = dir / "vq_divergence.csv";
  io::CsvWriter d(out.divergences, {"method", "feature", "class_a", "class_b", "js_bits"});
  for (const auto& t : res.table) {
    d.row({std::string(to_string(t.method)), std::string(to_string(t.feature)),
           io::cell(cls[t.class_a].name), io::cell(cls[t.class_b].name), io::fmt(t.js)});
  }
  out.medians = dir / "vq_medians.csv";
  io::CsvWriter md(out.medians, {"method", "feature", "class", "median", "valid_frames"});
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t f = 0; f < 3; ++f) {
      for (std::size_t ci = 0; ci < 3; ++ci) {
        md.row({std::string(to_string(bench_methods()[k])),
                std::string(to_string(static_cast<VQFeature>(f))), io::cell(cls[ci].name),
                io::fmt(res.medians[k][f][ci]), std::to_string(res.valid_counts[k][f][ci])});
      }
    }
  }
  out.features = dir / "vq_features.csv";
  std::vector<std::string> header{"class", "index", "f0_hz", "oq", "alpha_m", "qa", "vowel"};
  for (Method m : bench_methods()) {
    for (const char* f : {"_naq", "_h1h2_db", "_hrf_db"}) header.push_back(std::string(to_string(m)) + f);
  }
  io::CsvWriter fw(out.features, header);
  for (const auto& s : res.stimuli) {
    std::vector<std::string> row{io::cell(cls[s.class_index].name), std::to_string(s.index),
                                 io::fmt(s.params.f0), io::fmt(s.params.oq),
                                 io::fmt(s.params.alpha_m), io::fmt(s.params.qa), s.vowel};
    for (const auto& m : s.features) {
      for (double v : m) row.push_back(io::fmt(v));
    }
    fw.row(row);
  }
  if (c.vq.plots) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t f = 0; f < 3; ++f) {
        std::vector<std::pair<std::string, std::vector<double>>> probs;
        for (std::size_t ci = 0; ci < 3; ++ci) {
          const auto& h = res.histograms[k][f][ci];
          probs.emplace_back(cls[ci].name, h.total > 0 ? h.probabilities()
                                                       : std::vector<double>(h.bins(), 0.0));
        }
        const std::string name = std::string(to_string(bench_methods()[k])) + "_" +
                                 std::string(to_string(static_cast<VQFeature>(f)));
        io::write_histogram_plot(dir / ("vq_hist_" + name + ".svg"), name, 
                                 std::string(to_string(static_cast<VQFeature>(f))),
                                 res.histograms[k][f][0].edges, probs);
      }
    }
  }
  return out;
}

}  // namespace glottkit
