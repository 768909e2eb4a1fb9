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


// File formats: 16-bit PCM mono WAV, GCI/GOI marker text, CSV cells and a
// small SVG line/bar plotter.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "glottkit/error.hpp"

namespace glottkit::io {

// ---------------------------------------------------------------------------
// WAV

struct Wav {
  std::vector<double> samples;  // int16 / 32768
  std::uint32_t fs = 16000;
};

namespace detail {
inline void put_u32(std::ostream& o, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  o.write(b, 4);
}
inline void put_u16(std::ostream& o, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  o.write(b, 2);
}
inline std::uint32_t get_u32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
}  // namespace detail

inline std::int16_t to_pcm16(double v) {
  const double s = std::round(v * 32768.0);
  return static_cast<std::int16_t>(std::clamp(s, -32768.0, 32767.0));
}

inline void write_wav(const std::filesystem::path& path, std::span<const double> x,
                      std::uint32_t fs) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw IoError("cannot write " + path.string());
  const auto bytes = static_cast<std::uint32_t>(2 * x.size());
  o.write("RIFF", 4);
  detail::put_u32(o, 36 + bytes);
  o.write("WAVEfmt ", 8);
  detail::put_u32(o, 16);
  detail::put_u16(o, 1);  // PCM
  detail::put_u16(o, 1);  // mono
  detail::put_u32(o, fs);
  detail::put_u32(o, fs * 2);
  detail::put_u16(o, 2);
  detail::put_u16(o, 16);
  o.write("data", 4);
  detail::put_u32(o, bytes);
  for (double v : x) detail::put_u16(o, static_cast<std::uint16_t>(to_pcm16(v)));
  if (!o) throw IoError("write failed: " + path.string());
}

inline Wav read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), {});
  auto fail = [&](const std::string& why) { return IoError(path.string() + ": " + why); };
  if (buf.size() < 12 || std::string_view(reinterpret_cast<char*>(buf.data()), 4) != "RIFF" ||
      std::string_view(reinterpret_cast<char*>(buf.data()) + 8, 4) != "WAVE") {
    throw fail("not a RIFF/WAVE file");
  }
  Wav w;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::string_view id(reinterpret_cast<char*>(buf.data()) + pos, 4);
    const std::uint32_t size = detail::get_u32(buf.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > buf.size()) throw fail("truncated chunk");
    if (id == "fmt ") {
      if (size < 16) throw fail("short fmt chunk");
      const auto format = detail::get_u16(buf.data() + body);
      const auto channels = detail::get_u16(buf.data() + body + 2);
      w.fs = detail::get_u32(buf.data() + body + 4);
      const auto bits = detail::get_u16(buf.data() + body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw fail("unsupported format (only 16-bit PCM mono is accepted)");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw fail("data chunk before fmt chunk");
      w.samples.resize(size / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(detail::get_u16(buf.data() + body + 2 * i));
        w.samples[i] = static_cast<double>(v) / 32768.0;
      }
      return w;
    }
    pos = body + size + (size & 1);
  }
  throw fail("no data chunk");
}

// ---------------------------------------------------------------------------
// Markers: one "<sample_index> <GCI|GOI>" per line, '#' starts a comment.

struct Markers {
  std::vector<std::size_t> gci;
  std::vector<std::size_t> goi;
};

inline void write_markers(const std::filesystem::path& path, const Markers& m) {
  std::vector<std::pair<std::size_t, const char*>> ev;
  for (auto g : m.gci) ev.emplace_back(g, "GCI");
  for (auto g : m.goi) ev.emplace_back(g, "GOI");
  std::sort(ev.begin(), ev.end());
  std::ofstream o(path);
  if (!o) throw IoError("cannot write " + path.string());
  for (const auto& [idx, kind] : ev) o << idx << ' ' << kind << '\n';
}

inline Markers read_markers(const std::filesystem::path& path, std::size_t signal_size) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Markers m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    long long idx = 0;
    std::string kind;
    if (!(ss >> idx)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected a sample index");
    }
    std::string extra;
    if (!(ss >> kind) || (ss >> extra) || (kind != "GCI" && kind != "GOI")) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected '<sample_index> GCI' or '<sample_index> GOI'");
    }
    if (idx < 0 || static_cast<std::size_t>(idx) >= signal_size) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": marker " +
                    std::to_string(idx) + " outside the signal");
    }
    auto& list = kind == "GCI" ? m.gci : m.goi;
    if (!list.empty() && static_cast<std::size_t>(idx) <= list.back()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + kind +
                    " markers not strictly increasing");
    }
    list.push_back(static_cast<std::size_t>(idx));
  }
  if (m.gci.empty()) throw IoError(path.string() + ": no GCI markers");
  return m;
}

// ---------------------------------------------------------------------------
// CSV

// Six significant digits; non-finite values as nan / inf / -inf.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// Quote a free-text cell when needed.
inline std::string cell(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), path_(path), width_(header.size()) {
    if (!out_) throw IoError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw IoError(path_.string() + ": row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t width_;
};

// ---------------------------------------------------------------------------
// SVG

struct Series {
  std::string label;
  std::vector<double> x, y;
};

namespace detail {
inline const char* colour(std::size_t i) {
  static const char* c[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  return c[i % 6];
}
inline std::string esc(std::string_view s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}
}  // namespace detail

// Line plot with markers. Non-finite points are skipped.
inline void write_line_plot(const std::filesystem::path& path, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel,
                            const std::vector<Series>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 55;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ofstream o(path);
  if (!o) throw IoError("cannot write " + path.string());
  char b[256];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(b, sizeof b, "<text x=\"%g\" y=\"22\" font-size=\"14\">", L);
  o << b << detail::esc(title) << "</text>\n";
  std::snprintf(b, sizeof b,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                L, T, W - L - R, H - T - B);
  o << b;
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    std::snprintf(b, sizeof b, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n",
                  px(xv), H - B + 16, xv);
    o << b;
    std::snprintf(b, sizeof b, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n",
                  L - 6, py(yv) + 4, yv);
    o << b;
  }
  std::snprintf(b, sizeof b, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">", (L + W - R) / 2,
                H - 12);
  o << b << detail::esc(xlabel) << "</text>\n";
  std::snprintf(b, sizeof b,
                "<text x=\"16\" y=\"%.1f\" transform=\"rotate(-90 16 %.1f)\" text-anchor=\"middle\">",
                (T + H - B) / 2, (T + H - B) / 2);
  o << b << detail::esc(ylabel) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      std::snprintf(b, sizeof b, "%.1f,%.1f ", px(s.x[i]), py(s.y[i]));
      pts += b;
      std::snprintf(b, sizeof b, "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                    px(s.x[i]), py(s.y[i]), detail::colour(k));
      o << b;
    }
    o << "<polyline fill=\"none\" stroke=\"" << detail::colour(k) << "\" points=\"" << pts
      << "\"/>\n";
    std::snprintf(b, sizeof b,
                  "<rect x=\"%g\" y=\"%g\" width=\"12\" height=\"12\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%g\">",
                  W - R + 12, T + 20.0 * static_cast<double>(k), detail::colour(k), W - R + 30,
                  T + 20.0 * static_cast<double>(k) + 11);
    o << b << detail::esc(s.label) << "</text>\n";
  }
  o << "</svg>\n";
}

// Overlaid step histograms sharing bin edges.
inline void write_histogram_plot(const std::filesystem::path& path, const std::string& title,
                                 const std::string& xlabel, const std::vector<double>& edges,
                                 const std::vector<std::pair<std::string, std::vector<double>>>& probs) {
  std::vector<Series> s;
  for (const auto& [label, p] : probs) {
    Series se;
    se.label = label;
    for (std::size_t i = 0; i < p.size() && i + 1 < edges.size(); ++i) {
      se.x.push_back(edges[i]);
      se.y.push_back(p[i]);
      se.x.push_back(edges[i + 1]);
      se.y.push_back(p[i]);
    }
    s.push_back(std::move(se));
  }
  write_line_plot(path, title, xlabel, "probability", s);
}

}  // namespace glottkit::io
