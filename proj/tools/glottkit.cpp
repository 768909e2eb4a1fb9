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


#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "glottkit/app.hpp"

namespace {

struct Args {
  std::string config;
  glottkit::Overrides ov;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config, "JSON run configuration")->required();
  sub->add_option_function<std::uint64_t>("--seed", [&a](const std::uint64_t& s) { a.ov.seed = s; },
                                          "override the configured seed");
  sub->add_option_function<std::string>("--out", [&a](const std::string& s) { a.ov.out = s; },
                                        "output directory (beats GLOTTKIT_OUT and the config)");
  sub->add_option_function<unsigned>("--threads", [&a](const unsigned& n) { a.ov.threads = n; },
                                     "worker threads, 0 = hardware concurrency");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glottkit: glottal source estimation toolkit"};
  app.require_subcommand(1);
  Args a;
  auto* synth = app.add_subcommand("synth", "synthesize a vowel from LF pulses");
  auto* estimate = app.add_subcommand("estimate", "estimate the glottal flow of a recording");
  auto* bench = app.add_subcommand("bench", "run the synthetic benchmark grid");
  auto* vq = app.add_subcommand("vq", "voice quality separability protocol");
  for (auto* s : {synth, estimate, bench, vq}) add_common(s, a);

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = glottkit::load_config(a.config);
    glottkit::apply(cfg, a.ov);
    if (synth->parsed()) {
      const auto r = glottkit::cmd_synth(cfg);
      std::printf("wrote %s (%zu cycles) and %s\n", r.wav.string().c_str(), r.cycles,
                  r.markers.string().c_str());
    } else if (estimate->parsed()) {
      const auto r = glottkit::cmd_estimate(cfg);
      std::printf("wrote %s\n", r.features.string().c_str());
    } else if (bench->parsed()) {
      const auto r = glottkit::cmd_bench(cfg);
      std::printf("%zu grid points -> %s\n", r.data.size(), r.records.string().c_str());
    } else if (vq->parsed()) {
      const auto r = glottkit::cmd_vq(cfg);
      std::printf("wrote %s and %s\n", r.divergences.string().c_str(), r.medians.string().c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "glottkit: %s\n", e.what());
    return 1;
  }
  return 0;
}
