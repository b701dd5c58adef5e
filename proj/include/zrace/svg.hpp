// Copyright 2026 The zrace Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "zrace/races.hpp"

namespace zrace {

// Scatter of (E^f, E^g) with the strip boundaries y - b_g = x - b_f +- w.
inline void write_race_svg(std::ostream& os, const std::vector<RaceSample>& samples, double w) {
  const int W = 640, H = 640, M = 60;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  if (!samples.empty()) {
    x0 = x1 = samples[0].ef;
    y0 = y1 = samples[0].eg;
  }
  for (const auto& s : samples) {
    x0 = std::min(x0, s.ef);
    x1 = std::max(x1, s.ef);
    y0 = std::min(y0, s.eg);
    y1 = std::max(y1, s.eg);
  }
  double pad = 0.05 * std::max({x1 - x0, y1 - y0, 1e-3});
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
  char buf[256];
  std::string fname = samples.empty() ? "f" : kind_info(samples[0].f).name;
  std::string gname = samples.empty() ? "g" : kind_info(samples[0].g).name;
  double bf = samples.empty() ? 0 : kind_info(samples[0].f).bias;
  double bg = samples.empty() ? 0 : kind_info(samples[0].g).bias;

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<defs><clipPath id=\"plot\"><rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M
     << "\" height=\"" << H - 2 * M << "\"/></clipPath></defs>\n";
  os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\"" << H - 2 * M
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<g clip-path=\"url(#plot)\">\n";
  if (x0 < 0 && x1 > 0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%d\" x2=\"%.2f\" y2=\"%d\" stroke=\"#999\"/>\n",
                  px(0), M, px(0), H - M);
    os << buf;
  }
  if (y0 < 0 && y1 > 0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%d\" y1=\"%.2f\" x2=\"%d\" y2=\"%.2f\" stroke=\"#999\"/>\n",
                  M, py(0), W - M, py(0));
    os << buf;
  }
  for (double sgn : {-1.0, 1.0}) {
    // y = x - bf + bg + sgn * w
    double off = bg - bf + sgn * w;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#c33\" stroke-dasharray=\"6 4\"/>\n",
                  px(x0), py(x0 + off), px(x1), py(x1 + off));
    os << buf;
  }
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\" fill=\"#236\"/>\n", px(s.ef),
                  py(s.eg));
    os << buf;
  }
  os << "</g>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" font-size=\"14\">E^%s</text>\n",
                W / 2, H - 20, fname.c_str());
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"20\" y=\"%d\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 %d)\">E^%s</text>\n",
                H / 2, H / 2, gname.c_str());
  os << buf;
  for (int i = 0; i <= 4; ++i) {
    double xv = x0 + (x1 - x0) * i / 4.0;
    double yv = y0 + (y1 - y0) * i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%d\" text-anchor=\"middle\" font-size=\"10\">%.3g</text>\n",
                  px(xv), H - M + 14, xv);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%.2f\" text-anchor=\"end\" font-size=\"10\">%.3g</text>\n",
                  M - 4, py(yv) + 3, yv);
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace zrace
