#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/bounds.hpp"
#include "fracspec/cantor.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/spectra.hpp"

namespace fracspec {

// all floating output goes through one fixed format so runs are byte-stable
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return std::string(buf);
}

inline void write_spectrum(std::ostream& os, const SpectrumSet& s) {
  os << "# spectrum dim=" << s.dim << " provenance=" << provenance_name(s.provenance)
     << " depth=" << s.depth << "\n";
  if (!s.note.empty()) os << "# note: " << s.note << "\n";
  for (const RatPoint& p : s.points) os << format_point(p) << "\n";
}

inline SpectrumSet read_spectrum(std::istream& is) {
  SpectrumSet s;
  s.dim = 0;
  std::string line;
  bool header_seen = false;
  std::vector<RatPoint> pts;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      if (!header_seen) {
        std::istringstream hs(line.substr(start + 1));
        std::string tok;
        while (hs >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
          if (key == "dim")
            s.dim = static_cast<std::size_t>(std::stoull(val));
          else if (key == "provenance")
            s.provenance = provenance_from_name(val);
          else if (key == "depth")
            s.depth = static_cast<std::size_t>(std::stoull(val));
        }
        header_seen = true;
      }
      continue;
    }
    std::istringstream ls(line);
    RatPoint p;
    std::string tok;
    while (ls >> tok) p.c.push_back(parse_rat(tok));
    if (p.c.empty()) continue;
    if (s.dim == 0) s.dim = p.dim();
    if (p.dim() != s.dim) throw ConfigError("read_spectrum: inconsistent point dimension");
    pts.push_back(std::move(p));
  }
  if (s.dim == 0) throw ConfigError("read_spectrum: no points and no dim header");
  return make_spectrum(s.dim, std::move(pts), s.provenance, s.depth, s.note);
}

inline void write_bound_series_csv(std::ostream& os, const BoundSeries& series) {
  os << "n,rows,cols,sigma_max,sigma_min\n";
  for (const BoundRecord& r : series.records)
    os << r.n << "," << r.rows << "," << r.cols << "," << format_double(r.sigma_max) << ","
       << format_double(r.sigma_min) << "\n";
}

inline void write_riesz_csv(std::ostream& os, const std::vector<cantor::RieszRecord>& recs) {
  os << "n,A_lower_est,B_upper_est,A_bound,B_bound,pass\n";
  for (const cantor::RieszRecord& r : recs)
    os << r.n << "," << format_double(r.lower_est) << "," << format_double(r.upper_est) << ","
       << format_double(r.lower_bound) << "," << format_double(r.upper_bound) << ","
       << (r.pass ? 1 : 0) << "\n";
}

inline void write_certificate(std::ostream& os, const FrameCertificate& c) {
  os << "r0=" << format_double(c.r0) << "\n";
  os << "grid_step=" << format_double(c.grid_step) << "\n";
  os << "n_max=" << c.n_max << "\n";
  os << "delta=" << format_double(c.delta) << "\n";
  os << "m_hat=" << format_double(c.m_hat) << "\n";
  os << "M_hat=" << format_double(c.M_hat) << "\n";
  os << "frame_evidence=" << (c.frame_evidence ? "true" : "false") << "\n";
}

}  // namespace fracspec
