#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracspec/errors.hpp"
#include "fracspec/exact.hpp"
#include "fracspec/hadamard.hpp"
#include "fracspec/ifs.hpp"
#include "fracspec/io.hpp"
#include "fracspec/spectra.hpp"

namespace fracspec {

// Where a run gets its frequency set from. kind "from-cycles" grows one out
// of the extreme cycles of the dual system; "lacunary" takes all subset sums
// of powers of R (one dimension only); the rest are literal.
struct LambdaSpec {
  enum class Kind { from_cycles, lacunary, file, points };
  Kind kind = Kind::from_cycles;
  std::size_t depth = 0;  // 0: fall back to the run depth (lacunary: 10)
  std::string path;
  std::vector<RatPoint> points;
};

struct RunConfig {
  std::string name;
  Ifs system;
  std::vector<std::vector<std::int64_t>> L;  // may be empty (no dual digits)
  double r0 = 1.0;
  std::size_t n_max = 8;
  std::size_t depth = 6;
  std::uint64_t seed = 12345;
  double tail_tolerance = 1e-12;
  std::uint64_t word_cap = std::uint64_t{1} << 16;
  std::int64_t z_range = 10;
  double grid_step = 0.0;  // 0: r0 / 128
  LambdaSpec lambda;
};

inline RunConfig preset(const std::string& name) {
  RunConfig cfg;
  cfg.name = name;
  if (name == "quarter-cantor") {
    cfg.system.dim = 1;
    cfg.system.R = IntMat(1, 1);
    cfg.system.R(0, 0) = 4;
    cfg.system.digits = {{0}, {2}};
    cfg.L = {{0}, {1}};
    cfg.r0 = 0.5;
  } else if (name == "cantor3") {
    cfg.system.dim = 1;
    cfg.system.R = IntMat(1, 1);
    cfg.system.R(0, 0) = 3;
    cfg.system.digits = {{0}, {2}};
    cfg.L = {{0}, {1}};
  } else if (name == "remark18") {
    cfg.system.dim = 2;
    cfg.system.R = IntMat(2, 2);
    cfg.system.R(0, 0) = 2;
    cfg.system.R(0, 1) = 0;
    cfg.system.R(1, 0) = 1;
    cfg.system.R(1, 1) = 2;
    cfg.system.digits = {{0, 0}, {1, 0}, {0, 3}, {1, 3}};
    cfg.L = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    cfg.depth = 3;
  } else if (name == "cantor3-lacunary") {
    cfg.system.dim = 1;
    cfg.system.R = IntMat(1, 1);
    cfg.system.R(0, 0) = 3;
    cfg.system.digits = {{0}, {2}};
    cfg.lambda.kind = LambdaSpec::Kind::lacunary;
    cfg.lambda.depth = 10;
  } else {
    throw UnknownPresetError("unknown preset '" + name + "'");
  }
  return cfg;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

inline std::vector<std::vector<std::int64_t>> parse_digit_list(const nlohmann::json& j,
                                                               const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of integer vectors");
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError(where + " entries must be arrays");
    std::vector<std::int64_t> v;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw ConfigError(where + " entries must be integers");
      v.push_back(x.get<std::int64_t>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  detail::reject_unknown_keys(j,
                              {"preset", "dim", "R", "B", "L", "r0", "n_max", "depth", "seed",
                               "tail_tolerance", "word_cap", "z_range", "grid_step", "lambda"},
                              "config");
  RunConfig cfg;
  if (j.contains("preset")) cfg = preset(j.at("preset").get<std::string>());
  if (j.contains("dim")) cfg.system.dim = j.at("dim").get<std::size_t>();
  if (j.contains("R")) {
    const auto rows = detail::parse_digit_list(j.at("R"), "R");
    const std::size_t d = rows.size();
    IntMat m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
      if (rows[i].size() != d) throw ConfigError("R must be square");
      for (std::size_t k = 0; k < d; ++k) m(i, k) = rows[i][k];
    }
    cfg.system.R = m;
    if (!j.contains("dim")) cfg.system.dim = d;
  }
  if (j.contains("B")) cfg.system.digits = detail::parse_digit_list(j.at("B"), "B");
  if (j.contains("L")) cfg.L = detail::parse_digit_list(j.at("L"), "L");
  if (j.contains("r0")) cfg.r0 = j.at("r0").get<double>();
  if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<std::size_t>();
  if (j.contains("depth")) cfg.depth = j.at("depth").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tail_tolerance")) cfg.tail_tolerance = j.at("tail_tolerance").get<double>();
  if (j.contains("word_cap")) cfg.word_cap = j.at("word_cap").get<std::uint64_t>();
  if (j.contains("z_range")) cfg.z_range = j.at("z_range").get<std::int64_t>();
  if (j.contains("grid_step")) cfg.grid_step = j.at("grid_step").get<double>();
  if (j.contains("lambda")) {
    const nlohmann::json& lj = j.at("lambda");
    detail::reject_unknown_keys(lj, {"kind", "depth", "path", "points"}, "lambda");
    const std::string kind = lj.at("kind").get<std::string>();
    if (kind == "from-cycles")
      cfg.lambda.kind = LambdaSpec::Kind::from_cycles;
    else if (kind == "lacunary")
      cfg.lambda.kind = LambdaSpec::Kind::lacunary;
    else if (kind == "file")
      cfg.lambda.kind = LambdaSpec::Kind::file;
    else if (kind == "points")
      cfg.lambda.kind = LambdaSpec::Kind::points;
    else
      throw ConfigError("unknown lambda kind '" + kind + "'");
    if (lj.contains("depth")) cfg.lambda.depth = lj.at("depth").get<std::size_t>();
    if (lj.contains("path")) cfg.lambda.path = lj.at("path").get<std::string>();
    if (lj.contains("points")) {
      for (const auto& row : lj.at("points")) {
        RatPoint p;
        for (const auto& x : row) p.c.push_back(parse_rat(x.get<std::string>()));
        cfg.lambda.points.push_back(std::move(p));
      }
    }
  }
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  return parse_config(j);
}

inline HadamardPair pair_of(const RunConfig& cfg) {
  if (cfg.L.empty()) throw ConfigError("this run needs dual digits L");
  HadamardPair pair{cfg.system, cfg.L};
  validate_pair(pair);
  return pair;
}

inline SpectrumSet resolve_lambda(const RunConfig& cfg) {
  switch (cfg.lambda.kind) {
    case LambdaSpec::Kind::from_cycles: {
      const HadamardPair pair = pair_of(cfg);
      const std::size_t depth = cfg.lambda.depth ? cfg.lambda.depth : cfg.depth;
      return spectrum_from_cycles(pair, find_extreme_cycles(pair), depth, cfg.word_cap);
    }
    case LambdaSpec::Kind::lacunary: {
      if (cfg.system.dim != 1)
        throw ConfigError("lacunary frequency sets are defined in one dimension");
      validate(cfg.system);
      const std::size_t depth = cfg.lambda.depth ? cfg.lambda.depth : 10;
      const Rat r(cfg.system.R(0, 0));
      std::vector<RatPoint> pts{rat_point_zero(1)};
      Rat pow(1);
      for (std::size_t k = 0; k < depth; ++k) {
        if (pts.size() * 2 > cfg.word_cap)
          throw SizeOverflowError("lacunary frequency set exceeds word cap");
        const std::size_t m = pts.size();
        for (std::size_t i = 0; i < m; ++i) {
          RatPoint p = pts[i];
          p.c[0] += pow;
          pts.push_back(std::move(p));
        }
        pow *= r;
      }
      SpectrumSet out = make_spectrum(1, std::move(pts), Provenance::explicit_set, depth);
      out.note = "subset sums of 1, R, ..., R^" + std::to_string(depth - 1);
      return out;
    }
    case LambdaSpec::Kind::file: {
      std::ifstream in(cfg.lambda.path);
      if (!in) throw ConfigError("cannot open spectrum file '" + cfg.lambda.path + "'");
      SpectrumSet s = read_spectrum(in);
      if (s.dim != cfg.system.dim)
        throw SizeMismatchError("spectrum file dimension does not match the system");
      return s;
    }
    case LambdaSpec::Kind::points:
      return make_spectrum(cfg.system.dim, cfg.lambda.points);
  }
  throw ConfigError("unreachable lambda kind");
}

}  // namespace fracspec
