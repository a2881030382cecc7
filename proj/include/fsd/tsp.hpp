#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsd/graph.hpp"
#include "fsd/triads.hpp"
#include "fsd/util.hpp"

namespace fsd {

// Standard deviations below this are clamped so z-scores stay finite while
// preserving the sign and ordering of deviations.
inline constexpr double kStdFloor = 1e-9;

// Per-class mean and population standard deviation of the 13 connected triad
// counts over a sample of legitimate users' ego networks.
struct TriadBaseline {
  std::array<double, kFeatureClassCount> mean{};
  std::array<double, kFeatureClassCount> stddev{};
  std::size_t sample_size = 0;
  std::optional<std::size_t> ego_cap;  // cap used when censusing the sample
};

inline TriadBaseline compute_baseline(std::span<const TriadCensus> censuses,
                                      std::optional<std::size_t> ego_cap = std::nullopt) {
  if (censuses.size() < 2)
    throw std::invalid_argument("baseline requires at least 2 censuses");
  TriadBaseline b;
  b.sample_size = censuses.size();
  b.ego_cap = ego_cap;
  const double m = static_cast<double>(censuses.size());
  for (const auto& c : censuses) {
    auto f = c.feature_counts();
    for (std::size_t i = 0; i < kFeatureClassCount; ++i) b.mean[i] += f[i];
  }
  for (std::size_t i = 0; i < kFeatureClassCount; ++i) b.mean[i] /= m;
  for (const auto& c : censuses) {
    auto f = c.feature_counts();
    for (std::size_t i = 0; i < kFeatureClassCount; ++i) {
      const double d = f[i] - b.mean[i];
      b.stddev[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < kFeatureClassCount; ++i) {
    b.stddev[i] = std::sqrt(b.stddev[i] / m);
    if (b.stddev[i] < kStdFloor) b.stddev[i] = kStdFloor;
  }
  return b;
}

// Per-class z-scores of a census against the baseline. The same formula
// serves spammers and legitimate users; only the census differs.
inline std::array<double, kFeatureClassCount> zscores(const TriadCensus& census,
                                                      const TriadBaseline& baseline) {
  std::array<double, kFeatureClassCount> z{};
  auto f = census.feature_counts();
  for (std::size_t i = 0; i < kFeatureClassCount; ++i)
    z[i] = (f[i] - baseline.mean[i]) / baseline.stddev[i];
  return z;
}

// Unit-normalizes a z-score vector. The all-zero vector maps to all zeros: a
// census exactly at the baseline mean carries no triad signal.
inline std::array<double, kFeatureClassCount> normalize_tsp(
    const std::array<double, kFeatureClassCount>& z) {
  double sq = 0;
  for (double v : z) sq += v * v;
  std::array<double, kFeatureClassCount> tsp{};
  if (sq == 0.0) return tsp;
  const double norm = std::sqrt(sq);
  for (std::size_t i = 0; i < kFeatureClassCount; ++i) tsp[i] = z[i] / norm;
  return tsp;
}

struct TspVector {
  std::array<double, kFeatureClassCount> z{};
  std::array<double, kFeatureClassCount> tsp{};
};

inline TspVector tsp_vector(const TriadCensus& census, const TriadBaseline& baseline) {
  TspVector v;
  v.z = zscores(census, baseline);
  v.tsp = normalize_tsp(v.z);
  return v;
}

// TSP fragment of a user's feature row: 13 normalized z-scores in canonical
// class order, optionally followed by the user's global in/out degrees.
inline std::vector<double> tsp_features(const DirectedGraph& g, NodeId u,
                                        const TriadBaseline& baseline, bool include_degrees,
                                        std::optional<std::size_t> cap = std::nullopt,
                                        std::uint64_t cap_seed = 0) {
  g.require_node(u);
  EgoNetwork ego = ego_network(g, u, cap, cap_seed);
  TspVector v = tsp_vector(census(ego.graph), baseline);
  std::vector<double> out(v.tsp.begin(), v.tsp.end());
  if (include_degrees) {
    out.push_back(static_cast<double>(g.indegree(u)));
    out.push_back(static_cast<double>(g.outdegree(u)));
  }
  return out;
}

inline void save_baseline(const std::string& path, const TriadBaseline& b) {
  auto out = open_output(path);
  out << "# triad baseline\n";
  out << "sample_size: " << b.sample_size << "\n";
  out << "std_kind: population\n";
  out << "ego_cap: " << (b.ego_cap ? std::to_string(*b.ego_cap) : std::string("none")) << "\n";
  out << "classes: " << kFeatureClassCount << "\n";
  for (std::size_t i = 0; i < kFeatureClassCount; ++i)
    out << kTriadNames[i + kFeatureClassOffset] << ' ' << fmt_double(b.mean[i]) << ' '
        << fmt_double(b.stddev[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline TriadBaseline load_baseline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open baseline: " + path);
  TriadBaseline b;
  std::string line;
  std::size_t classes_seen = 0;
  while (std::getline(in, line)) {
    std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (sv.starts_with("sample_size:")) {
      b.sample_size = require_u64(sv.substr(12), "sample_size");
    } else if (sv.starts_with("std_kind:") || sv.starts_with("classes:")) {
      continue;
    } else if (sv.starts_with("ego_cap:")) {
      auto val = trim(sv.substr(8));
      if (val != "none") b.ego_cap = require_u64(val, "ego_cap");
    } else {
      auto parts = split(sv, ' ');
      std::vector<std::string_view> tok;
      for (auto p : parts)
        if (!trim(p).empty()) tok.push_back(trim(p));
      if (tok.size() != 3) throw std::runtime_error("baseline: bad record: '" + std::string(sv) + "'");
      int cls = triad_class_index(tok[0]);
      if (cls < static_cast<int>(kFeatureClassOffset))
        throw std::runtime_error("baseline: unknown class: '" + std::string(tok[0]) + "'");
      std::size_t i = static_cast<std::size_t>(cls) - kFeatureClassOffset;
      b.mean[i] = require_double(tok[1], "mean");
      b.stddev[i] = require_double(tok[2], "stddev");
      ++classes_seen;
    }
  }
  if (classes_seen != kFeatureClassCount)
    throw std::runtime_error("baseline: expected " + std::to_string(kFeatureClassCount) +
                             " class records, got " + std::to_string(classes_seen));
  if (b.sample_size < 2) throw std::runtime_error("baseline: sample_size missing or < 2");
  return b;
}

}  // namespace fsd
