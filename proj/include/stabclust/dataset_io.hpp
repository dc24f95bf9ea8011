//
// Copyright 2026 The stabclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Dataset files.
//
// CSV: first line is a comment header "# dim=<d> radius=<r>", then one point
// per row with d comma- or whitespace-separated columns. Blank lines and
// further '#' lines are skipped.
//
// JSON: {"dim": d, "radius": r, "points": [[...], ...]}.

#ifndef STABCLUST_DATASET_IO_HPP_
#define STABCLUST_DATASET_IO_HPP_

#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"

namespace stabclust {

// Shortest round-trip decimal form of a double.
inline std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace internal {

inline std::optional<double> HeaderValue(const std::string& line, const std::string& key) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) return std::nullopt;
  try {
    return std::stod(line.substr(pos + key.size() + 1));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace internal

inline Dataset ReadDatasetCsv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Dataset> data;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!data) {
        const auto dim = internal::HeaderValue(line, "dim");
        const auto radius = internal::HeaderValue(line, "radius");
        Require(dim && radius, ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": header must read '# dim=<d> radius=<r>'");
        Require(*dim >= 1 && *dim == static_cast<double>(static_cast<std::size_t>(*dim)),
                ErrorCode::kParse, "line " + std::to_string(line_no) + ": bad dim");
        data.emplace(static_cast<std::size_t>(*dim), *radius);
      }
      continue;
    }
    Require(data.has_value(), ErrorCode::kParse,
            "line " + std::to_string(line_no) + ": data row before the '# dim=.. radius=..' header");
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream row(line);
    Point p;
    std::string token;
    while (row >> token) {
      try {
        std::size_t used = 0;
        p.push_back(std::stod(token, &used));
        Require(used == token.size(), ErrorCode::kParse, "trailing characters");
      } catch (const std::exception&) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
      }
    }
    try {
      data->Add(p);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  Require(data.has_value(), ErrorCode::kParse, "missing '# dim=.. radius=..' header");
  return std::move(*data);
}

inline void WriteDatasetCsv(const Dataset& data, std::ostream& out) {
  out << "# dim=" << data.dim() << " radius=" << FormatDouble(data.radius()) << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d) out << ',';
      out << FormatDouble(p[d]);
    }
    out << '\n';
  }
}

inline nlohmann::json DatasetToJson(const Dataset& data) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    points.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"dim", data.dim()}, {"radius", data.radius()}, {"points", std::move(points)}};
}

inline Dataset DatasetFromJson(const nlohmann::json& j) {
  try {
    Dataset data(j.at("dim").get<std::size_t>(), j.at("radius").get<double>());
    for (const auto& row : j.at("points")) data.Add(row.get<std::vector<double>>());
    return data;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("dataset json: ") + e.what());
  }
}

inline bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Dispatches on the extension: ".json" is JSON, anything else is CSV.
inline Dataset LoadDataset(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kParse, "cannot open " + path);
  if (EndsWith(path, ".json")) {
    try {
      return DatasetFromJson(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, path + ": " + e.what());
    }
  }
  return ReadDatasetCsv(in);
}

inline void SaveDataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  Require(out.good(), ErrorCode::kParse, "cannot write " + path);
  if (EndsWith(path, ".json")) {
    out << DatasetToJson(data).dump() << '\n';
  } else {
    WriteDatasetCsv(data, out);
  }
}

inline nlohmann::json CenterSetToJson(const CenterSet& c) {
  nlohmann::json j;
  j["k"] = c.k();
  j["provenance"] = c.provenance();
  j["centers"] = c.empty() ? nlohmann::json::array() : nlohmann::json(c.centers());
  return j;
}

// 64-bit FNV-1a over the shortest round-trip text of every coordinate,
// so the hash is independent of in-memory layout.
inline std::uint64_t DatasetHash(const Dataset& data) {
  std::uint64_t h = Fnv1a64("dim=" + std::to_string(data.dim()) + ";r=" + FormatDouble(data.radius()));
  for (double v : data.coords()) h = Fnv1a64(FormatDouble(v) + ",", h);
  return h;
}

}  // namespace stabclust

#endif  // STABCLUST_DATASET_IO_HPP_
