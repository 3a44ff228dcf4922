// Copyright 2026 the tunnelplan authors.
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

#include "tunnelplan/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tunnelplan {

namespace {

// RLE of the x-fastest occupancy stream as (count, value) pairs.
std::vector<std::pair<std::size_t, int>> runLengthEncode(const std::vector<std::uint8_t>& occ) {
  std::vector<std::pair<std::size_t, int>> runs;
  std::size_t i = 0;
  while (i < occ.size()) {
    const int value = occ[i] ? 1 : 0;
    std::size_t j = i;
    while (j < occ.size() && (occ[j] ? 1 : 0) == value) ++j;
    runs.emplace_back(j - i, value);
    i = j;
  }
  return runs;
}

}  // namespace

OccupancyGrid::OccupancyGrid(const Vec3& origin, double resolution, const Vec3i& dims)
    : origin_(origin), resolution_(resolution), dims_(dims) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("OccupancyGrid: resolution must be > 0");
  }
  if (dims.x() < 1 || dims.y() < 1 || dims.z() < 1) {
    throw std::invalid_argument("OccupancyGrid: dims must all be >= 1");
  }
  occ_.assign(static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
                  static_cast<std::size_t>(dims.z()),
              0);
}

std::size_t OccupancyGrid::occupiedCount() const {
  return static_cast<std::size_t>(std::count_if(occ_.begin(), occ_.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

void OccupancyGrid::saveVxg(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) {
    throw std::runtime_error("cannot open map file for writing: " + file.string());
  }
  out.precision(17);
  out << "vxg1\n";
  out << "resolution " << resolution_ << "\n";
  out << "origin " << origin_.x() << " " << origin_.y() << " " << origin_.z() << "\n";
  out << "dims " << dims_.x() << " " << dims_.y() << " " << dims_.z() << "\n";
  const auto runs = runLengthEncode(occ_);
  int per_line = 0;
  for (const auto& [count, value] : runs) {
    out << count << " " << value;
    if (++per_line == 16) {
      out << "\n";
      per_line = 0;
    } else {
      out << " ";
    }
  }
  if (per_line != 0) out << "\n";
  if (!out) {
    throw std::runtime_error("write failed: " + file.string());
  }
}

OccupancyGrid OccupancyGrid::loadVxg(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open map file: " + file.string());
  }
  std::string magic;
  in >> magic;
  if (magic != "vxg1") {
    throw std::runtime_error("not a VXG1 map file: " + file.string());
  }
  std::string key;
  double resolution = 0.0;
  Vec3 origin = Vec3::Zero();
  Vec3i dims = Vec3i::Zero();
  for (int i = 0; i < 3; ++i) {
    in >> key;
    if (key == "resolution") {
      in >> resolution;
    } else if (key == "origin") {
      in >> origin.x() >> origin.y() >> origin.z();
    } else if (key == "dims") {
      in >> dims.x() >> dims.y() >> dims.z();
    } else {
      throw std::runtime_error("unexpected VXG1 header key '" + key + "'");
    }
  }
  if (!in) {
    throw std::runtime_error("truncated VXG1 header: " + file.string());
  }
  OccupancyGrid grid(origin, resolution, dims);
  std::size_t filled = 0;
  std::size_t count = 0;
  int value = 0;
  while (filled < grid.occ_.size() && (in >> count >> value)) {
    if (filled + count > grid.occ_.size()) {
      throw std::runtime_error("VXG1 run overflows grid: " + file.string());
    }
    std::fill_n(grid.occ_.begin() + static_cast<std::ptrdiff_t>(filled), count,
                static_cast<std::uint8_t>(value ? 1 : 0));
    filled += count;
  }
  if (filled != grid.occ_.size()) {
    throw std::runtime_error("VXG1 occupancy data incomplete: " + file.string());
  }
  return grid;
}

std::string OccupancyGrid::toJson() const {
  nlohmann::json j;
  j["format"] = "vxg1";
  j["resolution"] = resolution_;
  j["origin"] = {origin_.x(), origin_.y(), origin_.z()};
  j["dims"] = {dims_.x(), dims_.y(), dims_.z()};
  nlohmann::json rle = nlohmann::json::array();
  for (const auto& [count, value] : runLengthEncode(occ_)) {
    rle.push_back({count, value});
  }
  j["rle"] = std::move(rle);
  return j.dump(2);
}

OccupancyGrid OccupancyGrid::fromJson(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<std::string>() != "vxg1") {
    throw std::runtime_error("unexpected map JSON format tag");
  }
  const auto o = j.at("origin");
  const auto d = j.at("dims");
  OccupancyGrid grid(Vec3(o.at(0), o.at(1), o.at(2)), j.at("resolution").get<double>(),
                     Vec3i(d.at(0), d.at(1), d.at(2)));
  std::size_t filled = 0;
  for (const auto& run : j.at("rle")) {
    const auto count = run.at(0).get<std::size_t>();
    const auto value = run.at(1).get<int>();
    if (filled + count > grid.occ_.size()) {
      throw std::runtime_error("map JSON rle overflows grid");
    }
    std::fill_n(grid.occ_.begin() + static_cast<std::ptrdiff_t>(filled), count,
                static_cast<std::uint8_t>(value ? 1 : 0));
    filled += count;
  }
  if (filled != grid.occ_.size()) {
    throw std::runtime_error("map JSON occupancy data incomplete");
  }
  return grid;
}

}  // namespace tunnelplan
