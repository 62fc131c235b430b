#include "packbound/bundle_io.hpp"

#include "packbound/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace packbound {

using nlohmann::json;

std::string bundle_to_json(const SolutionBundle& sol, const ModelRef& ref, const RunMetadata& meta) {
  PrecisionScope scope(sol.precision);
  json j;
  j["format"] = "packbound-solution";
  j["version"] = 1;
  j["model"] = {{"solid", ref.solid}, {"d", ref.d}, {"spacing", ref.spacing}};
  j["precision"] = sol.precision;
  j["backend"] = sol.backend;
  j["status"] = sol.status;
  j["iterations"] = sol.iterations;
  j["primal_objective"] = real_str(sol.primal_objective);
  j["dual_objective"] = real_str(sol.dual_objective);
  j["primal_infeasibility"] = real_str(sol.primal_infeasibility);
  j["dual_infeasibility"] = real_str(sol.dual_infeasibility);
  json blocks = json::array();
  for (const auto& m : sol.blocks) {
    const bool diagonal = m.cols() == 1 && m.rows() > 1;
    json rows = json::array();
    if (diagonal) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(real_str(m(i, 0)));
    } else {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(real_str(m(i, k)));
        rows.push_back(row);
      }
    }
    blocks.push_back({{"size", m.rows()}, {"diagonal", diagonal}, {"entries", rows}});
  }
  j["blocks"] = blocks;
  j["metadata"] = {{"created", meta.created}, {"seed", meta.seed}};
  return j.dump(1) + "\n";
}

LoadedBundle bundle_from_json(const std::string& text) {
  LoadedBundle out;
  try {
    json j = json::parse(text);
    if (j.value("format", "") != "packbound-solution") throw IoFailure("not a packbound solution file");
    const auto& m = j.at("model");
    out.model.solid = m.at("solid").get<std::string>();
    out.model.d = m.at("d").get<int>();
    out.model.spacing = m.value("spacing", "1/50");
    auto& sol = out.solution;
    sol.precision = j.at("precision").get<unsigned>();
    PrecisionScope scope(sol.precision);
    sol.backend = j.value("backend", "");
    sol.status = j.value("status", "");
    sol.iterations = j.value("iterations", 0);
    sol.primal_objective = parse_real(j.at("primal_objective").get<std::string>());
    sol.dual_objective = parse_real(j.at("dual_objective").get<std::string>());
    sol.primal_infeasibility = parse_real(j.at("primal_infeasibility").get<std::string>());
    sol.dual_infeasibility = parse_real(j.at("dual_infeasibility").get<std::string>());
    for (const auto& b : j.at("blocks")) {
      const int n = b.at("size").get<int>();
      const auto& e = b.at("entries");
      if (e.size() != static_cast<std::size_t>(n)) throw IoFailure("block size mismatch");
      if (b.at("diagonal").get<bool>()) {
        RealMatrix v(n, 1);
        for (int i = 0; i < n; ++i) v(i, 0) = parse_real(e[i].get<std::string>());
        sol.blocks.push_back(v);
      } else {
        RealMatrix a(n, n);
        for (int i = 0; i < n; ++i) {
          if (e[i].size() != static_cast<std::size_t>(n)) throw IoFailure("block row size mismatch");
          for (int k = 0; k < n; ++k) a(i, k) = parse_real(e[i][k].get<std::string>());
        }
        sol.blocks.push_back(a);
      }
    }
    if (j.contains("metadata")) {
      out.metadata.created = j["metadata"].value("created", "");
      out.metadata.seed = j["metadata"].value("seed", std::uint64_t{0});
    }
  } catch (const json::exception& e) {
    throw IoFailure(std::string("solution file: ") + e.what());
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure("cannot write " + path);
  f << text;
  if (!f) throw IoFailure("write failed: " + path);
}

LoadedBundle read_bundle(const std::string& path) { return bundle_from_json(read_text_file(path)); }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace packbound
