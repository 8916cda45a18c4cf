#include "spontaneous/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spontaneous/gamma_select.hpp"

namespace spont::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw InvalidInput("line " + std::to_string(line) + ": '" + cell + "' is not a number");
  }
  return v;
}

Vector vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Matrix matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw InvalidInput(std::string(what) + " must be a nested array");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidInput(std::string(what) + " rows differ in length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// NaN and infinities have no JSON spelling; write null instead.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> grid_from(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    return GammaGrid::log_spaced(j.at("lo").get<double>(), j.at("hi").get<double>(),
                                 j.at("n").get<int>())
        .values();
  }
  throw InvalidInput("a gamma grid is an array or {lo, hi, n}");
}

MixtureSpec mixture_from(const json& j) {
  MixtureSpec g;
  for (const auto& c : j.at("components")) {
    g.components.emplace_back(vector_from(c.at("mu"), "mu"), matrix_from(c.at("sigma"), "sigma"));
  }
  g.proportions = j.at("proportions").get<std::vector<double>>();
  g.validate();
  return g;
}

template <class F>
auto guard_json(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

DataSet parse_csv(std::istream& in, bool header) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (first && header) {
      names = std::move(cells);
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, lineno));
    const std::size_t width = names.empty() ? (rows.empty() ? row.size() : rows[0].size()) : names.size();
    if (row.size() != width) {
      throw InvalidInput("line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                         " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("CSV input has no data rows");
  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return DataSet(std::move(x), std::move(names));
}

DataSet read_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_csv(in, header);
}

std::vector<std::string> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  if (out.empty()) throw InvalidInput("label file is empty");
  return out;
}

json model_to_json(const ClusterModel& model, const Partition* partition) {
  json j;
  j["gamma_mu"] = model.gamma_mu;
  j["gamma_sigma"] = model.gamma_sigma;
  j["components"] = json::array();
  for (const auto& c : model.components) {
    j["components"].push_back({{"mu", to_json(c.mu())}, {"sigma", to_json(c.sigma())}});
  }
  j["proportions"] = model.proportions;
  if (partition != nullptr) j["labels"] = partition->labels;
  return j;
}

ClusterModel model_from_json(const json& j, std::vector<int>* labels) {
  return guard_json([&] {
    ClusterModel m;
    m.gamma_mu = j.at("gamma_mu").get<double>();
    m.gamma_sigma = j.at("gamma_sigma").get<double>();
    for (const auto& c : j.at("components")) {
      m.components.emplace_back(vector_from(c.at("mu"), "mu"), matrix_from(c.at("sigma"), "sigma"));
    }
    if (j.contains("proportions")) m.proportions = j["proportions"].get<std::vector<double>>();
    if (labels != nullptr && j.contains("labels")) *labels = j["labels"].get<std::vector<int>>();
    m.validate();
    return m;
  });
}

ExperimentConfig config_from_json(const json& j) {
  return guard_json([&] {
    ExperimentConfig cfg;
    if (j.contains("preset")) {
      const auto preset = j["preset"].get<std::string>();
      if (preset == "five_cluster") {
        cfg = five_cluster_design();
      } else if (preset == "two_cluster") {
        cfg = two_cluster_design();
      } else {
        throw InvalidInput("unknown preset '" + preset + "'");
      }
    }
    if (j.contains("mixture")) cfg.mixture = mixture_from(j["mixture"]);
    if (j.contains("n")) cfg.n = j["n"].get<Eigen::Index>();
    if (j.contains("runs")) cfg.runs = j["runs"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("grid")) cfg.grid = grid_from(j["grid"]);
    if (j.contains("grid_mu")) cfg.grid_mu = grid_from(j["grid_mu"]);
    if (j.contains("grid_sigma")) cfg.grid_sigma = grid_from(j["grid_sigma"]);
    if (j.contains("covariance")) {
      const auto mode = j["covariance"].get<std::string>();
      if (mode == "fitted") {
        cfg.covariance = CovarianceMode::fitted;
      } else if (mode == "identity") {
        cfg.covariance = CovarianceMode::identity;
      } else {
        throw InvalidInput("covariance must be 'fitted' or 'identity'");
      }
    }
    if (j.contains("k_prior")) cfg.k_prior = j["k_prior"].get<int>();
    if (j.contains("k_max")) cfg.k_max = j["k_max"].get<int>();
    if (j.contains("kmeans_restarts")) cfg.kmeans_restarts = j["kmeans_restarts"].get<int>();
    if (j.contains("gap_refs")) cfg.gap_refs = j["gap_refs"].get<int>();
    if (j.contains("gap_rule")) {
      const auto rule = j["gap_rule"].get<std::string>();
      if (rule == "argmax") {
        cfg.gap_rule = GapRule::argmax;
      } else if (rule == "first_se") {
        cfg.gap_rule = GapRule::first_se;
      } else {
        throw InvalidInput("gap_rule must be 'argmax' or 'first_se'");
      }
    }
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("restart")) {
      const auto& r = j["restart"];
      if (r.contains("m")) cfg.restart.m = r["m"].get<int>();
      if (r.contains("max_rounds")) cfg.restart.max_rounds = r["max_rounds"].get<int>();
      if (r.contains("dedup_radius")) cfg.restart.dedup_radius = r["dedup_radius"].get<double>();
    }
    if (j.contains("iteration")) {
      const auto& it = j["iteration"];
      if (it.contains("epsilon")) cfg.iteration.epsilon = it["epsilon"].get<double>();
      if (it.contains("max_iter")) cfg.iteration.max_iter = it["max_iter"].get<int>();
      if (it.contains("ridge")) cfg.iteration.ridge = it["ridge"].get<double>();
    }
    if (cfg.mixture.components.empty()) throw InvalidInput("config needs a mixture or a preset");
    cfg.validate();
    return cfg;
  });
}

json outcome_to_json(const RunOutcome& o) {
  json j{{"run", o.run}, {"method", method_name(o.method)}, {"k", o.k}};
  if (o.error.empty()) {
    j["bhi"] = number(o.bhi);
  } else {
    j["error"] = o.error;
  }
  if (o.gamma_mu) j["gamma_mu"] = *o.gamma_mu;
  if (o.gamma_sigma) j["gamma_sigma"] = *o.gamma_sigma;
  if (!o.dm.empty()) {
    j["dm"] = o.dm;
    j["dv"] = o.dv;
  }
  return j;
}

json report_to_json(const ExperimentReport& report) {
  json j{{"true_k", report.true_k}, {"runs", report.runs}, {"methods", json::array()}};
  for (const auto& s : report.methods) {
    json freq = json::object();
    for (const auto& [k, count] : s.frequency) freq[std::to_string(k)] = count;
    json dm = json::array(), dv = json::array();
    for (double v : s.mean_dm) dm.push_back(number(v));
    for (double v : s.mean_dv) dv.push_back(number(v));
    j["methods"].push_back({{"method", method_name(s.method)},
                            {"frequency", freq},
                            {"mean_bhi", number(s.mean_bhi)},
                            {"correct_runs", s.correct_runs},
                            {"mean_dm", dm},
                            {"mean_dv", dv}});
  }
  return j;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream summary(dir / "report.json");
  std::ofstream runs(dir / "runs.jsonl");
  if (!summary || !runs) throw InvalidInput("cannot write into " + dir.string());
  summary << report_to_json(report).dump(2) << '\n';
  for (const auto& o : report.outcomes) runs << outcome_to_json(o).dump() << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace spont::io
