// Command-line front end: clustering, gamma selection, bimodality checks,
// simulation experiments, evaluation and the k-means baseline.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "spontaneous/bimodality.hpp"
#include "spontaneous/clustering.hpp"
#include "spontaneous/evaluation.hpp"
#include "spontaneous/gamma_objective.hpp"
#include "spontaneous/gamma_select.hpp"
#include "spontaneous/io.hpp"
#include "spontaneous/simulate.hpp"

namespace {

using namespace spont;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("'" + item + "' is not a number");
    }
  }
  return out;
}

GammaGrid parse_grid(const std::string& spec) {
  const auto v = parse_list(spec, ':');
  if (v.size() != 3 || v[2] != std::floor(v[2])) throw InvalidInput("grid must be lo:hi:n");
  return GammaGrid::log_spaced(v[0], v[1], static_cast<int>(v[2]));
}

std::string ch_text(const ChIndex& ch) {
  if (ch.perfect_separation) return "PerfectSeparation";
  std::ostringstream os;
  os << std::setprecision(10) << ch.value;
  return os.str();
}

void write_json(const io::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Two-column loss profile. For p = 1 the loss is traced over the padded data
// range; otherwise along the line through the first two centers (or through
// the only center parallel to the first axis).
void write_profile(const DataSet& data, const ClusterModel& model, GammaIndex gamma,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << std::setprecision(12);
  const int steps = 400;
  const auto p = data.p();
  Vector origin, dir;
  double lo = 0.0, hi = 1.0;
  if (p == 1) {
    const double a = data.x().minCoeff(), b = data.x().maxCoeff();
    const double pad = 0.1 * (b - a) + 1e-9;
    origin = Vector::Zero(1);
    dir = Vector::Ones(1);
    lo = a - pad;
    hi = b + pad;
  } else {
    origin = model.components[0].mu();
    if (model.k() >= 2) {
      dir = model.components[1].mu() - origin;
    } else {
      dir = Vector::Unit(p, 0) * max_range(data);
    }
    lo = -0.5;
    hi = 1.5;
  }
  for (int s = 0; s <= steps; ++s) {
    const double t = lo + (hi - lo) * s / steps;
    out << t << ' ' << loss_mu(data, origin + t * dir, gamma).value << '\n';
  }
}

struct DataArgs {
  std::string input;
  bool no_header = false;

  void add(CLI::App* app) {
    app->add_option("--input", input, "CSV file, one observation per row")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_flag("--no-header", no_header, "the first CSV row is data");
  }
  DataSet load() const { return io::read_csv(input, !no_header); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous clustering via local minima of the gamma-loss"};
  app.require_subcommand(1);

  // cluster
  auto* cl = app.add_subcommand("cluster", "detect centers, fit covariances and assign");
  DataArgs cl_data;
  cl_data.add(cl);
  double cl_gamma = 0.0;
  std::optional<double> cl_gamma_sigma;
  bool cl_identity = false;
  std::string cl_out, cl_profile;
  RestartConfig cl_rcfg;
  cl->add_option("--gamma", cl_gamma, "power index for the centers")->required();
  cl->add_option("--gamma-sigma", cl_gamma_sigma, "power index for the covariances");
  cl->add_flag("--fixed-identity", cl_identity, "keep every covariance at the identity");
  cl->add_option("--out", cl_out, "model JSON output")->required();
  cl->add_option("--profile", cl_profile, "write a two-column loss profile here");
  cl->add_option("--restarts", cl_rcfg.m, "initial values per round");
  cl->add_option("--seed", cl_rcfg.seed, "random seed");

  // select-gamma
  auto* sg = app.add_subcommand("select-gamma", "choose the power index");
  DataArgs sg_data;
  sg_data.add(sg);
  std::string sg_method = "aic", sg_grid = "0.05:3:20", sg_grid_sigma;
  int sg_k_prior = 2;
  bool sg_identity = false;
  RestartConfig sg_rcfg;
  sg->add_option("--method", sg_method)->check(CLI::IsMember({"range", "aic"}));
  sg->add_option("--k-prior", sg_k_prior, "prior cluster count for the range rule");
  sg->add_option("--grid", sg_grid, "log-spaced grid lo:hi:n");
  sg->add_option("--grid-sigma", sg_grid_sigma, "separate covariance grid lo:hi:n");
  sg->add_flag("--fixed-identity", sg_identity, "score identity-covariance models");
  sg->add_option("--seed", sg_rcfg.seed, "random seed");

  // check-bimodality
  auto* cb = app.add_subcommand("check-bimodality", "two-minima conditions for two components");
  std::string cb_nu;
  TwoComponentSpec cb_spec;
  bool cb_oracle = false;
  int cb_grid = 4000;
  cb->add_option("--nu", cb_nu, "half mean difference, comma separated")->required();
  cb->add_option("--sigma2", cb_spec.sigma2)->required();
  cb->add_option("--tau1", cb_spec.tau1)->required();
  cb->add_option("--gamma", cb_spec.gamma)->required();
  cb->add_flag("--oracle", cb_oracle, "also count modes on a grid");
  cb->add_option("--oracle-grid", cb_grid, "grid size for --oracle");

  // simulate
  auto* sm = app.add_subcommand("simulate", "run a seeded experiment");
  std::string sm_config, sm_out;
  sm->add_option("--config", sm_config)->required()->check(CLI::ExistingFile);
  sm->add_option("--out", sm_out, "output directory")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "BHI and CH against true labels");
  DataArgs ev_data;
  ev_data.add(ev);
  std::string ev_labels, ev_model;
  ev->add_option("--labels", ev_labels)->required()->check(CLI::ExistingFile);
  ev->add_option("--model", ev_model)->required()->check(CLI::ExistingFile);

  // kmeans
  auto* km = app.add_subcommand("kmeans", "k-means baseline");
  DataArgs km_data;
  km_data.add(km);
  int km_k = 0, km_k_max = 10, km_restarts = 10, km_refs = 20;
  std::string km_select, km_out, km_gap_rule = "first_se";
  std::uint64_t km_seed = 0;
  auto* k_opt = km->add_option("--k", km_k);
  auto* sel_opt = km->add_option("--select", km_select)->check(CLI::IsMember({"ch", "gap"}));
  k_opt->excludes(sel_opt);
  km->add_option("--k-max", km_k_max);
  km->add_option("--restarts", km_restarts);
  km->add_option("--gap-refs", km_refs);
  km->add_option("--gap-rule", km_gap_rule, "argmax or first_se (the one-SE rule)")
      ->check(CLI::IsMember({"argmax", "first_se"}));
  km->add_option("--seed", km_seed);
  km->add_option("--out", km_out, "optional JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  std::cout << std::setprecision(10);
  try {
    const IterationConfig icfg;
    if (*cl) {
      const DataSet data = cl_data.load();
      const GammaIndex gmu(cl_gamma);
      const GammaIndex gsig(cl_gamma_sigma.value_or(cl_gamma));
      const auto r = spontaneous_cluster(data, gmu, gsig, cl_rcfg, icfg,
                                         cl_identity ? CovarianceMode::identity
                                                     : CovarianceMode::fitted);
      write_json(io::model_to_json(r.model, &r.partition), cl_out);
      if (!cl_profile.empty()) write_profile(data, r.model, gmu, cl_profile);
      std::cout << "clusters " << r.model.k() << "\n";
      for (std::size_t j = 0; j < r.model.k(); ++j) {
        std::cout << "center " << j << ' ' << r.model.components[j].mu().transpose() << '\n';
      }
      std::cout << "rounds " << r.diagnostics.rounds << " restarts " << r.diagnostics.restarts
                << " non_converged " << r.diagnostics.non_converged << '\n';
    } else if (*sg) {
      const DataSet data = sg_data.load();
      if (sg_method == "range") {
        std::cout << "gamma " << gamma_by_range(data, sg_k_prior).value() << '\n';
      } else {
        const GammaGrid grid = parse_grid(sg_grid);
        const AicReport rep =
            sg_grid_sigma.empty()
                ? select_gamma_aic(data, grid, sg_rcfg, icfg,
                                   sg_identity ? CovarianceMode::identity : CovarianceMode::fitted)
                : select_gamma_aic_two_index(data, grid, parse_grid(sg_grid_sigma), sg_rcfg, icfg);
        std::cout << "gamma_mu gamma_sigma k aic\n";
        for (const auto& rec : rep.records) {
          std::cout << rec.gamma_mu << ' ' << rec.gamma_sigma << ' ';
          if (rec.ok()) {
            std::cout << *rec.k << ' ' << *rec.aic << '\n';
          } else {
            std::cout << "NA NA  # " << rec.error << '\n';
          }
        }
        std::cout << "gamma " << rep.best().gamma_mu << "\ngamma_sigma " << rep.best().gamma_sigma
                  << "\nclusters " << *rep.best().k << '\n';
      }
    } else if (*cb) {
      const auto nu = parse_list(cb_nu, ',');
      cb_spec.nu = Eigen::Map<const Vector>(nu.data(), static_cast<Eigen::Index>(nu.size()));
      const auto v = check_bimodal(cb_spec);
      std::cout << "d " << v.d << '\n'
                << "upper_log_lhs " << v.log_lhs_upper << " upper_log_rhs " << v.log_rhs_upper << '\n'
                << "lower_log_lhs " << v.log_lhs_lower << " lower_log_rhs " << v.log_rhs_lower << '\n'
                << "verdict " << (v.bimodal ? "bimodal" : "unimodal") << '\n';
      if (v.displacement_bound) std::cout << "displacement_bound " << *v.displacement_bound << '\n';
      if (cb_oracle) std::cout << "oracle_modes " << oracle_mode_count(cb_spec, cb_grid) << '\n';
    } else if (*sm) {
      const ExperimentConfig cfg = io::config_from_json(io::read_json(sm_config));
      const ExperimentReport rep = run_experiment(cfg);
      io::write_report(rep, sm_out);
      for (const auto& s : rep.methods) {
        std::cout << method_name(s.method) << " K=" << rep.true_k << ':'
                  << (s.frequency.count(rep.true_k) ? s.frequency.at(rep.true_k) : 0) << '/'
                  << rep.runs << " mean_bhi " << s.mean_bhi << '\n';
      }
    } else if (*ev) {
      const DataSet data = ev_data.load();
      const auto truth = encode_categories(io::read_labels(ev_labels));
      std::vector<int> labels;
      ClusterModel model = io::model_from_json(io::read_json(ev_model), &labels);
      require_same_dim(data, model.components.at(0).dim(), "model");
      Partition part;
      if (labels.empty()) {
        part = assign(data, model);
      } else {
        part.labels = labels;
        part.k = static_cast<int>(model.k());
      }
      if (truth.size() != part.labels.size()) throw InvalidInput("labels and data differ in length");
      std::cout << "bhi " << bhi(part, truth) << '\n';
      if (part.k >= 2 && part.k < data.n()) {
        std::cout << "ch " << ch_text(ch_index(data, part)) << '\n';
      } else {
        std::cout << "ch NA\n";
      }
    } else if (*km) {
      const DataSet data = km_data.load();
      KMeansResult res;
      if (!km_select.empty()) {
        const int hi = std::min<int>(km_k_max, static_cast<int>(data.n()) - 1);
        if (km_select == "ch") {
          const auto sel = select_k_by_ch(data, 2, hi, km_restarts, km_seed);
          for (std::size_t i = 0; i < sel.ks.size(); ++i) {
            std::cout << "ch " << sel.ks[i] << ' ' << ch_text(sel.ch[i]) << '\n';
          }
          res = sel.best;
        } else {
          const auto gap = gap_statistic(data, 1, hi, km_refs, km_seed, km_restarts);
          for (std::size_t i = 0; i < gap.ks.size(); ++i) {
            std::cout << "gap " << gap.ks[i] << ' ' << gap.gap[i] << ' ' << gap.ref_sd[i] << '\n';
          }
          const GapRule rule = km_gap_rule == "argmax" ? GapRule::argmax : GapRule::first_se;
          res = kmeans(data, gap_choice(gap, rule), km_restarts, km_seed);
        }
      } else {
        if (km_k < 1) throw InvalidInput("kmeans needs --k or --select");
        res = kmeans(data, km_k, km_restarts, km_seed);
      }
      std::cout << "k " << res.partition.k << "\nwithin_ss " << res.within_ss << '\n';
      for (Eigen::Index j = 0; j < res.centers.rows(); ++j) {
        std::cout << "center " << j << ' ' << res.centers.row(j) << '\n';
      }
      if (!km_out.empty()) {
        io::json j{{"k", res.partition.k}, {"within_ss", res.within_ss}, {"labels", res.partition.labels}};
        j["centers"] = io::json::array();
        for (Eigen::Index r = 0; r < res.centers.rows(); ++r) {
          j["centers"].push_back(std::vector<double>(res.centers.row(r).begin(), res.centers.row(r).end()));
        }
        write_json(j, km_out);
      }
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DegenerateK& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ZeroRange& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
