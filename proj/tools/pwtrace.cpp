// pwtrace: node-sequence diagnostics for Paley-Wiener sampling sets.
// Subcommands: partition, check, norm, profile, interpolate.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwtrace/errors.hpp"
#include "pwtrace/generating_function.hpp"
#include "pwtrace/io.hpp"
#include "pwtrace/trace_spaces.hpp"

namespace {

using namespace pwtrace;

struct GridFlag {
  double x_min = 0.0, x_max = 0.0, step = 0.0;
  bool set = false;
};

GridFlag parse_grid(const std::string& text) {
  GridFlag g;
  if (text.empty()) return g;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> g.x_min >> c1 >> g.x_max >> c2 >> g.step) || c1 != ':' || c2 != ':')
    fail(errc::invalid_argument, "--grid expects XMIN:XMAX:STEP");
  g.set = true;
  return g;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail(errc::invalid_argument, "cannot write " + out_path);
  out << text;
}

double resolve_epsilon(const SequenceFile& sf, double eps_flag) {
  if (eps_flag > 0.0) return eps_flag;
  if (sf.epsilon_set) return sf.params.epsilon;
  double re_min = sf.seq.nodes.front().real(), re_max = re_min;
  for (Complex z : sf.seq.nodes) {
    re_min = std::min(re_min, z.real());
    re_max = std::max(re_max, z.real());
  }
  const double r = empirical_density_radius(sf.seq, re_min - 5.0, re_max + 5.0, 0.25);
  return std::max(r, 1e-6);
}

double resolve_radius(const SequenceFile& sf, double radius_flag) {
  if (radius_flag > 0.0) return radius_flag;
  double abs_max = 0.0;
  for (Complex z : sf.seq.nodes) abs_max = std::max(abs_max, std::abs(z));
  return abs_max + 1.0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::capacity_exceeded:
    case errc::partition_failed:
      return 2;
    case errc::derivative_zero:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pwtrace: diagnostics and interpolation for complex node sequences"};
  app.require_subcommand(1);

  std::string input, out_path, grid_text, mode = "ls", space = "partition", eval_path;
  double eps_flag = 0.0, tau_flag = 0.0, p_flag = 0.0, radius_flag = 0.0;
  int capacity_flag = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "sequence JSON file")->required();
    cmd->add_option("--capacity", capacity_flag, "cluster capacity N (overrides the file)");
    cmd->add_option("--epsilon", eps_flag, "strip parameter epsilon (overrides the file)");
    cmd->add_option("--tau", tau_flag, "exponential type tau (overrides the file)");
    cmd->add_option("--p", p_flag, "integrability exponent p (overrides the file)");
    cmd->add_option("--grid", grid_text, "real grid XMIN:XMAX:STEP");
    cmd->add_option("--radius", radius_flag, "truncation radius for S");
    cmd->add_option("--out", out_path, "output path (default: stdout)");
  };

  CLI::App* cmd_partition = app.add_subcommand("partition", "adapted partition of the node set");
  add_common(cmd_partition);
  CLI::App* cmd_check = app.add_subcommand("check", "condition report");
  add_common(cmd_check);
  cmd_check->add_option("--mode", mode, "ls | hn")->check(CLI::IsMember({"ls", "hn"}));
  CLI::App* cmd_norm = app.add_subcommand("norm", "trace-space norm of the stored trace");
  add_common(cmd_norm);
  cmd_norm->add_option("--space", space, "partition | neighbors | halfplane")
      ->check(CLI::IsMember({"partition", "neighbors", "halfplane"}));
  CLI::App* cmd_profile = app.add_subcommand("profile", "CSV profile x, |S(x)|, d_N(x), weight");
  add_common(cmd_profile);
  CLI::App* cmd_interp = app.add_subcommand("interpolate", "evaluate the cardinal interpolant");
  add_common(cmd_interp);
  cmd_interp->add_option("--eval", eval_path, "JSON file with evaluation points")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    SequenceFile sf = load_sequence_file(input);
    if (capacity_flag > 0) sf.params.capacity = capacity_flag;
    if (tau_flag > 0.0) sf.params.tau = tau_flag;
    if (p_flag > 0.0) sf.params.p = p_flag;
    const GridFlag grid = parse_grid(grid_text);

    if (app.got_subcommand(cmd_partition)) {
      const double eps = resolve_epsilon(sf, eps_flag);
      const Partition partition = adapted_partition(sf.seq, eps, sf.params.capacity);
      emit(partition_to_json(partition).dump(2) + "\n", out_path);
      return 0;
    }

    if (app.got_subcommand(cmd_check)) {
      CheckGrids grids;
      if (grid.set) {
        grids.x_min = grid.x_min;
        grids.x_max = grid.x_max;
        grids.step = grid.step;
      }
      grids.radius = radius_flag;
      SpaceParams params = sf.params;
      params.epsilon = resolve_epsilon(sf, eps_flag);
      const ConditionReport report =
          mode == "ls" ? check_ls(sf.seq, params, grids) : check_hn(sf.seq, params, grids);
      emit(report.to_json().dump(2) + "\n", out_path);
      return 0;
    }

    if (app.got_subcommand(cmd_norm)) {
      if (!sf.trace) fail(errc::missing_trace_value, "norm: the input file carries no trace");
      SpaceParams params = sf.params;
      std::vector<Cluster> clusters;
      std::vector<double> weights;
      bool modify = true;
      double p = params.p;
      if (space == "neighbors") {
        clusters = neighbor_groups(sf.seq, params.capacity, 0.25);
        for (std::size_t i = 0; i < clusters.size(); ++i)
          weights.push_back(1.0 + std::abs(sf.seq.nodes[i].imag()));
      } else {
        const double eps = resolve_epsilon(sf, eps_flag);
        const Partition partition = adapted_partition(sf.seq, eps, params.capacity);
        clusters = partition.clusters;
        if (space == "halfplane") {
          const HalfPlane hp = HalfPlane::upper(0.0);
          modify = false;
          for (const Cluster& c : clusters) {
            if (c.flavor != Flavor::pseudohyperbolic || c.half_plane.sign != hp.sign ||
                c.half_plane.offset != hp.offset)
              fail(errc::flavor_mismatch,
                   "norm --space halfplane needs every cluster pseudohyperbolic in Im z > 0");
            weights.push_back(std::abs(c.base_point().imag()));
          }
        } else {
          for (const Cluster& c : clusters)
            weights.push_back(1.0 + std::abs(c.base_point().imag()));
        }
      }
      const auto terms =
          partition_norm_terms(*sf.trace, clusters, modify ? params.tau : 0.0, p, modify, weights);
      double sum = 0.0;
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& t : terms) {
        sum += t.contribution;
        rows.push_back({{"cluster", t.cluster_index},
                        {"weight", t.weight},
                        {"terms_p", t.term_p},
                        {"contribution", t.contribution}});
      }
      const double norm = std::pow(sum, 1.0 / p);
      nlohmann::json doc = {{"space", space}, {"p", p}, {"tau", params.tau}, {"norm", norm},
                            {"clusters", rows}};
      emit(doc.dump(2) + "\n", out_path);
      return 0;
    }

    if (app.got_subcommand(cmd_profile)) {
      if (!grid.set || grid.step <= 0.0 || grid.x_max < grid.x_min)
        fail(errc::empty_grid, "profile: --grid XMIN:XMAX:STEP with a positive step is required");
      const double eps = resolve_epsilon(sf, eps_flag);
      const Partition partition = adapted_partition(sf.seq, eps, sf.params.capacity);
      const WeightProfile prof =
          build_weight_profile(sf.seq, partition, sf.params.p, grid.x_min, grid.x_max, grid.step,
                               resolve_radius(sf, radius_flag));
      std::ostringstream csv;
      prof.write_csv(csv);
      emit(csv.str(), out_path);
      return 0;
    }

    if (app.got_subcommand(cmd_interp)) {
      if (!sf.trace) fail(errc::missing_trace_value, "interpolate: the input carries no trace");
      std::ifstream in(eval_path);
      if (!in) fail(errc::invalid_argument, "cannot open " + eval_path);
      nlohmann::json doc;
      try {
        in >> doc;
      } catch (const nlohmann::json::exception& e) {
        fail(errc::invalid_argument, std::string("malformed JSON: ") + e.what());
      }
      if (!doc.is_object() || !doc.contains("points") || !doc.at("points").is_array())
        fail(errc::invalid_argument, "eval file: missing \"points\" array");
      const BandlimitedFunction f =
          cardinal_interpolant(*sf.trace, sf.seq, resolve_radius(sf, radius_flag));
      nlohmann::json values = nlohmann::json::array();
      for (const auto& j : doc.at("points")) values.push_back(complex_to_json(f(complex_from_json(j))));
      emit(nlohmann::json{{"values", values}}.dump(2) + "\n", out_path);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "pwtrace error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "pwtrace error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
