// mapperloss: ingest mapper graphs, bound their interleaving distance, run oracles.
//
// Exit codes: 0 success or pass, 1 check failure, 2 invalid input, 3 infinite bound.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mapperloss/assignment.hpp"
#include "mapperloss/cosheaf.hpp"
#include "mapperloss/ingest.hpp"
#include "mapperloss/io.hpp"
#include "mapperloss/oracle.hpp"

namespace ml = mapperloss;
namespace io = mapperloss::io;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInvalid = 2;
constexpr int kInfinite = 3;

struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-")
    std::cout << text;
  else
    io::write_text_file(output, text);
}

ml::CosheafGraph load_cosheaf(const std::string& path) {
  ml::CosheafGraph F = io::cosheaf_from_json(io::read_json_file(path));
  auto v = ml::validate(F);
  if (!v.empty()) {
    std::string msg = path + " is not a valid cosheaf:";
    for (const auto& s : v) msg += "\n  " + s;
    throw Invalid(msg);
  }
  return F;
}

// A grid file holds either a bare grid or anything with a "grid" key.
ml::GridSpec load_grid(const std::string& path) {
  io::Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("grid")) return io::grid_from_json(j["grid"]);
  return io::grid_from_json(j);
}

std::pair<ml::CosheafGraph, ml::CosheafGraph> load_pair(const std::string& f, const std::string& g) {
  auto F = load_cosheaf(f);
  auto G = load_cosheaf(g);
  if (!(F.grid() == G.grid())) throw Invalid("the two cosheaves live on different grids");
  return {std::move(F), std::move(G)};
}

ml::Assignment load_assignment(const std::string& path, const ml::CosheafGraph& F, const ml::CosheafGraph& G) {
  ml::Assignment a = io::assignment_from_json(io::read_json_file(path), F, G);
  auto v = ml::validate_assignment(F, G, a);
  if (!v.empty()) {
    std::string msg = path + " is not a valid assignment:";
    for (const auto& s : v) msg += "\n  " + s;
    throw Invalid(msg);
  }
  return a;
}

struct Options {
  std::vector<std::string> inputs, outputs;
  double delta = 0;
  std::string grid, f, g, assignment, output, mode = "exact";
  unsigned jobs = 1;
  std::size_t k = 0;
  std::size_t n_max = 4;
  std::size_t cap = 12;
};

int run_ingest(const Options& o) {
  std::vector<ml::GeometricGraph> graphs;
  for (const auto& p : o.inputs) graphs.push_back(io::graph_from_json(io::read_json_file(p)));
  if (!o.outputs.empty() && o.outputs.size() != o.inputs.size())
    throw Invalid("give one --output per --input");
  if (o.outputs.empty() && o.inputs.size() > 1) throw Invalid("several inputs need one --output each");
  ml::GridSpec grid;
  if (!o.grid.empty()) {
    grid = load_grid(o.grid);
    if (grid.delta != o.delta) throw Invalid("--delta disagrees with the grid in " + o.grid);
  } else {
    grid = ml::fit_grid(graphs, o.delta);
  }
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    ml::CosheafGraph F = ml::build_cosheaf(graphs[i], grid);
    emit(io::dump(io::cosheaf_to_json(F)), o.outputs.empty() ? std::string() : o.outputs[i]);
  }
  return kOk;
}

int run_bound(const Options& o) {
  auto [F, G] = load_pair(o.f, o.g);
  ml::Assignment a = load_assignment(o.assignment, F, G);
  ml::LossOptions opts;
  opts.jobs = o.jobs;
  ml::LossResult r = ml::basis_loss(F, G, a, opts);
  emit(io::dump(io::loss_result_to_json(r)), o.output);
  return r.L_B.is_infinite() ? kInfinite : kOk;
}

int run_check(const Options& o) {
  auto [F, G] = load_pair(o.f, o.g);
  ml::Assignment a = load_assignment(o.assignment, F, G);
  ml::LossOptions opts;
  opts.jobs = o.jobs;
  opts.max_witnesses = 0;
  ml::CheckOutcome c = ml::loss_at(F, G, a, o.k, opts);
  io::Json ws = io::Json::array();
  for (const auto& w : c.witnesses) ws.push_back(io::witness_to_json(w));
  io::Json out{{"n", a.n}, {"k", o.k}, {"passed", c.passed}, {"witnesses", ws}};
  emit(io::dump(out), o.output);
  return c.passed ? kOk : kCheckFailed;
}

int run_oracle(const Options& o) {
  ml::OracleCaps caps;
  caps.max_nodes = o.cap;
  io::Json report;
  int code = kOk;
  if (o.mode == "pi0") {
    // Geometric input: compare every slice up to radius 3 with the direct computation.
    ml::GeometricGraph g = io::graph_from_json(io::read_json_file(o.f));
    ml::GridSpec grid;
    if (!o.grid.empty())
      grid = load_grid(o.grid);
    else if (o.delta > 0)
      grid = ml::fit_grid(std::vector<ml::GeometricGraph>{g}, o.delta);
    else
      throw Invalid("pi0 needs --delta or --grid");
    ml::CosheafGraph F = ml::build_cosheaf(g, grid);
    std::size_t samples = 0;
    io::Json bad = io::Json::array();
    for (ml::CellId c = 0; c < grid.cell_count(); ++c) {
      const ml::Cell cell = ml::cell_from_id(grid, c);
      for (std::size_t r = 0; r <= 3; ++r) {
        ++samples;
        const auto s = ml::slice(F, cell, r);
        const auto p = ml::geometric_pi0(g, grid, ml::thicken(ml::basic_open(grid, cell), r));
        if (s.components != p.count)
          bad.push_back(io::Json{{"cell", io::cell_to_json(cell)}, {"radius", r}, {"slice", s.components},
                                 {"geometric", p.count}});
      }
    }
    report = {{"mode", "pi0"}, {"samples", samples}, {"disagreements", bad}};
    if (!bad.empty()) code = kCheckFailed;
  } else {
    auto [F, G] = load_pair(o.f, o.g);
    if (o.mode == "exact") {
      ml::ExtendedNat d = ml::exhaustive_interleaving(F, G, o.n_max, caps);
      report = {{"mode", "exact"}, {"n_max", o.n_max}, {"d_I", io::extended_to_json(d)}};
    } else if (o.mode == "full-loss") {
      if (o.assignment.empty()) throw Invalid("full-loss needs --assignment");
      ml::Assignment a = load_assignment(o.assignment, F, G);
      ml::FullLossResult r = ml::full_loss(F, G, a, caps);
      report = {{"mode", "full-loss"},
                {"loss", io::extended_to_json(r.loss)},
                {"promoted_by", r.promoted_by},
                {"level", r.level},
                {"extension_consistent", r.extension_consistent}};
    } else {
      throw Invalid("unknown oracle mode '" + o.mode + "'");
    }
  }
  emit(io::dump(io::Json{{"oracle", report}}), o.output);
  return code;
}

int run_export_dot(const Options& o) {
  emit(io::to_dot(load_cosheaf(o.f)), o.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified upper bounds on the interleaving distance between mapper graphs"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Build cosheaf files from geometric graph files");
  ingest->add_option("--input", o.inputs, "Geometric graph JSON (repeatable; shared grid)")->required();
  ingest->add_option("--delta", o.delta, "Cell side length")->required()->check(CLI::PositiveNumber);
  ingest->add_option("--grid", o.grid, "Reuse the grid of this grid or cosheaf file");
  ingest->add_option("--output", o.outputs, "Output path per input (default: standard output)");

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--f", o.f, "Cosheaf F")->required();
    sub->add_option("--g", o.g, "Cosheaf G")->required();
    sub->add_option("--output", o.output, "Output path (default: standard output)");
  };
  auto* bound = app.add_subcommand("bound", "Compute L_B and the bound n + L_B");
  add_pair(bound);
  bound->add_option("--assignment", o.assignment, "Assignment JSON")->required();
  bound->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Evaluate every basis diagram at one k");
  add_pair(check);
  check->add_option("--assignment", o.assignment, "Assignment JSON")->required();
  check->add_option("--k", o.k, "Extra radius")->required();
  check->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Slow reference computations on small instances");
  oracle->add_option("--mode", o.mode, "exact | pi0 | full-loss")
      ->check(CLI::IsMember({"exact", "pi0", "full-loss"}));
  oracle->add_option("--f", o.f, "Cosheaf F (geometric graph for pi0)")->required();
  oracle->add_option("--g", o.g, "Cosheaf G");
  oracle->add_option("--assignment", o.assignment, "Assignment JSON (full-loss)");
  oracle->add_option("--n-max", o.n_max, "Largest n tried by exact");
  oracle->add_option("--cap", o.cap, "Node cap per cosheaf");
  oracle->add_option("--delta", o.delta, "Cell side length (pi0)");
  oracle->add_option("--grid", o.grid, "Grid or cosheaf file (pi0)");
  oracle->add_option("--output", o.output, "Output path (default: standard output)");

  auto* dot = app.add_subcommand("export-dot", "Write a cosheaf as a DOT graph");
  dot->add_option("--f", o.f, "Cosheaf F")->required();
  dot->add_option("--output", o.output, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*ingest) return run_ingest(o);
    if (*bound) return run_bound(o);
    if (*check) return run_check(o);
    if (*oracle) {
      if (o.mode != "pi0" && o.g.empty()) throw Invalid("--g is required for this mode");
      return run_oracle(o);
    }
    if (*dot) return run_export_dot(o);
  } catch (const Invalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ml::CapExceeded& e) {
    std::cerr << "error: cap exceeded: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
