#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nefem/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"2D compressible-flow solver with NURBS-enhanced boundary "
               "elements"};
  app.require_subcommand(1);

  std::string config_path, mesh_path, curves_path;
  int curve_id = 0, n_samples = 100;
  std::vector<std::string> grids;

  auto* run = app.add_subcommand("run", "run a case from a config file");
  run->add_option("config", config_path, "case config")->required();

  auto* check = app.add_subcommand("check-mesh", "validate a mesh against its "
                                                 "boundary curves");
  check->add_option("mesh", mesh_path, "mesh file")->required();
  check->add_option("curves", curves_path, "NURBS boundary file")->required();

  auto* sample = app.add_subcommand("sample-curve", "sample a boundary curve "
                                                    "with outward normals");
  sample->add_option("curves", curves_path, "NURBS boundary file")->required();
  sample->add_option("id", curve_id, "curve id")->required();
  sample->add_option("n", n_samples, "number of intervals")->required();

  auto* study = app.add_subcommand("study", "grid convergence study over both "
                                            "element treatments");
  study->add_option("config", config_path, "case config")->required();
  study->add_option("grids", grids, "mesh files, coarse to fine")->required();

  auto* dumpq = app.add_subcommand("dump-quadrature",
                                   "dump physical quadrature point locations");
  dumpq->add_option("config", config_path, "case config")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return nefem::cmd_run(config_path, std::cout);
  if (check->parsed())
    return nefem::cmd_check_mesh(mesh_path, curves_path, std::cout);
  if (sample->parsed())
    return nefem::cmd_sample_curve(curves_path, curve_id, n_samples, std::cout);
  if (study->parsed()) return nefem::cmd_study(config_path, grids, std::cout);
  if (dumpq->parsed()) return nefem::cmd_dump_quadrature(config_path, std::cout);
  return nefem::kExitConfig;
}
