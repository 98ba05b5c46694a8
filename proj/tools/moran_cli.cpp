#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "moran/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dimensions of self-affine Moran sets and measures"};
  app.require_subcommand(1);

  std::string spec;
  moran::DimsOptions dims;
  moran::MeasureOptions measure;
  moran::OracleOptions oracle;
  moran::RenderOptions render;
  const std::map<std::string, moran::OutputFormat> formats{{"json", moran::OutputFormat::json},
                                                           {"csv", moran::OutputFormat::csv}};

  auto* validate_cmd = app.add_subcommand("validate", "Check a spec file");
  validate_cmd->add_option("spec", spec, "Spec file")->required();

  auto* dims_cmd = app.add_subcommand("dims", "Box, lower and Assouad dimensions");
  dims_cmd->add_option("spec", spec, "Spec file")->required();
  dims_cmd->add_option("--window", dims.window, "Depths used for the box ratio")->capture_default_str();
  dims_cmd->add_option("--gap-limit", dims.gap_limit, "Largest gap for lower/Assouad")
      ->capture_default_str();
  dims_cmd->add_option("--threads", dims.threads, "Worker threads")->capture_default_str()
      ->check(CLI::Range(1, 256));
  dims_cmd->add_option("--format", dims.format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* measure_cmd = app.add_subcommand("measure", "Entropy, Hausdorff and packing dimensions");
  measure_cmd->add_option("spec", spec, "Spec file")->required();
  measure_cmd->add_option("--window", measure.window, "Depths used for the entropy ratio")
      ->capture_default_str();
  measure_cmd->add_option("--samples", measure.samples, "Local-dimension samples")
      ->capture_default_str();
  measure_cmd->add_option("--sample-depth", measure.sample_depth, "Depth of each sample")
      ->capture_default_str();
  measure_cmd->add_option("--seed", measure.seed, "Sampling seed")->capture_default_str();
  measure_cmd->add_option("--format", measure.format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force checks of the counting formulas");
  oracle_cmd->add_option("spec", spec, "Spec file")->required();
  oracle_cmd->add_option("--max-depth", oracle.max_depth, "Depth for census/measure/entropy")
      ->capture_default_str();
  oracle_cmd->add_option("--pairs-depth", oracle.pairs_depth, "Largest k' for nested counts")
      ->capture_default_str();
  oracle_cmd->add_option("--guard", oracle.guard, "Work limit")->capture_default_str();
  oracle_cmd->add_option("--format", oracle.format, "json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* render_cmd = app.add_subcommand("render", "Plain PPM image of a prefractal");
  render_cmd->add_option("spec", spec, "Spec file")->required();
  render_cmd->add_option("--level", render.level, "Construction level")->capture_default_str();
  render_cmd->add_option("--width", render.width, "Canvas side in pixels")->capture_default_str();
  render_cmd->add_option("--out", render.out, "Output path, - for stdout")->capture_default_str();
  render_cmd->add_option("--guard", render.guard, "Rectangle limit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : moran::exit_code::usage;
  }

  moran::CommandResult res;
  if (*validate_cmd) {
    res = moran::cmd_validate(spec);
  } else if (*dims_cmd) {
    res = moran::cmd_dims(spec, dims);
  } else if (*measure_cmd) {
    res = moran::cmd_measure(spec, measure);
  } else if (*oracle_cmd) {
    res = moran::cmd_oracle(spec, oracle);
  } else {
    res = moran::cmd_render(spec, render);
  }
  std::cout << res.out << std::flush;
  std::cerr << res.err;
  return res.exit_code;
}
