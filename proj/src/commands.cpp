#include "moran/commands.hpp"

#include <fstream>

#include "moran/render.hpp"
#include "moran/report.hpp"
#include "moran/spec_file.hpp"

namespace moran {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::guard_exceeded: return exit_code::guard;
    case ErrorCode::io_error: return exit_code::usage;
    default: return exit_code::validation;
  }
}

namespace {

template <class Fn>
CommandResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "",
            "error [" + std::string(to_string(e.code())) + "]: " + e.what() + "\n"};
  }
}

std::string emit(const RunReport& report, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(report) : to_json(report);
}

}  // namespace

CommandResult cmd_validate(const std::filesystem::path& spec_path) {
  return guarded([&] {
    const SpecFile spec = load_spec(spec_path);
    const Construction& c = spec.construction;
    std::string msg = "ok: " + std::to_string(c.preperiod().size()) + " preperiod level(s), " +
                      std::to_string(c.period().size()) + " period level(s), measure ";
    msg += !spec.measure ? "absent" : spec.uniform_measure ? "uniform" : "explicit";
    return CommandResult{exit_code::ok, msg + "\n", ""};
  });
}

CommandResult cmd_dims(const std::filesystem::path& spec_path, const DimsOptions& opt) {
  return guarded([&] {
    const SpecFile spec = load_spec(spec_path);
    RunReport report;
    report.command = "dims";
    report.construction = summarize(spec.construction);
    report.dims = dims_section(
        dimension_report(spec.construction, opt.window, opt.gap_limit, Parallelism{opt.threads}),
        opt.gap_limit);
    const int status = report.dims->chain_holds ? exit_code::ok : exit_code::check_failed;
    return CommandResult{status, emit(report, opt.format),
                         status == exit_code::ok ? "" : "error: dimension chain violated\n"};
  });
}

CommandResult cmd_measure(const std::filesystem::path& spec_path, const MeasureOptions& opt) {
  return guarded([&] {
    const SpecFile spec = load_spec(spec_path);
    if (!spec.measure) {
      throw Error(ErrorCode::invalid_probability, "spec has no measure section");
    }
    RunReport report;
    report.command = "measure";
    report.construction = summarize(spec.construction);
    report.measure = measure_section(
        hausdorff_packing_dims(spec.construction, *spec.measure, opt.window), spec.uniform_measure);
    if (opt.samples > 0) {
      report.measure->local_dim = local_dim_summary(
          oracle::local_dim_samples(spec.construction, *spec.measure, opt.seed, opt.samples,
                                    opt.sample_depth),
          opt.seed, opt.sample_depth);
    }
    return CommandResult{exit_code::ok, emit(report, opt.format), ""};
  });
}

CommandResult cmd_oracle(const std::filesystem::path& spec_path, const OracleOptions& opt) {
  return guarded([&] {
    const SpecFile spec = load_spec(spec_path);
    const ProbAssignment p = spec.measure ? *spec.measure : ProbAssignment::uniform(spec.construction);
    oracle::VerifyOptions vo;
    vo.max_depth = opt.max_depth;
    vo.pairs_depth = opt.pairs_depth;
    vo.guard = opt.guard;
    vo.nested = opt.nested;
    RunReport report;
    report.command = "oracle";
    report.construction = summarize(spec.construction);
    report.oracle = oracle_section(oracle::verify(spec.construction, p, vo), opt.max_depth,
                                   opt.pairs_depth);
    CommandResult res{exit_code::ok, emit(report, opt.format), ""};
    for (const auto& check : report.oracle->checks) {
      if (!check.passed) {
        res.exit_code = exit_code::check_failed;
        res.err += "check " + check.name + " failed: " + check.detail + "\n";
      }
    }
    return res;
  });
}

CommandResult cmd_render(const std::filesystem::path& spec_path, const RenderOptions& opt) {
  return guarded([&] {
    const SpecFile spec = load_spec(spec_path);
    std::string image = render_ppm(spec.construction, opt.level, opt.width, opt.guard);
    if (opt.out == "-") return CommandResult{exit_code::ok, std::move(image), ""};
    std::ofstream file(opt.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::io_error, "cannot write " + opt.out);
    file << image;
    if (!file) throw Error(ErrorCode::io_error, "write failed for " + opt.out);
    return CommandResult{exit_code::ok, "wrote " + opt.out + "\n", ""};
  });
}

}  // namespace moran
