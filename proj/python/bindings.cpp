#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moran/commands.hpp"
#include "moran/dimension.hpp"
#include "moran/measure.hpp"
#include "moran/oracle.hpp"
#include "moran/render.hpp"
#include "moran/spec_file.hpp"

namespace py = pybind11;
using namespace moran;

namespace {

using LevelTuple = std::tuple<int, int, std::vector<std::pair<int, int>>>;

Level to_level(const LevelTuple& t) {
  Level lv{std::get<0>(t), std::get<1>(t), {}};
  for (auto [i, j] : std::get<2>(t)) lv.digits.push_back({i, j});
  return lv;
}

LevelTuple from_level(const Level& lv) {
  std::vector<std::pair<int, int>> digits;
  for (const Digit& d : lv.digits) digits.emplace_back(d.i, d.j);
  return {lv.n, lv.m, digits};
}

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

py::object to_py(const Rational& v) {
  return py::module_::import("fractions").attr("Fraction")(v.str());
}

py::object count_to_py(const LogCount& c) {
  if (c.exact) return to_py(*c.exact);
  return py::float_(std::exp(c.log_value));
}

// None -> uniform; otherwise one list of probabilities per stored level,
// each entry an int, a Fraction or a "p/q" string.
ProbAssignment to_measure(const Construction& c, const py::object& probs) {
  if (probs.is_none()) return ProbAssignment::uniform(c);
  std::vector<std::vector<Rational>> per_level;
  for (const py::handle level : probs) {
    std::vector<Rational> row;
    for (const py::handle x : level) row.emplace_back(py::str(x).cast<std::string>());
    per_level.push_back(std::move(row));
  }
  return ProbAssignment(c, std::move(per_level));
}

py::dict tail_dict(const TailEstimate& t) {
  py::dict d;
  d["lower"] = t.lower;
  d["upper"] = t.upper;
  d["limit"] = t.limit;
  d["tail_min"] = t.tail_min;
  d["tail_max"] = t.tail_max;
  d["oscillation"] = t.oscillation;
  d["window"] = t.window;
  d["periodic_tail"] = t.periodic_tail;
  return d;
}

py::dict gap_dict(const GapLimitEstimate& g) {
  py::dict d;
  d["value"] = g.value;
  d["numeric"] = g.numeric;
  d["zeta_last"] = g.zeta_last;
  d["oscillation"] = g.oscillation;
  d["error_bar"] = g.error_bar;
  d["k_scan"] = g.k_scan;
  d["stabilized"] = g.stabilized;
  return d;
}

py::tuple command_tuple(const CommandResult& r) { return py::make_tuple(r.exit_code, r.out, r.err); }

OutputFormat format_of(const std::string& f) {
  if (f == "json") return OutputFormat::json;
  if (f == "csv") return OutputFormat::csv;
  throw Error(ErrorCode::parse_error, "format must be json or csv");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dimensions of self-affine Moran sets and measures";

  static py::exception<Error> moran_error(m, "MoranError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.code())) + ": " + e.what();
      py::set_error(moran_error, msg.c_str());
    }
  });

  py::class_<Construction>(m, "Construction")
      .def(py::init([](const std::vector<LevelTuple>& preperiod, const std::vector<LevelTuple>& period) {
             std::vector<Level> pre, per;
             for (const auto& t : preperiod) pre.push_back(to_level(t));
             for (const auto& t : period) per.push_back(to_level(t));
             return Construction(std::move(pre), std::move(per));
           }),
           py::arg("preperiod"), py::arg("period"))
      .def_static("constant", [](const LevelTuple& t) { return Construction::constant(to_level(t)); })
      .def("level_at", [](const Construction& c, int k) { return from_level(c.level_at(k)); })
      .def_property_readonly("preperiod", [](const Construction& c) {
        std::vector<LevelTuple> out;
        for (const Level& lv : c.preperiod()) out.push_back(from_level(lv));
        return out;
      })
      .def_property_readonly("period", [](const Construction& c) {
        std::vector<LevelTuple> out;
        for (const Level& lv : c.period()) out.push_back(from_level(lv));
        return out;
      })
      .def("__repr__", [](const Construction& c) {
        return "Construction(preperiod=" + std::to_string(c.preperiod().size()) +
               " levels, period=" + std::to_string(c.period().size()) + " levels)";
      });

  m.def("load_spec", [](const std::string& path) {
    SpecFile spec = load_spec(path);
    py::object probs = py::none();
    if (spec.measure) {
      py::list levels;
      for (int idx = 0; idx < spec.construction.stored_count(); ++idx) {
        py::list row;
        for (const Rational& x : spec.measure->stored(idx)) row.append(to_py(x));
        levels.append(row);
      }
      probs = levels;
    }
    return py::make_tuple(spec.construction, probs);
  });
  m.def("random_construction", [](std::uint64_t seed) { return random_construction(seed); });

  m.def("k_of_delta", py::overload_cast<const Construction&, double>(&k_of_delta));
  m.def("l_of_k", [](const Construction& c, int k) { return l_of_k(c, k).l; });
  m.def("count_approx_squares",
        [](const Construction& c, int k) { return count_to_py(count_approx_squares(c, k)); });
  m.def("n_minus", [](const Construction& c, int k, int k2) { return count_to_py(n_minus(c, k, k2)); });
  m.def("n_plus_count",
        [](const Construction& c, int k, int k2) { return count_to_py(n_plus_count(c, k, k2)); });

  m.def(
      "dimension_report",
      [](const Construction& c, int window, int gap_limit, int threads) {
        const DimensionReport r = dimension_report(c, window, gap_limit, Parallelism{threads});
        py::dict d;
        d["lower_box"] = r.lower_box;
        d["upper_box"] = r.upper_box;
        d["lower_dim"] = r.lower_dim;
        d["assouad"] = r.assouad;
        d["chain_holds"] = r.chain_holds;
        d["box"] = tail_dict(r.box);
        d["lower"] = gap_dict(r.lower);
        d["upper"] = gap_dict(r.upper);
        return d;
      },
      py::arg("c"), py::arg("window") = 2000, py::arg("gap_limit") = 400, py::arg("threads") = 1);

  m.def(
      "entropy_k",
      [](const Construction& c, int k, const py::object& probs) {
        const EntropyRecord e = entropy_k(c, to_measure(c, probs), k);
        return py::make_tuple(e.entropy, e.ratio);
      },
      py::arg("c"), py::arg("k"), py::arg("probs") = py::none());

  m.def(
      "measure_dimensions",
      [](const Construction& c, const py::object& probs, int window) {
        const MeasureDimensions md = hausdorff_packing_dims(c, to_measure(c, probs), window);
        py::dict d;
        d["hausdorff"] = md.hausdorff;
        d["packing"] = md.packing;
        d["entropy"] = tail_dict(md.entropy);
        d["fsc"] = md.fsc.holds;
        d["bsc"] = md.bsc.holds;
        d["msc"] = md.msc.holds;
        d["max_boundary_marginal"] = to_py(md.msc.max_boundary_marginal);
        d["unconditional"] = md.unconditional;
        d["set_dimension_path"] = md.set_dimension_path;
        return d;
      },
      py::arg("c"), py::arg("probs") = py::none(), py::arg("window") = 2000);

  m.def(
      "verify",
      [](const Construction& c, const py::object& probs, int max_depth, int pairs_depth) {
        oracle::VerifyOptions opt;
        opt.max_depth = max_depth;
        opt.pairs_depth = pairs_depth;
        py::list out;
        for (const auto& r : oracle::verify(c, to_measure(c, probs), opt)) {
          py::dict d;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["comparisons"] = r.comparisons;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("c"), py::arg("probs") = py::none(), py::arg("max_depth") = 6, py::arg("pairs_depth") = 5);

  m.def("box_count", [](const Construction& c, int k_geom, const std::string& delta) {
    return oracle::box_count(c, k_geom, Rational(delta));
  });
  m.def("render_ppm", [](const Construction& c, int level, int width) { return render_ppm(c, level, width); },
        py::arg("c"), py::arg("level") = 3, py::arg("width") = 512);

  m.def("cmd_validate", [](const std::string& spec) { return command_tuple(cmd_validate(spec)); });
  m.def(
      "cmd_dims",
      [](const std::string& spec, int window, int gap_limit, int threads, const std::string& format) {
        return command_tuple(cmd_dims(spec, {window, gap_limit, threads, format_of(format)}));
      },
      py::arg("spec"), py::arg("window") = 2000, py::arg("gap_limit") = 400, py::arg("threads") = 1,
      py::arg("format") = "json");
  m.def(
      "cmd_measure",
      [](const std::string& spec, int window, int samples, std::uint64_t seed, const std::string& format) {
        MeasureOptions opt;
        opt.window = window;
        opt.samples = samples;
        opt.seed = seed;
        opt.format = format_of(format);
        return command_tuple(cmd_measure(spec, opt));
      },
      py::arg("spec"), py::arg("window") = 2000, py::arg("samples") = 0, py::arg("seed") = 1,
      py::arg("format") = "json");
  m.def(
      "cmd_oracle",
      [](const std::string& spec, int max_depth, int pairs_depth, const std::string& format) {
        OracleOptions opt;
        opt.max_depth = max_depth;
        opt.pairs_depth = pairs_depth;
        opt.format = format_of(format);
        return command_tuple(cmd_oracle(spec, opt));
      },
      py::arg("spec"), py::arg("max_depth") = 6, py::arg("pairs_depth") = 5, py::arg("format") = "json");
  m.def(
      "cmd_render",
      [](const std::string& spec, int level, int width, const std::string& out) {
        RenderOptions opt;
        opt.level = level;
        opt.width = width;
        opt.out = out;
        return command_tuple(cmd_render(spec, opt));
      },
      py::arg("spec"), py::arg("level") = 3, py::arg("width") = 512, py::arg("out") = "-");
}
