#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "moran/commands.hpp"
#include "moran/render.hpp"
#include "moran/report.hpp"
#include "moran/spec_file.hpp"

using namespace moran;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string golden_path(const std::string& name) { return std::string(MORAN_GOLDEN_DIR) + "/" + name; }

void check_golden(const std::string& name, const std::string& got) {
  if (std::getenv("MORAN_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(golden_path(name), std::ios::binary) << got;
    return;
  }
  const std::string want = read_file(golden_path(name));
  REQUIRE_MESSAGE(!want.empty(), "missing golden file " << name);
  CHECK(got == want);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("moran_test_" + name)).string();
}

// Black pixel runs of one PPM row.
std::vector<std::pair<int, int>> black_runs(const std::string& ppm, int row) {
  std::istringstream in(ppm);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  std::vector<std::pair<int, int>> runs;
  for (int r = 0; r <= row; ++r) {
    for (int x = 0; x < w; ++x) {
      int red = 0, green = 0, blue = 0;
      in >> red >> green >> blue;
      if (r != row) continue;
      const bool black = red == 0;
      if (black && (runs.empty() || runs.back().second != x)) runs.push_back({x, x + 1});
      else if (black) runs.back().second = x + 1;
    }
  }
  return runs;
}

}  // namespace

TEST_CASE("spec files parse and round-trip") {
  const SpecFile spec = load_spec(corpus::data("alt2.json"));
  CHECK(spec.construction.preperiod().size() == 1);
  CHECK(spec.construction.period().size() == 2);
  CHECK(spec.construction.level_at(3) == corpus::alt_c());
  REQUIRE(spec.measure.has_value());
  CHECK_FALSE(spec.uniform_measure);
  CHECK(spec.measure->at(spec.construction, 5)[3] == Rational(3, 8));

  const std::string text = dump_spec(spec.construction, &*spec.measure);
  const SpecFile again = parse_spec(text);
  CHECK(again.measure == spec.measure);
  CHECK(dump_spec(again.construction, &*again.measure) == text);

  const SpecFile bm = load_spec(corpus::data("bm.json"));
  CHECK(bm.uniform_measure);
  CHECK(*bm.measure == ProbAssignment::uniform(bm.construction));
}

TEST_CASE("spec parse errors") {
  auto code = [](const std::string& text) {
    try {
      parse_spec(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::domain_error;
  };
  CHECK(code("{") == ErrorCode::parse_error);
  CHECK(code("[]") == ErrorCode::parse_error);
  CHECK(code(R"({"preperiod": []})") == ErrorCode::parse_error);
  CHECK(code(R"({"period": [{"n": 3, "m": 2}]})") == ErrorCode::parse_error);
  CHECK(code(R"({"period": [{"n": 3, "m": 2, "digits": [[0]]}]})") == ErrorCode::parse_error);
  CHECK(code(R"({"period": [{"n": 3.5, "m": 2, "digits": [[0,0],[1,1]]}]})") == ErrorCode::parse_error);
  CHECK(code(R"({"period": []})") == ErrorCode::empty_period);
  const std::string lv = R"({"period": [{"n": 3, "m": 2, "digits": [[0,0],[1,1]]}], )";
  CHECK(code(lv + R"("measure": {"p": "nonuniform"}})") == ErrorCode::parse_error);
  CHECK(code(lv + R"("measure": {"p": [[2,0,0,1,1]]}})") == ErrorCode::invalid_probability);
  CHECK(code(lv + R"("measure": {"p": [[1,2,0,1,1]]}})") == ErrorCode::invalid_probability);
  CHECK(code(lv + R"("measure": {"p": [[1,0,0,1,2],[1,0,0,1,2]]}})") == ErrorCode::invalid_probability);
  CHECK(code(lv + R"("measure": {"p": [[1,0,0,1,0],[1,1,1,1,1]]}})") == ErrorCode::invalid_probability);
}

TEST_CASE("validate command") {
  const CommandResult ok = cmd_validate(corpus::data("bm.json"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("measure uniform") != std::string::npos);

  const CommandResult digit = cmd_validate(corpus::data("bad_digit.json"));
  CHECK(digit.exit_code == 2);
  CHECK(digit.err.find("level 1") != std::string::npos);
  CHECK(digit.err.find("(3,0)") != std::string::npos);

  const CommandResult sum = cmd_validate(corpus::data("bad_sum.json"));
  CHECK(sum.exit_code == 2);
  CHECK(sum.err.find("level 1") != std::string::npos);
  CHECK(sum.err.find("7/8") != std::string::npos);

  CHECK(cmd_validate(corpus::data("missing.json")).exit_code == 1);
}

TEST_CASE("dims command") {
  const CommandResult res = cmd_dims(corpus::data("bm.json"), {});
  REQUIRE(res.exit_code == 0);
  const RunReport r = report_from_json(res.out);
  REQUIRE(r.dims.has_value());
  CHECK(std::abs(r.dims->lower_box - 1.369070246) < 1e-4);
  CHECK(std::abs(r.dims->upper_box - 1.369070246) < 1e-4);
  CHECK(std::abs(r.dims->lower_dim - 1.0) < 1e-4);
  CHECK(std::abs(r.dims->assouad - 1.630929754) < 1e-4);
  CHECK(r.dims->box.window == 2000);

  const RunReport full = report_from_json(cmd_dims(corpus::data("full.json"), {200, 40}).out);
  for (double v : {full.dims->lower_box, full.dims->upper_box, full.dims->lower_dim, full.dims->assouad}) {
    CHECK(v == 2.0);
  }
  const RunReport unif = report_from_json(cmd_dims(corpus::data("unif.json"), {}).out);
  CHECK(std::abs(unif.dims->lower_box - 1.63093) < 1e-5);
  CHECK(std::abs(unif.dims->upper_box - 1.63093) < 1e-5);

  DimsOptions small;
  small.window = 1;
  CHECK(cmd_dims(corpus::data("bm.json"), small).exit_code == 2);
}

TEST_CASE("measure command") {
  const RunReport bm = report_from_json(cmd_measure(corpus::data("bm.json"), {}).out);
  REQUIRE(bm.measure.has_value());
  CHECK(std::abs(bm.measure->entropy_lower - 1.33890) < 1e-4);
  CHECK(std::abs(bm.measure->entropy_upper - 1.33890) < 1e-4);
  CHECK(bm.measure->msc);
  CHECK(bm.measure->max_boundary_marginal == "2/3");
  CHECK(bm.measure->status == "UNCONDITIONAL");

  const RunReport unif = report_from_json(cmd_measure(corpus::data("unif.json"), {}).out);
  CHECK(std::abs(unif.measure->hausdorff - 1.63093) < 1e-5);
  CHECK(unif.measure->set_dimension_path);

  const RunReport atom = report_from_json(cmd_measure(corpus::data("atom.json"), {}).out);
  CHECK(atom.measure->hausdorff == 0.0);
  CHECK(atom.measure->packing == 0.0);
  CHECK(atom.measure->entropy_upper == 0.0);

  const CommandResult none = cmd_measure(corpus::data("fig1.json"), {});
  CHECK(none.exit_code == 2);
  CHECK(none.err.find("no measure") != std::string::npos);
}

TEST_CASE("oracle command") {
  const CommandResult bm = cmd_oracle(corpus::data("bm.json"), {});
  CHECK(bm.exit_code == 0);
  CHECK(report_from_json(bm.out).oracle->passed);
  CHECK(cmd_oracle(corpus::data("full.json"), {}).exit_code == 0);

  OracleOptions broken;
  broken.pairs_depth = 6;
  broken.nested = [](const Construction& c, int k, int k2, Bound b) {
    LogCount n = nested_count(c, k, k2, b);
    if (k == 3 && k2 == 6) *n.exact += 1;
    return n;
  };
  const CommandResult bad = cmd_oracle(corpus::data("bm.json"), broken);
  CHECK(bad.exit_code == 4);
  CHECK(bad.err.find("gamma") != std::string::npos);
  CHECK(bad.err.find("k=3 k2=6") != std::string::npos);

  OracleOptions tight;
  tight.guard = 10;
  CHECK(cmd_oracle(corpus::data("bm.json"), tight).exit_code == 3);
}

TEST_CASE("render command") {
  RenderOptions opt;
  opt.level = 1;
  opt.width = 300;
  const CommandResult res = cmd_render(corpus::data("bm.json"), opt);
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("P3\n300 300\n255\n", 0) == 0);
  // rects (0,0) and (2,0) fill the bottom half, (1,1) the top half
  CHECK(black_runs(res.out, 0) == std::vector<std::pair<int, int>>{{100, 200}});
  CHECK(black_runs(res.out, 149) == std::vector<std::pair<int, int>>{{100, 200}});
  CHECK(black_runs(res.out, 150) == std::vector<std::pair<int, int>>{{0, 100}, {200, 300}});
  CHECK(black_runs(res.out, 299) == std::vector<std::pair<int, int>>{{0, 100}, {200, 300}});

  RenderOptions full;
  full.level = 3;
  full.width = 64;
  const std::string img = cmd_render(corpus::data("full.json"), full).out;
  CHECK(img.find("255 255 255") == std::string::npos);

  RenderOptions to_file;
  to_file.out = temp_path("fig1.ppm");
  to_file.width = 240;
  CHECK(cmd_render(corpus::data("fig1.json"), to_file).exit_code == 0);
  const std::string fig = read_file(to_file.out);
  CHECK(fig == render_ppm(load_spec(corpus::data("fig1.json")).construction, 3, 240));
  check_golden("fig1_level3_w240.ppm", fig);

  RenderOptions nowhere;
  nowhere.out = "/nonexistent-dir/x.ppm";
  CHECK(cmd_render(corpus::data("bm.json"), nowhere).exit_code == 1);
  RenderOptions huge;
  huge.level = 30;
  CHECK(cmd_render(corpus::data("full.json"), huge).exit_code == 3);
}

TEST_CASE("reports round-trip through JSON") {
  MeasureOptions mo;
  mo.samples = 3;
  for (const std::string& text : {cmd_dims(corpus::data("alt2.json"), {}).out,
                                  cmd_measure(corpus::data("alt2.json"), mo).out,
                                  cmd_oracle(corpus::data("alt2.json"), {}).out}) {
    const RunReport r = report_from_json(text);
    CHECK(to_json(r) == text);
    CHECK(report_from_json(to_json(r)) == r);
  }
  CHECK_THROWS_AS(report_from_json("{\"command\": 3}"), Error);
}

TEST_CASE("csv output is flat") {
  DimsOptions opt;
  opt.format = OutputFormat::csv;
  const std::string csv = cmd_dims(corpus::data("bm.json"), opt).out;
  CHECK(csv.rfind("key,value\ncommand,dims\n", 0) == 0);
  CHECK(csv.find("\ndims.lower_dim,1.0\n") != std::string::npos);
  CHECK(csv.find("\ndims.upper.k_scan,") != std::string::npos);
}

TEST_CASE("golden reports") {
  for (const char* name : {"bm", "tall", "unif", "full", "prod", "alt2"}) {
    CAPTURE(name);
    const std::string spec = corpus::data(std::string(name) + ".json");
    check_golden(std::string(name) + "_dims.json", cmd_dims(spec, {}).out);
    check_golden(std::string(name) + "_measure.json", cmd_measure(spec, {}).out);
  }
  check_golden("bm_oracle.json", cmd_oracle(corpus::data("bm.json"), {}).out);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  DimsOptions one, four;
  four.threads = 4;
  CHECK(cmd_dims(corpus::data("alt2.json"), one).out == cmd_dims(corpus::data("alt2.json"), four).out);
  MeasureOptions mo;
  mo.samples = 8;
  CHECK(cmd_measure(corpus::data("bm.json"), mo).out == cmd_measure(corpus::data("bm.json"), mo).out);
}
