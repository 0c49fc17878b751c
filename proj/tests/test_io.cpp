#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "billiards/commands.hpp"
#include "billiards/errors.hpp"
#include "billiards/io.hpp"
#include "doctest.h"

using namespace billiards;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("billiards_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 8.334711621820917, -1e-300, 6.02e23}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("field dump round trip") {
  const auto dir = scratch("dump");
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(ellipse_shape(0.3), 700));
  std::vector<double> w(grid->size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + std::sin(3.0 * grid->points[i].x) * std::cos(grid->points[i].y);
  const auto f = field_from_weights(grid, w);
  {
    std::ofstream os(dir / "f.dat");
    write_field_dump(os, "# test", f);
  }
  const auto d = read_field_dump((dir / "f.dat").string());
  CHECK(d.n_inside == 700);
  CHECK(long(d.values.size()) == long(d.nx) * d.ny);
  const auto inside = d.inside();
  REQUIRE(inside.size() == 700);
  // row-major order equals the grid's storage order
  for (std::size_t i = 0; i < inside.size(); ++i) CHECK(inside[i] == f.rho[i]);
  CHECK(std::abs(shannon_entropy(inside) - shannon_entropy(f)) < 1e-12);
  CHECK(d.xmin == grid->xmin());
  CHECK_THROWS_AS(read_field_dump((dir / "missing.dat").string()), LookupError);
}

TEST_CASE("trajectory csv round trip") {
  const auto dir = scratch("csv");
  BranchTrajectory t;
  t.id = 3;
  t.parity = {1, -1};
  for (int i = 0; i < 3; ++i) {
    BranchSample s;
    s.param = 0.1 * i;
    s.shape_value = eccentricity(s.param);
    s.k = {4.0 + 0.01 * i, -0.1};
    s.entropy = 7.0 + i / 3.0;
    s.parity = t.parity;
    s.sigma_min = 1e-12;
    t.samples.push_back(s);
  }
  {
    std::ofstream os(dir / "t.csv");
    write_trajectories_csv(os, "# head", {t});
  }
  const auto text = slurp(dir / "t.csv");
  CHECK(text.rfind("# head\nbranch_id,param,eccentricity_or_eps,re_kR,im_kR,entropy_nats,parity_x,"
                   "parity_y,sigma_min,status\n", 0) == 0);
  const auto rows = read_trajectories_csv((dir / "t.csv").string());
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].branch_id == 3);
  CHECK(rows[2].entropy == t.samples[2].entropy);
  CHECK(rows[1].re_k == t.samples[1].k.real());
  CHECK(rows[0].parity_y == "odd");
  CHECK(rows[0].status == "ok");
}

TEST_CASE("resolved config and hash") {
  RunConfig a;
  RunConfig b = a;
  b.out = "elsewhere";
  CHECK(a.hash() == b.hash());
  b.k_hi = 11.0;
  CHECK(a.hash() != b.hash());
  CHECK(a.resolved().find("k_hi = 10\n") != std::string::npos);
  CHECK(std::abs(eccentricity(a.sweep_config().p_lo) - 0.77) < 1e-14);
  CHECK(a.effective_crossing_tol() == 10.0 * a.tol);
}

TEST_CASE("open modes are paired with their dominant closed component") {
  auto grid = std::make_shared<const InteriorGrid>(interior_grid(BoundaryShape::circle(1.0), 200));
  auto [f1, f2] = split_basis(grid);
  const double a = 0.3, b = std::sqrt(1.0 - a * a);
  auto sample = [](const ProbabilityField& f, const std::vector<double>& rho, double s) {
    auto mode = std::make_shared<ModeSolution>();
    mode->field = f;
    BranchSample smp;
    smp.param = 0.25;
    smp.entropy = s;
    smp.tracking_rho = rho;
    smp.mode = std::move(mode);
    return smp;
  };
  SweepResult closed, open;
  closed.branches.resize(2);
  closed.branches[0].id = 0;
  closed.branches[1].id = 1;
  // the intensity overlaps alone would pick branch 0
  closed.branches[0].samples.push_back(sample(f1, f1.rho, 1.0));
  closed.branches[1].samples.push_back(sample(f2, f2.rho, 2.0));
  open.branches.resize(1);
  open.branches[0].samples.push_back(sample(mix_fields(f1, f2, a, b), f1.rho, 3.0));
  const auto cmp = compare_entropies(closed, open, 200);
  REQUIRE(cmp.pairs.size() == 1);
  CHECK(cmp.pairs[0].closed_branch == 1);
  CHECK(cmp.pairs[0].overlap == doctest::Approx(b * b).epsilon(1e-12));
  CHECK(cmp.pairs[0].open_larger_everywhere());
  CHECK(cmp.spread_open < 0.0);
}

TEST_CASE("twolevel command outputs") {
  const auto dir = scratch("tl");
  RunConfig cfg;
  cfg.command = "twolevel";
  cfg.out = dir.string();
  cfg.grid_n = 500;
  std::ostringstream log;
  CHECK(run_command(cfg, log) == 0);
  const auto report = slurp(dir / "report.txt");
  CHECK(report.find("encounter.classification = avoided_crossing") != std::string::npos);
  CHECK(report.rfind(file_header(cfg.hash()), 0) == 0);
  const auto csv = slurp(dir / "trajectories.csv");
  CHECK(csv.rfind(file_header(cfg.hash()), 0) == 0);
  CHECK(fs::exists(dir / "config.resolved"));
  CHECK(fs::exists(dir / "trajectories.dat"));
}

TEST_CASE("field command on the circle ground mode") {
  const auto dir = scratch("field");
  RunConfig cfg;
  cfg.command = "field";
  cfg.shape = "circle";
  cfg.k_lo = 2.0;
  cfg.k_hi = 3.0;
  cfg.branch = 0;
  cfg.grid_n = 800;
  cfg.out = dir.string();
  std::ostringstream log;
  CHECK(cmd_field(cfg, log) == 0);
  const auto d = read_field_dump((dir / "field_0.dat").string());
  const auto v = d.inside();
  double sum = 0.0;
  for (double x : v) {
    CHECK(x >= 0.0);
    sum += x;
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  // the header carries the in-memory entropy
  std::ifstream in(dir / "field_0.dat");
  std::string head;
  std::getline(in, head);
  const auto pos = head.find("entropy=");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(head.substr(pos + 8)) - shannon_entropy(v)) < 1e-12);

  cfg.branch = 5;
  CHECK_THROWS_AS(cmd_field(cfg, log), LookupError);
}

}
