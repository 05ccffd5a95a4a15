// One PASS/FAIL line per acceptance criterion. Criteria 6-10 run the shipped
// experiment recipes through the command-line binary, twice.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "elastica/analyze.hpp"
#include "elastica/energy.hpp"
#include "elastica/io.hpp"
#include "support.hpp"

using namespace elastica;
using namespace elastica::testing;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v, double seconds) {
  fmt::print("{} criterion {:>2}: {} ({}; {:.2f} s)\n", v.pass ? "PASS" : "FAIL", id, name,
             v.detail, seconds);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

double timed(const std::function<Verdict()>& f, Verdict& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion(int id, const std::string& name, double limit_s, const std::function<Verdict()>& f) {
  Verdict v;
  const double s = timed(f, v);
  if (s > limit_s) {
    v.pass = false;
    v.detail += fmt::format("; over the {:.0f} s budget", limit_s);
  }
  report(id, name, v, s);
}

ClosedCurve displaced(const ClosedCurve& c, const VertexField& d, double h) {
  std::vector<Vec2> pts(c.points().begin(), c.points().end());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += h * d[i];
  return ClosedCurve::from_points(std::move(pts));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Run {
  int code = -1;
  double seconds = 0.0;
};

Run run_recipe(const std::string& name, const fs::path& out_dir) {
  const std::string cmd = fmt::format("ELASTICA_LOG=error '{}' run --recipe '{}/{}.json' --out-dir '{}' > /dev/null",
                                      ELASTICA_BIN, ELASTICA_EXPERIMENTS, name, out_dir.string());
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  Run r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t arc_vertices(const BoundaryArc& a, std::size_t n) { return (a.end + n - a.start) % n + 1; }

}  // namespace

int main() {
  criterion(1, "gradient matches central differences", 5.0, [] {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const ClosedCurve c = random_smooth_curve(rng, 128);
      const VertexField d = random_direction(rng, c.size());
      const double h = 1e-6 * bounds(c).diagonal();
      const double fd = (kernel::bending_energy(displaced(c, d, h).points()) -
                         kernel::bending_energy(displaced(c, d, -h).points())) /
                        (2.0 * h);
      const double exact = directional_derivative(c, d);
      worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
    }
    return Verdict{worst < 1e-6, fmt::format("worst relative error {:.3g} over 50 pairs", worst)};
  });

  criterion(2, "circle energy", 1.0, [] {
    double worst = std::abs(bending_energy(circle({0, 0}, 1.0, 512)) - 2.0 * kPi) / (2.0 * kPi);
    for (double r : {0.5, 1.0, 3.0}) {
      worst = std::max(worst, relative(bending_energy(circle({0, 0}, r, 512)) * r, 2.0 * kPi));
    }
    return Verdict{worst < 1e-3, fmt::format("worst relative error {:.3g}", worst)};
  });

  criterion(3, "scaling law", 1.0, [] {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const ClosedCurve c = random_smooth_curve(rng, 256);
      const double w = bending_energy(c);
      for (double lambda : {0.5, 2.0, 10.0}) {
        worst = std::max(worst, relative(bending_energy(scale_about(c, {0.3, -0.1}, lambda)) * lambda, w));
      }
    }
    return Verdict{worst < 1e-12, fmt::format("worst relative error {:.3g}", worst)};
  });

  criterion(4, "length bound in the unit disk", 5.0, [] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;  // max of L / ((2 pi)^3 W)
    int outside = 0;
    for (int k = 0; k < 200; ++k) {
      const double r0 = 0.05 + 0.45 * u(rng);
      const double a = 2.0 * kPi * u(rng);
      const Vec2 center = 0.3 * u(rng) * Vec2(std::cos(a), std::sin(a));
      const ClosedCurve c = random_smooth_curve(rng, 256, r0, center);
      for (const auto& p : c.points()) outside += p.norm() > 1.0 ? 1 : 0;
      worst = std::max(worst, length(c) / (std::pow(2.0 * kPi, 3) * bending_energy(c)));
    }
    return Verdict{outside == 0 && worst <= 1.05,
                   fmt::format("max L / ((2 pi)^3 W) = {:.3g}, {} vertices outside", worst, outside)};
  });

  criterion(5, "bh inequality", 10.0, [] {
    double circle_dev = 0.0;
    for (double r : {0.5, 1.0, 3.0}) {
      circle_dev = std::max(circle_dev, std::abs(bh_ratio(circle({0, 0}, r, 1024)) - 1.0));
    }
    const double ellipse = bh_ratio(ellipse_curve(2.0, 1.0, 2048));
    std::mt19937_64 rng(13);
    double lowest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) lowest = std::min(lowest, bh_ratio(random_smooth_curve(rng, 512)));
    return Verdict{circle_dev <= 2e-3 && ellipse > 1.0 && lowest >= 1.0 - 5e-3,
                   fmt::format("circles |r-1| <= {:.2g}, ellipse {:.6f}, random min {:.6f}",
                               circle_dev, ellipse, lowest)};
  });

  const fs::path root = fs::temp_directory_path() /
                        fmt::format("elastica_acceptance_{}", std::random_device{}());
  const fs::path first = root / "first";
  const fs::path second = root / "second";
  fs::create_directories(first);

  Run disk_run;
  criterion(6, "disk minimization", 60.0, [&] {
    disk_run = run_recipe("disk", first);
    if (disk_run.code != 0) return Verdict{false, fmt::format("exit code {}", disk_run.code)};
    const SolveReport rep = io::solve_report_from_json(io::read_json(first / "disk/report.json"));
    const StructureReport s =
        io::structure_report_from_json(io::read_json(first / "disk/structure.json"));
    const std::size_t n = rep.final_curve.size();
    std::size_t covered = 0;
    for (const auto& a : s.contacts.boundary_arcs) covered += arc_vertices(a, n);
    const double w_err = relative(rep.final_W, 2.0 * kPi);
    const double coverage = static_cast<double>(covered) / static_cast<double>(n);
    return Verdict{rep.termination == Termination::Converged && w_err < 1e-2 &&
                       rep.final_violation < 1e-4 && coverage >= 0.95,
                   fmt::format("{}, W = {:.8f} (rel {:.2g}), violation {:.2g}, contact {:.1f}%",
                               to_string(rep.termination), rep.final_W, w_err,
                               rep.final_violation, 100.0 * coverage)};
  });

  {
    Verdict v{true, ""};
    double seconds = 0.0;
    for (const char* name : {"stadium", "ellipse"}) {
      const Run r = run_recipe(name, first);
      seconds += r.seconds;
      if (!v.detail.empty()) v.detail += "; ";
      if (r.code != 0) {
        v = {false, v.detail + fmt::format("{} exit code {}", name, r.code)};
        continue;
      }
      const SolveReport rep =
          io::solve_report_from_json(io::read_json(first / name / "report.json"));
      const StructureReport s =
          io::structure_report_from_json(io::read_json(first / name / "structure.json"));
      const bool ok = rep.termination == Termination::Converged && s.is_convex &&
                      s.contacts.boundary_arcs.size() >= 2 && r.seconds <= 90.0;
      v.pass = v.pass && ok;
      v.detail += fmt::format("{}: {}, convex={}, {} contact arcs, {:.1f} s", name,
                              to_string(rep.termination), s.is_convex,
                              s.contacts.boundary_arcs.size(), r.seconds);
    }
    report(7, "convexity and two contacts in convex domains", v, seconds);
  }

  std::optional<StructureReport> drops;
  criterion(8, "two-drops self-contact", 180.0, [&] {
    const Run r = run_recipe("two_drops", first);
    if (r.code != 0) return Verdict{false, fmt::format("exit code {}", r.code)};
    const SolveReport rep = io::solve_report_from_json(io::read_json(first / "two_drops/report.json"));
    drops = io::structure_report_from_json(io::read_json(first / "two_drops/structure.json"));
    int antiparallel = 0;
    for (const auto& c : drops->contacts.self_couples) {
      antiparallel += c.cls == ContactClass::TangentialAntiparallel ? 1 : 0;
    }
    bool index_ok = true;
    for (const auto& [value, count] : drops->index_values) index_ok = index_ok && (value == 0 || value == 1);
    const double ratio = drops->branch_energy_ratio.value_or(std::nan(""));
    return Verdict{rep.termination == Termination::Converged && antiparallel >= 1 &&
                       drops->non_crossing && drops->nested && index_ok &&
                       std::abs(ratio - 1.0) <= 0.05,
                   fmt::format("{}, {} antiparallel couple(s), non_crossing={}, nested={}, "
                               "index in {{0,1}}={}, branch ratio {:.4f}",
                               to_string(rep.termination), antiparallel, drops->non_crossing,
                               drops->nested, index_ok, ratio)};
  });

  criterion(9, "Euler-Lagrange residual on free arcs", 1.0, [&] {
    if (!drops) return Verdict{false, "no two-drops structure report"};
    const FreeArcResidual& f = drops->free_arcs;
    return Verdict{f.vertices > 0 && f.worst_ratio <= 0.05,
                   fmt::format("worst max|2k''+k^3| / max|k|^3 = {:.4f} over {} arcs, {} vertices",
                               f.worst_ratio, f.arcs, f.vertices)};
  });

  criterion(10, "determinism", 400.0, [&] {
    fs::create_directories(second);
    std::vector<std::string> differing;
    std::size_t compared = 0;
    for (const char* name : {"disk", "stadium", "ellipse", "two_drops"}) {
      const Run r = run_recipe(name, second);
      if (r.code != 0) differing.push_back(fmt::format("{} exit code {}", name, r.code));
      for (const auto& entry : fs::directory_iterator(first / name)) {
        const fs::path other = second / name / entry.path().filename();
        ++compared;
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
          differing.push_back((fs::path(name) / entry.path().filename()).string());
        }
      }
    }
    std::string detail = fmt::format("{} files compared", compared);
    for (const auto& d : differing) detail += ", differs: " + d;
    return Verdict{differing.empty() && compared >= 20, detail};
  });

  std::error_code ec;
  fs::remove_all(root, ec);
  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
