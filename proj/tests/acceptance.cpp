// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "ars2d/distance.hpp"
#include "ars2d/fixtures.hpp"
#include "ars2d/h0.hpp"
#include "ars2d/report.hpp"
#include "support.hpp"

using namespace ars2d;
using testing_support::load_graph;

namespace {

// Tolerances and budgets.
constexpr double kAxisTol = 0.02;       // d((0,0),(0.5,0)) relative
constexpr double kTransverseTol = 0.05; // d((0,0),(0,0.5)) relative
constexpr double kShootTol = 1e-4;      // oracle endpoint
constexpr double kExponentTol = 0.05;
constexpr double kFdTol = 1e-5;
constexpr double kHamiltonianTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int n, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    out.pass = false;
    out.detail << " [over budget " << budget_s << " s]";
  }
  if (!out.pass) ++failures;
  std::cout << "criterion " << n << ": " << (out.pass ? "PASS" : "FAIL") << "  " << title << " -" << out.detail.str()
            << " (" << secs << " s)" << std::endl;
}

}  // namespace

int main() {
  criterion(1, "genus-4 example graphs compare", 1.0, [](Outcome& o) {
    const auto ab = equivalent(load_graph("fig3a"), load_graph("fig3b"));
    const auto ac = equivalent(load_graph("fig3a"), load_graph("fig3c"));
    const auto f15 = equivalent(load_graph("fig1"), load_graph("fig5"));
    o.require(ab && !ab->flipped, "fig3a ~ fig3b unflipped");
    o.require(!ac, "fig3a !~ fig3c");
    o.require(f15 && f15->flipped, "fig1 ~ fig5 flipped");
    o.detail << " 3a/3b " << (ab ? "EQUIVALENT" : "NOT-EQUIVALENT") << ", 3a/3c " << (ac ? "EQUIVALENT" : "NOT-EQUIVALENT")
             << ", 1/5 " << (f15 ? "EQUIVALENT" : "NOT-EQUIVALENT") << (f15 && f15->flipped ? " flipped" : "");
  });

  criterion(2, "Euler-number formula", 10.0, [](Outcome& o) {
    const int e1 = euler_number(load_graph("fig1")), e5 = euler_number(load_graph("fig5"));
    o.require(e1 == 3, "fig1 = 3");
    o.require(e5 == -3, "fig5 = -3");
    std::mt19937 rng(2024);
    int bad = 0;
    for (int k = 0; k < 100; ++k) {
      const LabelledGraph g = testing_support::random_graph(rng);
      if (euler_number(flip(g)) != -euler_number(g)) ++bad;
    }
    o.require(bad == 0, "flip negates on random graphs");
    o.detail << " fig1 " << e1 << ", fig5 " << e5 << ", random flips violating " << bad << "/100";
  });

  criterion(3, "genus consistency", 1.0, [](Outcome& o) {
    const int c1 = total_chi(load_graph("fig1")), c3 = total_chi(load_graph("fig3a"));
    o.require(c1 == -6 && c3 == -6, "total chi -6");
    o.detail << " fig1 " << c1 << ", fig3a " << c3;
  });

  criterion(4, "revolutions equal summed contributions", 10.0, [](Outcome& o) {
    for (const char* name : {"grushin-torus", "tangency-torus"}) {
      const Structure s(fixture(name));
      for (int res : {256, 512}) {
        const auto curves = analyze_locus(s, res);
        o.detail << " " << name << "@" << res << ":";
        for (const auto& c : curves) {
          int sum = 0;
          std::vector<int> taus;
          for (const auto& t : c.tangencies) {
            sum += t.contribution;
            taus.push_back(t.contribution);
          }
          std::sort(taus.begin(), taus.end());
          const std::vector<int> want = std::string(name) == "grushin-torus" ? std::vector<int>{} : std::vector<int>{-1, 1};
          o.require(c.revolutions && *c.revolutions == sum, "revolutions == sum");
          o.require(taus == want, "tangency multiset");
          o.detail << " " << (c.revolutions ? *c.revolutions : 999) << "=" << sum;
        }
        o.require(curves.size() == 2, "two components");
      }
    }
  });

  criterion(5, "frame-defined tori have Euler number 0", 30.0, [](Outcome& o) {
    for (const char* name : {"grushin-torus", "tangency-torus", "riemannian-torus"}) {
      const AnalysisReport r = analyze(fixture(name));
      o.require(r.euler_number && *r.euler_number == 0, name);
      o.detail << " " << name << " " << (r.euler_number ? std::to_string(*r.euler_number) : "none");
    }
  });

  criterion(6, "Grushin distances", 30.0, [](Outcome& o) {
    const Structure s(fixture("grushin-plane"));
    const GridSolution sol = solve_grid(s, {0, 0}, 512);
    const double along = sol.at({0.5, 0}), across = sol.at({0, 0.5});
    // Oracle: the extremal with covector (1, eta) returns to the axis at
    // t = pi / eta, at height pi / (2 eta^2); eta = sqrt(pi) lands on 0.5.
    const double eta = std::sqrt(std::numbers::pi);
    const AdmissibleCurve shot = geodesic_shoot(s, {0, 0}, {1, eta}, std::numbers::pi / eta, 20000);
    const double miss = norm(shot.endpoint() - Vec2{0, 0.5});
    const double oracle = shot.duration();
    o.require(std::fabs(along - 0.5) <= kAxisTol * 0.5, "axis distance");
    o.require(miss <= kShootTol, "shooting oracle endpoint");
    o.require(std::fabs(across - oracle) <= kTransverseTol * oracle, "transverse distance");
    o.detail << " d(0.5,0)=" << along << ", d(0,0.5)=" << across << " vs oracle " << oracle << " (miss " << miss << ")";
  });

  criterion(7, "Ball-Box exponents", 60.0, [](Outcome& o) {
    const Structure g(fixture("grushin-plane"));
    const Structure f3(fixture("F3"));
    const double tr = ballbox_exponent(g, {0, 0}, {0, 1}, 0.01, 0.16);
    const double ax = ballbox_exponent(g, {0, 0}, {1, 0}, 0.01, 0.16);
    const double tg = ballbox_exponent(f3, {0, 0}, {0, 1}, 0.01, 0.16);
    o.require(std::fabs(tr - 0.5) <= kExponentTol, "Grushin transverse");
    o.require(std::fabs(ax - 1.0) <= kExponentTol, "Grushin axis");
    o.require(std::fabs(tg - 1.0 / 3) <= kExponentTol, "tangency transverse");
    o.detail << " Grushin transverse " << tr << ", axis " << ax << ", tangency " << tg;
  });

  criterion(8, "classification and (H0)", 30.0, [](Outcome& o) {
    const PointClass c1 = classify_point(fixture("F1"), {0, 0});
    const PointClass c2 = classify_point(fixture("F2"), {0, 0});
    const PointClass c3 = classify_point(fixture("F3"), {0, 0});
    o.require(c1 == PointClass::Ordinary && c2 == PointClass::Grushin && c3 == PointClass::Tangency, "origin classes");
    o.detail << " F1 " << to_string(c1) << ", F2 " << to_string(c2) << ", F3 " << to_string(c3) << ";";
    for (const char* name : {"grushin-torus", "tangency-torus", "riemannian-torus"}) {
      const bool ok = analyze(fixture(name)).h0.pass();
      o.require(ok, std::string("(H0) passes on ") + name);
      o.detail << " " << name << (ok ? " pass" : " fail");
    }
    const Operand bad = load_operand(testing_support::data_path("specs/x-squared.json"));
    const bool bad_pass = analyze(*bad.spec).h0.pass();
    o.require(!bad_pass, "(H0) fails on Y = (0, x^2)");
    o.detail << ", x^2 " << (bad_pass ? "pass" : "fail");
  });

  criterion(9, "numerics hygiene", 60.0, [](Outcome& o) {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    int cases = 0, bad = 0;
    double worst = 0.0;
    while (cases < 1000) {
      const Expr e = parse(testing_support::random_expr(rng, 3));
      const double x = coord(rng), y = coord(rng);
      if (std::fabs(e.eval(x, y)) > 1e3) continue;
      const Var v = rng() % 2 ? Var::X : Var::Y;
      const double h = 1e-5;
      const double fd = v == Var::X ? (e.eval(x + h, y) - e.eval(x - h, y)) / (2 * h)
                                    : (e.eval(x, y + h) - e.eval(x, y - h)) / (2 * h);
      const double d = differentiate(e, v).eval(x, y);
      const double err = std::fabs(d - fd) / (1 + std::fabs(d));
      worst = std::max(worst, err);
      if (err > kFdTol) ++bad;
      ++cases;
    }
    o.require(bad == 0, "finite-difference suite");

    const Structure f3(fixture("F3"));
    const Vec2 q0{0.1, 0.2}, p0{0.6, -0.8};
    const double h0 = hamiltonian(f3, q0, p0);
    const AdmissibleCurve c = geodesic_shoot(f3, q0, p0, 1.0, 10000);
    double drift = 0.0;
    for (std::size_t k = 0; k < c.q.size(); ++k) {
      drift = std::max(drift, std::fabs(hamiltonian(f3, c.q[k], c.covector[k]) - h0) / h0);
    }
    o.require(drift <= kHamiltonianTol, "Hamiltonian drift");

    bool stable = true;
    for (const char* name : {"grushin-torus", "tangency-torus", "riemannian-torus", "F2", "F3"}) {
      const AnalysisReport a = analyze(fixture(name), 256), b = analyze(fixture(name), 512);
      stable = stable && a.curves.size() == b.curves.size() && a.tau_total == b.tau_total &&
               a.euler_number == b.euler_number && a.total_chi == b.total_chi && a.graph == b.graph;
      for (std::size_t k = 0; stable && k < a.curves.size(); ++k) {
        const auto& ca = a.curves[k];
        const auto& cb = b.curves[k];
        stable = ca.revolutions == cb.revolutions && ca.tangencies.size() == cb.tangencies.size();
        for (std::size_t j = 0; stable && j < ca.tangencies.size(); ++j) {
          stable = ca.tangencies[j].contribution == cb.tangencies[j].contribution;
        }
      }
    }
    o.require(stable, "resolution doubling");
    o.detail << " derivative cases " << cases << " (worst rel err " << worst << "), H drift " << drift
             << ", integer outputs at 256 vs 512 " << (stable ? "identical" : "differ");
  });

  return failures;
}
