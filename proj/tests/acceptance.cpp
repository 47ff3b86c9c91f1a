// End-to-end acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "k3lat/cli.hpp"
#include "oracles.hpp"

using namespace k3lat;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
  double seconds = 0;
};

CliRun cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "k3lat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto t0 = std::chrono::steady_clock::now();
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

/// The step of a JSON report whose description starts with `prefix` and matched.
bool step_ok(const nlohmann::json& report, const std::string& prefix, const std::string& computed_fragment = {}) {
  for (const auto& s : report["steps"]) {
    const auto desc = s["desc"].get<std::string>();
    if (desc.rfind(prefix, 0) != 0) continue;
    if (!s["ok"].get<bool>()) return false;
    if (!computed_fragment.empty() && s["computed"].get<std::string>().find(computed_fragment) == std::string::npos)
      return false;
    return true;
  }
  return false;
}

bool any_step_ok(const nlohmann::json& report, const std::string& fragment) {
  for (const auto& s : report["steps"])
    if (s["desc"].get<std::string>().find(fragment) != std::string::npos && s["ok"].get<bool>()) return true;
  return false;
}

int failures_total = 0;

void report(int id, const std::string& title, const Checks& c, double seconds, double budget) {
  Checks all = c;
  std::ostringstream t;
  t.precision(3);
  t << std::fixed << seconds;
  std::ostringstream b;
  b << budget;
  all.expect(seconds < budget, "runtime " + t.str() + " s exceeds " + b.str() + " s");
  const bool pass = all.failures.empty();
  if (!pass) ++failures_total;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << t.str() << " s)";
  for (const auto& f : all.failures) std::cout << " | " << f;
  std::cout << std::endl;
}

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1() {
  Checks c;
  auto r = cli_run({"--format", "json", "verify", "lemma31"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  if (r.code == 0) {
    auto j = nlohmann::json::parse(r.out);
    c.expect(step_ok(j, "nontrivial isotropic subgroups of discr 3A2", "1 orbit"), "orbit count");
    c.expect(any_step_ok(j, "overlattice determinant"), "overlattice determinant 3");
    c.expect(any_step_ok(j, "overlattice signature"), "overlattice signature (0,0,6)");
    c.expect(any_step_ok(j, "isomorphic to discr E6"), "discriminant <2/3>");
    c.expect(any_step_ok(j, "roots of overlattice vs roots of 3A2"), "72 vs 18 roots");
    c.expect(step_ok(j, "quasi-primitive nontrivial extensions of 3A2", "0"), "zero quasi-primitive extensions");
  }
  report(1, "verify lemma31", c, r.seconds, 5);
}

void criterion2() {
  Checks c;
  auto r = cli_run({"--format", "json", "verify", "lemma32"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  if (r.code == 0) {
    auto j = nlohmann::json::parse(r.out);
    c.expect(step_ok(j, "quasi-primitive extension orbits", "2"), "two quasi-primitive orbits");
    c.expect(step_ok(j, "(d) ell_3", "{6, 4}"), "ell_3 values 6 and 4");
    c.expect(step_ok(j, "(e) supp a1 u supp a2 = G and overlap 4 for every independent pair"),
             "union 8 and overlap 4 for every generator pair");
    c.expect(step_ok(j, "(f) order-27 kernels", "0"), "no order-27 kernel");
    c.expect(step_ok(j, "(g) pattern (3,3)") && j["certificates"].contains("pattern_(3,3)"), "pattern (3,3) rejected");
    c.expect(step_ok(j, "(g) pattern (4,1)") && j["certificates"].contains("pattern_(4,1)"), "pattern (4,1) rejected");
    c.expect(step_ok(j, "(c) order-3 extension is quasi-primitive") && step_ok(j, "(c) order-9 extension is quasi-primitive"),
             "root enumeration confirms both survivors");
  }
  report(2, "verify lemma32", c, r.seconds, 600);
}

void criterion3() {
  Checks c;
  auto r = cli_run({"--format", "json", "verify", "prop33"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  if (r.code == 0) {
    auto j = nlohmann::json::parse(r.out);
    c.expect(step_ok(j, "(a) L = 2E8+3U", "(3,0,19)"), "L signature (3,19)");
    c.expect(step_ok(j, "(b) complement T", "rank 4, (2,0,2)"), "T rank 4, signature (2,2)");
    c.expect(step_ok(j, "(d) ell_3(discr T)", "forced 4"), "ell_3 forced to 4");
    c.expect(step_ok(j, "(e) c = identity on Sigma", "negative definite"), "S^{-c} negative definite");
    c.expect(step_ok(j, "(g) positive squares"), "signature contradiction");
    c.expect(j["certificates"].contains("scope"), "scope note");
  }
  // The identification S^{-c} = 8A2 + <-4>, checked literally on the involution
  // c = identity on 8A2, l1 <-> l2 on U(2).
  const double extra = timed([&] {
    const Lattice s = parse_lattice("8A2+U(2)");
    IntegerMatrix m = IntegerMatrix::identity(18);
    m(16, 16) = 0;
    m(17, 17) = 0;
    m(16, 17) = 1;
    m(17, 16) = 1;
    const Lattice minus = eigenlattices(InvolutionSpec{s, m}).minus.induced();
    const Lattice claimed = parse_lattice("8A2+<-4>");
    std::ostringstream why;
    why << "S^{-c} has rank " << minus.rank() << ", det " << minus.determinant() << ", signature " << minus.signature()
        << "; 8A2+<-4> has rank " << claimed.rank() << ", det " << claimed.determinant();
    c.expect(minus.rank() == claimed.rank() && minus.determinant() == claimed.determinant() &&
                 minus.signature() == claimed.signature(),
             why.str());
  });
  report(3, "verify prop33", c, r.seconds + extra, 30);
}

void criterion4() {
  Checks c;
  auto r = cli_run({"--format", "json", "verify", "theorem"});
  c.expect(r.code == 0, "exit code " + std::to_string(r.code));
  if (r.code == 0) {
    auto j = nlohmann::json::parse(r.out);
    c.expect(j["certificates"]["components"] == nlohmann::json({"lemma31", "lemma32", "prop33"}),
             "component list " + j["certificates"]["components"].dump());
  }
  report(4, "verify theorem", c, r.seconds, 600 + 5 + 30);
}

void criterion5() {
  Checks c;
  const double seconds = timed([&] {
    auto r = cli_run({"cases", "--degree", "4", "--genus", "1"});
    c.expect(r.code == 0, "exit code " + std::to_string(r.code));
    std::vector<std::string> heads;
    std::istringstream in(r.out);
    for (std::string line; std::getline(in, line);)
      if (!line.empty() && line[0] == '(') heads.push_back(line);
    c.expect(heads == std::vector<std::string>{"(1,1): real-structure", "(2,2): excluded-by-count",
                                               "(4,4): reduces-to-cusp-curve, k = 8"},
             "degree 4 genus 1 split: " + r.out);
    for (std::int64_t g = 0; g <= 100; ++g) {
      auto v4 = case_analysis(4, g);
      c.expect(v4.size() == 3 && v4[1].verdict == Verdict::excluded_by_count, "degree 4 (2,2) branch at g = " + std::to_string(g));
      auto v3 = case_analysis(3, g);
      if (g >= 1) {
        const auto& w = v3[1].witnesses.at(0);
        c.expect(v3[1].verdict == Verdict::excluded_by_count && w.lhs == g + 2 * 3 - 2 + 2 * g && w.rhs == 4,
                 "degree 3 birational branch at g = " + std::to_string(g));
      }
      auto v2 = case_analysis(2, g);
      const auto& w2 = v2[1].witnesses.at(0);
      c.expect(w2.rhs == 1 && w2.lhs == g + critical_point_count(g, 2) && w2.holds() == (3 * g + 2 <= 1),
               "degree 2 bound g + k <= 1 at g = " + std::to_string(g));
    }
  });
  report(5, "case analysis, g <= 100", c, seconds, 1);
}

void criterion6() {
  Checks c;
  const double seconds = timed([&] {
    std::mt19937_64 rng(2024);
    std::size_t bad = 0;
    for (int trial = 0; trial < 500; ++trial) {
      IntegerMatrix g = oracle::random_even_gram(1 + trial % 6, rng);
      if (Integer(discr(Lattice(g)).form().order()) != abs(oracle::cofactor_determinant(g))) ++bad;
    }
    c.expect(bad == 0, std::to_string(bad) + " of 500 lattices with |discr| != |det|");

    std::mt19937_64 rng2(12);
    std::size_t snf_bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
      IntegerMatrix m(1 + rng2() % 5, 1 + rng2() % 5);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = static_cast<long>(rng2() % 9) - 4;
      SmithForm s = smith_normal_form(m);
      bool ok = s.u * m * s.v == s.d && abs(determinant(s.u)) == 1 && abs(determinant(s.v)) == 1;
      auto d = s.diagonal();
      for (std::size_t i = 0; i + 1 < d.size(); ++i)
        ok = ok && (d[i] == 0 ? d[i + 1] == 0 : d[i + 1] % d[i] == 0);
      if (!ok) ++snf_bad;
    }
    c.expect(snf_bad == 0, std::to_string(snf_bad) + " SNF identity failures");

    const std::pair<const char*, std::size_t> expected[] = {{"A2", 6}, {"D4", 24}, {"E6", 72}, {"E7", 126}, {"E8", 240}};
    for (const auto& [name, count] : expected) {
      const Lattice l = parse_lattice(name);
      const std::size_t lib = roots(l).size();
      const std::size_t box = oracle::box_count_norm_two(Integer(-1) * l.gram());
      c.expect(lib == count && box == count,
               std::string(name) + ": " + std::to_string(lib) + " roots, oracle " + std::to_string(box));
    }

    const Lattice base = parse_lattice("3A2");
    const Discriminant d = discr(base);
    for (const auto& x : isotropic_elements(d.form())) {
      Overlattice o = overlattice(d, make_kernel(d.form(), {x}));
      const Integer idx(o.index);
      c.expect(abs(oracle::cofactor_determinant(o.result.gram())) * idx * idx == 27,
               "determinant law fails for kernel " + to_string(x));
    }
  });
  report(6, "property suite", c, seconds, 120);
}

void criterion7() {
  Checks c;
  const double seconds = timed([&] {
    std::size_t mismatch = 0;
    for (const auto& f : corpus::realifiability_corpus(42, 200))
      if (mobius_realifiable(f).has_value() != (diagonal_image_bidegree(f).delta() == 1)) ++mismatch;
    c.expect(mismatch == 0, std::to_string(mismatch) + " of 200 maps disagree on realifiability and delta = 1");

    std::size_t sturm_bad = 0;
    for (const auto& p : corpus::sturm_corpus(31, 400))
      if (sturm_count(p).count != oracle::real_roots_by_discriminant(p.real_coefficients())) ++sturm_bad;
    c.expect(sturm_bad == 0, std::to_string(sturm_bad) + " Sturm counts disagree with the discriminant oracle");

    std::mt19937_64 rng(9);
    std::size_t crit_bad = 0;
    for (std::size_t d = 1; d <= 6; ++d)
      for (int trial = 0; trial < 100; ++trial) {
        RationalMap f = corpus::random_real_map(rng, d);
        if (Integer(critical_points_with_multiplicity(f)) != critical_point_count(0, static_cast<std::int64_t>(d)))
          ++crit_bad;
      }
    c.expect(crit_bad == 0, std::to_string(crit_bad) + " of 600 real maps without 2d-2 critical points");
  });
  report(7, "Wronskian suite", c, seconds, 60);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      ++failures_total;
      std::cout << "FAIL criterion: uncaught exception: " << e.what() << std::endl;
    }
  }
  std::cout << (failures_total == 0 ? "all criteria passed" : std::to_string(failures_total) + " criterion(s) failed")
            << std::endl;
  return failures_total == 0 ? 0 : 1;
}
