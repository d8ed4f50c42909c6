// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "fqe/descent.hpp"
#include "fqe/io.hpp"
#include "fqe/lcu.hpp"
#include "fqe/noise.hpp"
#include "fqe/oracle.hpp"
#include "fqe/perturbation.hpp"
#include "fqe/vqe.hpp"
#include "support.hpp"

using namespace fqe;
using namespace fqe::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// 1. LCU circuit against direct application of I - gamma H.

Outcome circuit_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> gam(0.1, 1.0);
  double worst_infidelity = 0.0, worst_ps = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int terms = 2 + static_cast<int>(rng() % 63);
    const auto h = random_sum(n, terms, rng, 1.0 / std::sqrt(static_cast<double>(terms)));
    const double gamma = gam(rng);
    const auto x = random_state(n, rng);
    const auto hg = gradient_operator(h, gamma);
    const auto d = decompose(hg);
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n) - gamma * kron_matrix(h);
    const Eigen::VectorXcd y = dense * as_vector(x);
    const double ps = y.squaredNorm() / (d.big_c * d.big_c * static_cast<double>(d.slots()));
    const auto expected = as_state(y.normalized(), n);
    for (const auto path : {LcuPath::kComposite, LcuPath::kProjected}) {
      const auto out = lcu_step(x, d, {path});
      worst_infidelity = std::max(worst_infidelity, 1.0 - out.next_state.fidelity(expected));
      worst_ps = std::max(worst_ps, std::abs(out.success_probability - ps));
    }
  }
  return {worst_infidelity <= 1e-10 && worst_ps <= 1e-10,
          "200 instances, both LCU paths; max infidelity " + fmt(worst_infidelity, 3) + ", max |dP_s| " +
              fmt(worst_ps, 3)};
}

// ---------------------------------------------------------------------------
// 2. Jordan-Wigner spectra against the Fock-space matrix.

Outcome jw_correctness() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto op = hamiltonian_from_integrals(random_integrals(n, rng));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(oracle::fock_matrix(op, n), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> b(kron_matrix(jordan_wigner(op, n)), Eigen::EigenvaluesOnly);
    worst = std::max(worst, (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-9, "50 random tables (1-4 spin-orbitals); max eigenvalue gap " + fmt(worst, 3)};
}

// ---------------------------------------------------------------------------
// 3. H2 at 0.7314 Angstrom.

Outcome h2_reproduction() {
  const auto loaded = io::load_hamiltonian(data_path("h2_0.7314.json"));
  const double exact = oracle::dense_ground(loaded.h).energy;
  const auto trace = run(loaded.h, hartree_fock_state(4, 2), {});
  const bool table_ok = std::abs(exact + 1.1373) <= 5e-4;
  const bool fqe_ok = trace.converged && std::abs(trace.final_energy() - exact) <= kChemicalPrecision;
  return {table_ok && fqe_ok, "diagonalization " + fmt(exact, 8) + " (reference -1.1373), FQE " +
                                  fmt(trace.final_energy(), 8) + " after " + std::to_string(trace.iterations()) +
                                  " iterations"};
}

// ---------------------------------------------------------------------------
// 4 and 5. Convergence-rate law and the supplemental error bound share the
// same 100 instances.

struct RateInstance {
  double ratio = 0.0;
  double observed_ratio = 0.0;
  double slope = 0.0;
  double expected_slope = 0.0;
  int bound_violations = 0;
  int floor_rows = 0;              // rows whose error sits at the round-off floor
  double worst_bound_ratio = 0.0;  // max |E_k - l1| / bound above the floor
};

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

const std::vector<RateInstance>& rate_instances() {
  static const std::vector<RateInstance> cache = [] {
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> ratio_dist(0.6, 0.9);
    std::vector<RateInstance> out;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 6);
      RateInstance r;
      r.ratio = ratio_dist(rng);
      const auto h = contraction_instance(n, r.ratio, rng);
      const auto sys = oracle::eigensystem(h);
      const auto ground = as_vector(sys.vector(0));
      const auto x0 = random_state(n, rng, true);

      // Residual: norm of the component orthogonal to the ground state.
      std::vector<double> residual{(as_vector(x0) - ground.dot(as_vector(x0)) * ground).norm()};
      DescentConfig cfg;
      cfg.max_iters = 400;
      cfg.threshold = 1e-300;
      const auto trace = run(h, x0, cfg, nullptr, [&](int, const StateVector& s) {
        const auto v = as_vector(s);
        residual.push_back((v - ground.dot(v) * ground).norm());
      });

      // Geometric ratio after a burn-in of 10, over the iterations whose
      // residual is still above round-off.
      std::size_t last = 10;
      while (last + 1 < residual.size() && residual[last + 1] > 1e-9) ++last;
      r.observed_ratio = std::pow(residual[last] / residual[10], 1.0 / static_cast<double>(last - 10));

      // Iterations to reach residual eps, against log(1/eps).
      std::vector<double> logs, iters;
      for (double e = -2.0; e >= -8.0; e -= 0.5) {
        const double eps = std::pow(10.0, e);
        const auto hit = std::find_if(residual.begin(), residual.end(), [&](double v) { return v <= eps; });
        if (hit == residual.end()) break;
        logs.push_back(std::log(1.0 / eps));
        iters.push_back(static_cast<double>(hit - residual.begin()));
      }
      r.slope = logs.size() >= 3 ? fit_slope(logs, iters) : std::numeric_limits<double>::quiet_NaN();
      r.expected_slope = 1.0 / std::log(1.0 / r.ratio);

      const auto spectrum = sys.values();
      const auto overlaps = sys.overlap_magnitudes(x0);
      // Energy errors below 1e-13 are double-precision noise and cannot be
      // compared with bounds that shrink geometrically without limit.
      for (const auto& rec : trace.records) {
        const double err = std::abs(rec.energy - spectrum[0]);
        if (err <= 1e-13) {
          ++r.floor_rows;
          continue;
        }
        const double bound = error_bound(spectrum, overlaps, cfg.gamma, rec.iter);
        if (err > bound) ++r.bound_violations;
        if (bound > 0.0) r.worst_bound_ratio = std::max(r.worst_bound_ratio, err / bound);
      }
      out.push_back(r);
    }
    return out;
  }();
  return cache;
}

Outcome convergence_rate() {
  int ratio_ok = 0, slope_ok = 0;
  double worst_ratio = 0.0, worst_slope = 0.0;
  for (const auto& r : rate_instances()) {
    const double dr = std::abs(r.observed_ratio / r.ratio - 1.0);
    const double ds = std::isfinite(r.slope) ? std::abs(r.slope / r.expected_slope - 1.0) : 1.0;
    worst_ratio = std::max(worst_ratio, dr);
    worst_slope = std::max(worst_slope, ds);
    if (dr <= 0.10) ++ratio_ok;
    if (ds <= 0.15) ++slope_ok;
  }
  const auto n = static_cast<int>(rate_instances().size());
  return {ratio_ok == n && slope_ok == n,
          "ratio within 10% on " + std::to_string(ratio_ok) + "/" + std::to_string(n) + " (worst " +
              fmt(100 * worst_ratio, 3) + "%), depth slope within 15% on " + std::to_string(slope_ok) + "/" +
              std::to_string(n) + " (worst " + fmt(100 * worst_slope, 3) + "%)"};
}

Outcome supplemental_bound() {
  int violations = 0, instances_hit = 0, floor_rows = 0;
  double worst = 0.0;
  for (const auto& r : rate_instances()) {
    violations += r.bound_violations;
    floor_rows += r.floor_rows;
    if (r.bound_violations > 0) ++instances_hit;
    worst = std::max(worst, r.worst_bound_ratio);
  }
  return {violations == 0, std::to_string(violations) + " violating iterations on " + std::to_string(instances_hit) +
                               " of " + std::to_string(rate_instances().size()) +
                               " instances; max |E_k - l1| / bound = " + fmt(worst, 4) + "; " +
                               std::to_string(floor_rows) + " rows at the round-off floor not compared"};
}

// ---------------------------------------------------------------------------
// 6. Perturbation theory.

Outcome perturbation() {
  const PauliSum h0(1, {{0.5, PauliString::parse("I")}, {-0.5, PauliString::parse("Z")}});
  const PauliSum hp(1, {{0.1, PauliString::parse("X")}});
  const auto two = second_order(h0, hp, 0);
  const double exact2 = (1.0 - std::sqrt(1.04)) / 2.0;
  const bool two_ok = std::abs(two.e_first_rq + 0.009901) <= 1e-6 && std::abs(exact2 + 0.009902) <= 1e-6;

  const auto loaded = io::load_hamiltonian(data_path("h2_0.7314.json"));
  const auto split = split_diagonal(loaded.h);
  const auto g = unperturbed_ground(split.diagonal, loaded.n_electrons);
  const auto h2 = second_order(split.diagonal, split.off_diagonal, g.index);
  const double h2_exact = oracle::dense_ground(loaded.h).energy;
  const bool table_ok = std::abs(h2.e_zero + 1.1171) <= 5e-4 && std::abs(h2.e_first_rq + 1.1372) <= 5e-4 &&
                        std::abs(h2.e_second_rq + 1.1372) <= 5e-4 && std::abs(h2_exact + 1.1373) <= 5e-4;

  std::mt19937_64 rng(1006);
  int ordered = 0;
  std::map<int, std::pair<int, int>> by_n;  // qubits -> (ordered, total)
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto inst = perturbation_instance(n, 0.1, rng);
    const auto r = second_order(inst.h0, inst.hp, inst.n);
    const double lmin = oracle::dense_ground(inst.h0 + inst.hp).energy;
    const double d0 = std::abs(r.e_zero - lmin), d1 = std::abs(r.e_first_rq - lmin), d2 = std::abs(r.e_second_rq - lmin);
    const bool ok = d2 <= d1 && d1 <= d0;
    ordered += ok;
    by_n[n].first += ok;
    ++by_n[n].second;
  }
  std::string breakdown;
  for (const auto& [n, c] : by_n) {
    breakdown += (breakdown.empty() ? "" : ", ") + std::to_string(n) + "q " + std::to_string(c.first) + "/" +
                 std::to_string(c.second);
  }
  const bool order_ok = ordered * 100 >= 95 * trials;
  return {two_ok && table_ok && order_ok,
          "2x2 first-order " + fmt(two.e_first_rq, 6) + " vs exact " + fmt(exact2, 6) + "; H2 (zero, first, second, exact) = (" +
              fmt(h2.e_zero, 5) + ", " + fmt(h2.e_first_rq, 5) + ", " + fmt(h2.e_second_rq, 5) + ", " + fmt(h2_exact, 5) +
              "); ordering holds in " + std::to_string(ordered) + "/" + std::to_string(trials) + " [" + breakdown + "]"};
}

// ---------------------------------------------------------------------------
// 7. Noise robustness on H2.

Outcome noise_robustness() {
  const auto loaded = io::load_hamiltonian(data_path("h2_0.7314.json"));
  const auto x0 = hartree_fock_state(4, 2);
  DescentConfig cfg;
  const auto reference = run(loaded.h, x0, cfg);
  std::string detail;
  bool pass = true;
  for (const auto kind : {NoiseKind::kUniform, NoiseKind::kGaussian}) {
    for (const double amp : {0.01, 0.1}) {
      int within = 0, flagged = 0;
      for (int seed = 0; seed < 100; ++seed) {
        NoiseConfig nc;
        nc.ham_kind = nc.state_kind = kind;
        nc.ham_amp = nc.state_amp = amp;
        nc.seed = substream_seed(7, static_cast<std::uint64_t>(seed));
        NoiseInjector inj(nc);
        const auto a = assess_noisy_run(run(loaded.h, x0, cfg, &inj), reference);
        within += a.within_precision;
        flagged += a.flagged();
      }
      const bool ok = amp < 0.05 ? within >= 90 : flagged >= 90;
      pass = pass && ok;
      detail += (detail.empty() ? "" : "; ") + to_string(kind) + ":" + fmt(amp) + " within " + std::to_string(within) +
                "/100, flagged " + std::to_string(flagged) + "/100";
    }
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8 and 9. Bundled molecules. Traces are shared between the two criteria.

struct Molecule {
  std::string name;
  PauliSum h;
  int electrons = 0;
  double oracle = 0.0;
  IterationTrace fqe;
};

const Molecule& molecule(const std::string& file) {
  static std::map<std::string, Molecule> cache;
  if (auto it = cache.find(file); it != cache.end()) return it->second;
  const auto loaded = io::load_hamiltonian(data_path(file));
  Molecule m{file, loaded.h, loaded.n_electrons.value(), 0.0, {}};
  m.oracle = oracle::sector_ground(m.h, m.electrons).energy;
  m.fqe = run(m.h, hartree_fock_state(m.h.n_qubits(), m.electrons), {});
  return cache.emplace(file, std::move(m)).first->second;
}

/// First row within `target` of `energy`, or -1.
int first_within(const IterationTrace& t, double energy, double target) {
  for (const auto& r : t.records)
    if (std::abs(r.energy - energy) <= target) return r.iter;
  return -1;
}

Outcome fqe_vs_vqe() {
  const double target = 1e-3;
  bool pass = true;
  std::string detail;
  for (const std::string file : {"lih_1.5065.json", "h2o_1.0812.json", "nh3_0.4033.json"}) {
    const auto& m = molecule(file);
    const auto x0 = hartree_fock_state(m.h.n_qubits(), m.electrons);
    const int fqe_hit = first_within(m.fqe, m.oracle, target);

    // VQE only needs to run as long as FQE took: anything later loses.
    VqeConfig slow;
    slow.gamma = 1e-3;
    slow.seed = 1;
    slow.max_iters = std::max(1, fqe_hit);
    const int vqe_hit = fqe_hit < 0 ? -1 : first_within(vqe_run(m.h, x0, slow), m.oracle, target);
    const bool faster = fqe_hit >= 0 && (vqe_hit < 0 || fqe_hit < vqe_hit);

    VqeConfig fast = slow;
    fast.gamma = 1e-2;
    fast.max_iters = 500;
    const auto fast_trace = vqe_run(m.h, x0, fast);
    const int fast_hit = first_within(fast_trace, m.oracle, target);
    const bool non_convergent = !std::isfinite(fast_trace.final_energy()) ||
                                std::abs(fast_trace.final_energy() - m.oracle) > target;
    pass = pass && faster && non_convergent;
    detail += (detail.empty() ? "" : "; ") + m.name + ": FQE hits at " + std::to_string(fqe_hit) + ", VQE(1e-3) " +
              (vqe_hit < 0 ? "not within " + std::to_string(slow.max_iters) : "at " + std::to_string(vqe_hit)) +
              ", VQE(1e-2) " + (non_convergent ? "non-convergent" : "converged") + " (final error " +
              fmt(fast_trace.final_energy() - m.oracle, 3) +
              (fast_hit >= 0 ? ", first within target at " + std::to_string(fast_hit) : "") + ")";
  }
  return {pass, detail};
}

Outcome larger_molecules() {
  struct Published {
    std::string file;
    double fqe, exact;
    int iterations;
  };
  bool pass = true;
  std::string detail;
  for (const auto& p : {Published{"h2o_1.0812.json", -74.94, -74.93, 120}, Published{"nh3_0.4033.json", -55.525, -55.526, 80}}) {
    const auto& m = molecule(p.file);
    const bool ok = m.fqe.converged && std::abs(m.fqe.final_energy() - m.oracle) <= kChemicalPrecision;
    const bool published = std::abs(m.oracle - p.exact) <= 5e-3;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + m.name + ": oracle " + fmt(m.oracle, 8) + ", FQE " +
              fmt(m.fqe.final_energy(), 8) + " after " + std::to_string(m.fqe.iterations()) + " iterations (published " +
              fmt(p.exact) + " / " + fmt(p.fqe) + " after ~" + std::to_string(p.iterations) + ": " +
              (published ? "matched" : "not reproducible with the bundled integrals") + ")";
  }
  return {pass, detail};
}

}  // namespace

int main() {
  std::cout << "note: energies are compared with published values only where the bundled integral data\n"
               "      matches their source; H2 and LiH do, H2O and NH3 do not, so criterion 9 checks\n"
               "      FQE against exact diagonalization of the bundled Hamiltonians instead.\n";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 circuit/direct equivalence", circuit_equivalence},
      {"2 Jordan-Wigner spectra", jw_correctness},
      {"3 H2 reproduction", h2_reproduction},
      {"4 convergence-rate law", convergence_rate},
      {"5 supplemental error bound", supplemental_bound},
      {"6 perturbation theory", perturbation},
      {"7 noise robustness", noise_robustness},
      {"8 FQE vs VQE ordering", fqe_vs_vqe},
      {"9 H2O/NH3 figures (oracle-relative)", larger_molecules},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
