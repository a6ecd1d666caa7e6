// One PASS/FAIL line per acceptance criterion, runtime limits included.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "oscillab/explab.hpp"

using namespace osc;

namespace {

struct Suite {
  std::string name;
  std::function<std::vector<ReportRow>()> run;
};

struct Timed {
  std::vector<ReportRow> rows;
  double seconds = 0;
  std::string error;
};

Timed timed(const Suite& s) {
  Timed t;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    t.rows = s.run();
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

struct Criterion {
  int id;
  std::string title;
  std::string suite;
  std::vector<std::string> metrics;  // empty: every row of the suite
  double limit;                      // seconds
};

bool report(const Criterion& c, const Timed& t) {
  bool ok = t.error.empty() && t.seconds < c.limit;
  std::string detail;
  int used = 0;
  for (const auto& r : t.rows) {
    if (!c.metrics.empty() &&
        std::find(c.metrics.begin(), c.metrics.end(), r.metric) == c.metrics.end())
      continue;
    ++used;
    if (!r.pass) {
      ok = false;
      detail += " " + r.metric + "=" + fmt_double(r.measured) + "(" + r.relation + " " +
                fmt_double(r.reference) + ")";
    }
  }
  if (used == 0) ok = false;
  if (!t.error.empty()) detail += " error: " + t.error;
  std::printf("%s %2d %-34s %8.2fs (limit %gs) rows=%d%s\n", ok ? "PASS" : "FAIL", c.id,
              c.title.c_str(), t.seconds, c.limit, used, detail.c_str());
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Suite> suites = {
      {"exponents", [] { return run_exponents(default_config("exponents")); }},
      {"gauss", [] { return check_gauss_map(default_config("gauss")); }},
      {"hessian", [] { return check_hessian_det(default_config("hessian")); }},
      {"wavepackets", [] { return run_wavepacket_suite(default_config("wavepackets")); }},
      {"spectra", [] { return check_phi_spectra(default_config("spectra")); }},
      {"transequi", [] { return run_transverse_equidistribution(default_config("transequi")); }},
      {"partition", [] { return run_partition(default_config("partition")); }},
      {"rescale", [] { return run_parabolic_rescale(default_config("rescale")); }},
      {"broadnorm", [] { return check_broad_norm(default_config("broadnorm")); }},
      {"l2proxy", [] { return check_l2_proxy(default_config("l2proxy")); }},
      {"knapp", [] { return run_knapp(default_config("knapp")); }},
      {"decouple", [] { return run_decoupling_scan(default_config("decouple")); }},
  };
  const std::vector<Criterion> criteria = {
      {1, "exponent exactness", "exponents", {}, 1},
      {2, "Gauss map identity", "gauss", {}, 5},
      {3, "mixed Hessian determinant", "hessian", {}, 5},
      {4, "wave packet suite", "wavepackets",
       {"reconstruction_error", "total_orthogonality", "essential_support_ratio", "empty_packet_sup"}, 60},
      {5, "two-scale comparison", "wavepackets",
       {"two_scale_capture", "two_scale_hausdorff", "two_scale_cap_angle"}, 60},
      {6, "Phi-map spectra", "spectra", {}, 5},
      {7, "transverse equidistribution trend", "transequi", {"fitted_exponent"}, 120},
      {8, "polynomial partitioning", "partition", {}, 30},
      {9, "parabolic rescaling identity", "rescale", {}, 30},
      {10, "broad norm properties", "broadnorm", {}, 30},
      {11, "L2 boundedness proxy", "l2proxy", {}, 30},
      {12, "Knapp dichotomy", "knapp", {}, 60},
  };

  std::map<std::string, Timed> first;
  for (const auto& s : suites) first[s.name] = timed(s);

  int failed = 0;
  for (const auto& c : criteria) failed += !report(c, first.at(c.suite));

  // 13: rerun with the same seeds and compare the serialised reports byte for byte
  {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    for (const auto& s : suites) {
      const Timed again = timed(s);
      const Timed& a = first.at(s.name);
      if (!a.error.empty() || !again.error.empty() || to_csv(a.rows) != to_csv(again.rows) ||
          to_json(a.rows) != to_json(again.rows)) {
        ok = false;
        detail += " " + s.name;
      }
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-34s %8.2fs suites=%zu%s\n", ok ? "PASS" : "FAIL", 13,
                "deterministic reports", sec, suites.size(), ok ? "" : (" differ:" + detail).c_str());
    failed += !ok;
  }
  std::printf("%d of 13 criteria failed\n", failed);
  return failed ? 1 : 0;
}
