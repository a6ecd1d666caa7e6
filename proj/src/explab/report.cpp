#include <fmt/format.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "oscillab/explab.hpp"

namespace osc {

using nlohmann::json;

bool verdict(double m, const std::string& rel, double ref, double ref_hi) {
  if (!std::isfinite(m)) return false;
  if (rel == "<=") return m <= ref;
  if (rel == "<") return m < ref;
  if (rel == ">=") return m >= ref;
  if (rel == ">") return m > ref;
  if (rel == "==") return m == ref;
  if (rel == "in") return m >= ref && m <= ref_hi;
  throw ArgumentError("verdict: unknown relation '" + rel + "'");
}

ReportRow make_row(std::string experiment, std::string metric,
                   std::vector<std::pair<std::string, std::string>> parameters, double measured,
                   std::string relation, double reference, double reference_upper) {
  ReportRow r{std::move(experiment), std::move(metric), std::move(parameters), measured,
              std::move(relation), reference, reference_upper, false};
  r.pass = verdict(r.measured, r.relation, r.reference, r.reference_upper);
  return r;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.10e}", v);
}

namespace {

std::string params_text(const ReportRow& r) {
  std::string s;
  for (const auto& [k, v] : r.parameters) {
    if (!s.empty()) s += ';';
    s += k + '=' + v;
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string json_number(double v) { return std::isnan(v) ? "null" : fmt_double(v); }

}  // namespace

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "experiment,metric,parameters,measured,relation,reference,reference_upper,pass\r\n";
  for (const auto& r : rows) {
    out += csv_field(r.experiment) + ',' + csv_field(r.metric) + ',' + csv_field(params_text(r)) +
           ',' + fmt_double(r.measured) + ',' + csv_field(r.relation) + ',' +
           fmt_double(r.reference) + ',' + fmt_double(r.reference_upper) + ',' +
           (r.pass ? "true" : "false") + "\r\n";
  }
  return out;
}

std::string to_json(const std::vector<ReportRow>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += i ? ",\n  {" : "\n  {";
    out += "\"experiment\": " + json(r.experiment).dump();
    out += ", \"metric\": " + json(r.metric).dump();
    out += ", \"parameters\": {";
    for (std::size_t j = 0; j < r.parameters.size(); ++j) {
      if (j) out += ", ";
      out += json(r.parameters[j].first).dump() + ": " + json(r.parameters[j].second).dump();
    }
    out += "}, \"measured\": " + json_number(r.measured);
    out += ", \"relation\": " + json(r.relation).dump();
    out += ", \"reference\": " + json_number(r.reference);
    out += ", \"reference_upper\": " + json_number(r.reference_upper);
    out += std::string(", \"pass\": ") + (r.pass ? "true" : "false") + "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<ReportRow> rows_from_json(const std::string& text) {
  // ordered_json keeps the parameter order of the file
  auto doc = nlohmann::ordered_json::parse(text);
  if (!doc.is_array()) throw ArgumentError("rows_from_json: expected a top-level array");
  auto num = [](const nlohmann::ordered_json& v) {
    return v.is_null() ? kNaN : v.get<double>();
  };
  std::vector<ReportRow> rows;
  for (const auto& o : doc) {
    ReportRow r;
    r.experiment = o.at("experiment").get<std::string>();
    r.metric = o.at("metric").get<std::string>();
    for (const auto& [k, v] : o.at("parameters").items())
      r.parameters.emplace_back(k, v.get<std::string>());
    r.measured = num(o.at("measured"));
    r.relation = o.at("relation").get<std::string>();
    r.reference = num(o.at("reference"));
    r.reference_upper = num(o.at("reference_upper"));
    r.pass = o.at("pass").get<bool>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void emit(const std::vector<ReportRow>& rows, const std::string& format, const std::string& path) {
  if (format == "csv")
    write_file(path, to_csv(rows));
  else if (format == "json")
    write_file(path, to_json(rows));
  else
    throw ArgumentError("emit: unknown format '" + format + "'");
}

std::string plot_script(const std::string& csv_path) {
  return fmt::format(R"(#!/usr/bin/env python3
# Generated by oscillab: measured value against its reference bound, one panel per experiment.
import csv
import sys
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {0}
with open(path, newline="") as fh:
    rows = list(csv.DictReader(fh))

groups = {{}}
for row in rows:
    groups.setdefault(row["experiment"], []).append(row)

fig, axes = plt.subplots(len(groups) or 1, 1, figsize=(8, 2.5 * max(1, len(groups))), squeeze=False)
for ax, (name, items) in zip(axes[:, 0], sorted(groups.items())):
    labels = [r["metric"] for r in items]
    xs = range(len(items))
    meas = [float(r["measured"]) if r["measured"] else float("nan") for r in items]
    refs = [float(r["reference"]) if r["reference"] else float("nan") for r in items]
    colors = ["tab:green" if r["pass"] == "true" else "tab:red" for r in items]
    ax.scatter(xs, meas, c=colors, label="measured")
    ax.scatter(xs, refs, marker="_", s=200, c="k", label="reference")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=7)
    ax.set_yscale("symlog", linthresh=1e-6)
    ax.set_title(name)
fig.tight_layout()
out = path.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=120)
print(out)
)",
                     json(csv_path).dump());
}

void emit_plotscript(const std::string& csv_path, const std::string& script_path) {
  write_file(script_path, plot_script(csv_path));
}

std::string packets_json(const PacketSet& set, double delta) {
  std::ostringstream o;
  o << "{\"r\": " << fmt_double(set.r) << ", \"delta\": " << fmt_double(delta) << ", \"x0\": {\"x\": [";
  for (std::size_t a = 0; a < set.x0.x.size(); ++a) o << (a ? ", " : "") << fmt_double(set.x0.x[a]);
  o << "], \"t\": " << fmt_double(set.x0.t) << "}, \"packets\": [";
  for (std::size_t i = 0; i < set.packets.size(); ++i) {
    const auto& p = set.packets[i];
    const Tube T = tube_of(set, i, delta);
    o << (i ? ",\n  " : "\n  ") << "{\"theta_index\": [";
    const auto& idx = set.caps.caps[p.cap].index;
    for (std::size_t a = 0; a < idx.size(); ++a) o << (a ? ", " : "") << idx[a];
    o << "], \"v\": [";
    const Vec v = set.v_of(p);
    for (std::size_t a = 0; a < v.size(); ++a) o << (a ? ", " : "") << fmt_double(v[a]);
    o << "], \"coeff_re\": " << fmt_double(p.coeff.real())
      << ", \"coeff_im\": " << fmt_double(p.coeff.imag())
      << ", \"empty\": " << (T.empty ? "true" : "false") << "}";
  }
  o << (set.packets.empty() ? "]}\n" : "\n]}\n");
  return o.str();
}

std::string variety_json(const Variety& V) {
  std::ostringstream o;
  o << "{\"ambient_dim\": " << V.ambient_dim << ", \"polys\": [";
  for (std::size_t i = 0; i < V.polys.size(); ++i) {
    const auto& P = V.polys[i];
    o << (i ? ", " : "") << "{\"degree\": " << P.degree() << ", \"monomials\": [";
    for (std::size_t j = 0; j < P.terms.size(); ++j) {
      o << (j ? ", " : "") << "{\"exponents\": [";
      for (std::size_t a = 0; a < P.terms[j].exponents.size(); ++a)
        o << (a ? ", " : "") << P.terms[j].exponents[a];
      o << "], \"coeff\": " << fmt_double(P.terms[j].coeff) << "}";
    }
    o << "]}";
  }
  o << "]}\n";
  return o.str();
}

Variety variety_from_json(const std::string& text) {
  auto doc = json::parse(text);
  Variety V;
  V.ambient_dim = doc.at("ambient_dim").get<int>();
  for (const auto& p : doc.at("polys")) {
    Polynomial P(V.ambient_dim);
    for (const auto& m : p.at("monomials")) {
      auto e = m.at("exponents").get<std::vector<int>>();
      if (static_cast<int>(e.size()) != V.ambient_dim)
        throw ArgumentError("variety_from_json: exponent vector of the wrong length");
      P.terms.push_back({e, m.at("coeff").get<double>()});
    }
    P.compress();
    V.polys.push_back(std::move(P));
  }
  return V;
}

std::string partition_json(const Partition& part) {
  std::ostringstream o;
  Variety V{part.dim, {part.poly}};
  std::string poly = variety_json(V);
  // reuse the single polynomial object of the variety encoding
  auto doc = json::parse(poly);
  o << "{\"poly\": " << doc.at("polys").at(0).dump() << ", \"cells\": [";
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    const auto& c = part.cells[i];
    o << (i ? ",\n  " : "\n  ") << "{\"sign_pattern\": " << json(c.sign_pattern).dump()
      << ", \"indices\": [";
    for (std::size_t j = 0; j < c.indices.size(); ++j) o << (j ? ", " : "") << c.indices[j];
    o << "], \"weight\": " << fmt_double(c.weight) << "}";
  }
  o << (part.cells.empty() ? "]" : "\n]") << ", \"wall_indices\": [";
  for (std::size_t j = 0; j < part.wall_indices.size(); ++j)
    o << (j ? ", " : "") << part.wall_indices[j];
  o << "]}\n";
  return o.str();
}

std::string exponent_tables_json(int n_max) {
  std::ostringstream o;
  o << "[";
  bool first = true;
  for (int n = 3; n <= n_max; ++n)
    for (int k = 2; k <= n - 1; ++k) {
      const Rational p = p_critical(n, k);
      const BoundRange b = bound_range(n, k);
      o << (first ? "\n  " : ",\n  ") << "{\"n\": " << n << ", \"k\": " << k
        << ", \"p_critical\": " << json(p.str()).dump()
        << ", \"p_critical_value\": " << fmt_double(to_double(p))
        << ", \"range_low\": " << json(b.low.str()).dump()
        << ", \"range_high\": " << (b.high ? json(b.high->str()).dump() : "null") << "}";
      first = false;
    }
  o << "\n]\n";
  return o.str();
}

}  // namespace osc
