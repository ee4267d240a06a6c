#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "restartkit/dynamics.hpp"
#include "restartkit/trace.hpp"

namespace restartkit {

enum class ExportFormat { csv, json };

inline ExportFormat parse_format(const std::string& s) {
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  throw std::invalid_argument("format must be csv or json");
}

namespace detail {

// 17 significant digits round-trips every double exactly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double f_rel(double f, double f_star_ref) {
  return (f - f_star_ref) / std::max(std::abs(f_star_ref), 1e-300);
}

}  // namespace detail

using NamedTraces = std::vector<std::pair<std::string, Trace>>;

inline std::string traces_to_csv(const NamedTraces& traces) {
  std::ostringstream out;
  out << "run_id,k,f,f_rel,beta,step,restarted\n";
  for (const auto& [run_id, tr] : traces) {
    for (const auto& r : tr.records) {
      out << run_id << ',' << r.k << ',' << detail::fmt17(r.f) << ','
          << detail::fmt17(detail::f_rel(r.f, tr.f_star_ref)) << ','
          << detail::fmt17(r.beta) << ',' << detail::fmt17(r.step) << ','
          << (r.restarted ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

inline nlohmann::json traces_to_json(const NamedTraces& traces) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [run_id, tr] : traces) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : tr.records) {
      records.push_back({{"k", r.k},
                         {"f", r.f},
                         {"f_rel", detail::f_rel(r.f, tr.f_star_ref)},
                         {"beta", r.beta},
                         {"step", r.step},
                         {"restarted", r.restarted ? 1 : 0}});
    }
    out.push_back({{"run_id", run_id},
                   {"f_star_ref", tr.f_star_ref},
                   {"records", std::move(records)}});
  }
  return out;
}

// Iterate coordinates for the 2-D trajectory experiment.
inline std::string trajectories_to_csv(const NamedTraces& traces) {
  std::ostringstream out;
  out << "run_id,k,x1,x2\n";
  for (const auto& [run_id, tr] : traces) {
    int k = 0;
    for (const auto& x : tr.iterates) {
      out << run_id << ',' << k++ << ',' << detail::fmt17(x[0]) << ','
          << detail::fmt17(x[1]) << '\n';
    }
  }
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void export_traces(const NamedTraces& traces, const std::string& path,
                          ExportFormat format) {
  if (format == ExportFormat::csv) {
    write_file(path, traces_to_csv(traces));
  } else {
    write_file(path, traces_to_json(traces).dump(2) + "\n");
  }
}

// Minimal readers for round-trip checks.
inline NamedTraces import_traces_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty trace file: " + path);
  if (line != "run_id,k,f,f_rel,beta,step,restarted")
    throw std::runtime_error("unexpected trace header: " + line);
  NamedTraces out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string run_id, field;
    std::getline(ss, run_id, ',');
    TraceRecord r;
    std::getline(ss, field, ',');
    r.k = std::stoi(field);
    std::getline(ss, field, ',');
    r.f = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');  // f_rel, derived
    std::getline(ss, field, ',');
    r.beta = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.step = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.restarted = field == "1";
    if (out.empty() || out.back().first != run_id)
      out.push_back({run_id, Trace{}});
    out.back().second.records.push_back(r);
  }
  return out;
}

inline NamedTraces import_traces_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  NamedTraces out;
  for (const auto& entry : doc) {
    Trace tr;
    tr.f_star_ref = entry.at("f_star_ref").get<double>();
    for (const auto& r : entry.at("records")) {
      tr.records.push_back({r.at("k").get<int>(), r.at("f").get<double>(),
                            r.at("beta").get<double>(), r.at("step").get<double>(),
                            r.at("restarted").get<int>() == 1});
    }
    out.push_back({entry.at("run_id").get<std::string>(), std::move(tr)});
  }
  return out;
}

// Damping-regime sweep table over (beta, lam_ratio) pairs.
inline std::string regime_sweep_csv(const std::vector<double>& betas,
                                    const std::vector<double>& ratios) {
  std::ostringstream out;
  out << "beta,lam_ratio,regime,root1_re,root1_im,root2_re,root2_im,psi\n";
  for (const double beta : betas) {
    for (const double ratio : ratios) {
      const auto [r1, r2] = char_roots(beta, ratio);
      const DampingRegime regime = classify_regime(beta, ratio);
      const double psi = regime == DampingRegime::under_damped
                             ? mode_frequency(beta, ratio)
                             : std::numeric_limits<double>::quiet_NaN();
      out << detail::fmt17(beta) << ',' << detail::fmt17(ratio) << ','
          << regime_name(regime) << ',' << detail::fmt17(r1.real()) << ','
          << detail::fmt17(r1.imag()) << ',' << detail::fmt17(r2.real()) << ','
          << detail::fmt17(r2.imag()) << ',' << detail::fmt17(psi) << '\n';
    }
  }
  return out.str();
}

inline void export_regime_sweep(const std::vector<double>& betas,
                                const std::vector<double>& ratios,
                                const std::string& path) {
  write_file(path, regime_sweep_csv(betas, ratios));
}

}  // namespace restartkit
