#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "restartkit/objectives.hpp"

namespace restartkit {

using json = nlohmann::json;

// Problem instances serialize to {"type", "seed", "params", "data"} with
// dense row-major arrays under "data". nlohmann::json prints doubles in
// shortest round-trip form, so a reloaded instance evaluates bit-for-bit
// like the original.

namespace detail {

inline json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json mat_to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

inline Vector vec_from_json(const json& a) {
  Vector v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

inline Matrix mat_from_json(const json& a, Eigen::Index rows, Eigen::Index cols) {
  if (a.size() != static_cast<std::size_t>(rows * cols))
    throw std::invalid_argument("mat_from_json: array size mismatch");
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = a[idx++].get<double>();
  return m;
}

}  // namespace detail

inline std::string problem_type(const json& doc) {
  return doc.at("type").get<std::string>();
}

inline json quadratic_to_json(const Quadratic& q, std::uint64_t seed,
                              json params = json::object()) {
  params["n"] = q.dim();
  json data{{"basis", detail::mat_to_json(q.basis())},
            {"lambda", detail::vec_to_json(q.eigenvalues())}};
  if (q.has_linear_term()) data["linear"] = detail::vec_to_json(q.linear_term());
  return json{{"type", "quadratic"}, {"seed", seed}, {"params", params}, {"data", data}};
}

inline Quadratic quadratic_from_json(const json& doc) {
  const auto& data = doc.at("data");
  const Eigen::Index n = doc.at("params").at("n").get<Eigen::Index>();
  Matrix basis = detail::mat_from_json(data.at("basis"), n, n);
  Vector lambda = detail::vec_from_json(data.at("lambda"));
  Vector linear;
  if (data.contains("linear")) linear = detail::vec_from_json(data.at("linear"));
  return Quadratic(std::move(basis), std::move(lambda), std::move(linear));
}

inline json logsumexp_to_json(const LogSumExp& f, std::uint64_t seed,
                              json params = json::object()) {
  params["n"] = f.dim();
  params["m"] = f.terms();
  params["rho"] = f.rho();
  json data{{"a", detail::mat_to_json(f.a())}, {"b", detail::vec_to_json(f.b())}};
  return json{{"type", "logsumexp"}, {"seed", seed}, {"params", params}, {"data", data}};
}

inline LogSumExp logsumexp_from_json(const json& doc) {
  const auto& p = doc.at("params");
  const Eigen::Index n = p.at("n").get<Eigen::Index>();
  const Eigen::Index m = p.at("m").get<Eigen::Index>();
  Matrix a = detail::mat_from_json(doc.at("data").at("a"), m, n);
  Vector b = detail::vec_from_json(doc.at("data").at("b"));
  return LogSumExp(std::move(a), std::move(b), p.at("rho").get<double>());
}

inline json lasso_to_json(const LassoProblem& f, std::uint64_t seed,
                          json params = json::object()) {
  params["n"] = f.dim();
  params["m"] = f.rows();
  params["rho"] = f.rho();
  json data{{"a", detail::mat_to_json(f.a())}, {"b", detail::vec_to_json(f.b())}};
  return json{{"type", "lasso"}, {"seed", seed}, {"params", params}, {"data", data}};
}

inline LassoProblem lasso_from_json(const json& doc) {
  const auto& p = doc.at("params");
  const Eigen::Index n = p.at("n").get<Eigen::Index>();
  const Eigen::Index m = p.at("m").get<Eigen::Index>();
  Matrix a = detail::mat_from_json(doc.at("data").at("a"), m, n);
  Vector b = detail::vec_from_json(doc.at("data").at("b"));
  return LassoProblem(std::move(a), std::move(b), p.at("rho").get<double>());
}

inline json boxqp_to_json(const BoxQP& f, std::uint64_t seed,
                          json params = json::object()) {
  params["n"] = f.dim();
  json data{{"basis", detail::mat_to_json(f.quadratic().basis())},
            {"lambda", detail::vec_to_json(f.quadratic().eigenvalues())},
            {"linear", detail::vec_to_json(f.quadratic().linear_term())},
            {"lower", detail::vec_to_json(f.lower())},
            {"upper", detail::vec_to_json(f.upper())}};
  return json{{"type", "boxqp"}, {"seed", seed}, {"params", params}, {"data", data}};
}

inline BoxQP boxqp_from_json(const json& doc) {
  const auto& data = doc.at("data");
  const Eigen::Index n = doc.at("params").at("n").get<Eigen::Index>();
  return BoxQP(detail::mat_from_json(data.at("basis"), n, n),
               detail::vec_from_json(data.at("lambda")),
               detail::vec_from_json(data.at("linear")),
               detail::vec_from_json(data.at("lower")),
               detail::vec_from_json(data.at("upper")));
}

}  // namespace restartkit
