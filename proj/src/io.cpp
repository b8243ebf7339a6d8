#include "pfsic/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pfsic/constructions.hpp"
#include "pfsic/rng.hpp"

namespace pfsic {

using nlohmann::json;

json complex_to_json(Complex z) {
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw std::invalid_argument(
        "complex numbers must be two-element arrays [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(m(i, k));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("matrix must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw std::invalid_argument("matrix rows must have equal length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(v[i]);
  }
  return arr;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("vector must be an array of numbers");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json povm_to_json(const RankOnePOVM& povm) {
  json vectors = json::array();
  for (int xi = 0; xi < povm.n_outcomes(); ++xi) {
    json components = json::array();
    for (int k = 0; k < povm.dim(); ++k) {
      components.push_back(complex_to_json(povm.matrix()(k, xi)));
    }
    vectors.push_back(std::move(components));
  }
  return json{{"dim", povm.dim()}, {"n", povm.n_outcomes()},
              {"vectors", std::move(vectors)}};
}

std::vector<CVector> povm_vectors_from_json(const json& j) {
  const int d = j.at("dim").get<int>();
  const int n = j.at("n").get<int>();
  if (d < 2 || n < d) {
    throw std::invalid_argument(
        "POVM file: need dim >= 2 and n >= dim; got dim = " +
        std::to_string(d) + ", n = " + std::to_string(n));
  }
  const json& vectors = j.at("vectors");
  if (!vectors.is_array() || static_cast<int>(vectors.size()) != n) {
    throw std::invalid_argument("POVM file: \"vectors\" must list n vectors");
  }
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const json& vec : vectors) {
    if (!vec.is_array() || static_cast<int>(vec.size()) != d) {
      throw std::invalid_argument(
          "POVM file: each vector must have d components");
    }
    CVector v(d);
    for (int k = 0; k < d; ++k) {
      v[k] = complex_from_json(vec[static_cast<std::size_t>(k)]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

RankOnePOVM povm_from_json(const json& j, double tol) {
  return povm_from_vectors(povm_vectors_from_json(j), tol);
}

RankOnePOVM load_povm(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open POVM file: " + path);
  }
  return povm_from_json(json::parse(in));
}

void save_povm(const RankOnePOVM& povm, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::ios_base::failure("cannot write POVM file: " + path);
  }
  out << povm_to_json(povm).dump(2) << '\n';
}

json pfsic_verdict_to_json(const PfsicVerdict& v) {
  return json{{"is_pfsic", v.pfsic},
              {"deviation", v.deviation},
              {"tolerance", v.tolerance},
              {"min_fiducial_probability", v.min_fiducial_prob},
              {"n_outcomes", v.n_outcomes},
              {"min_outcomes", v.min_outcomes}};
}

json fisher_report_to_json(const FisherReport& report) {
  json j{{"dim", report.dim},
         {"n", report.n_outcomes},
         {"classical_fisher", matrix_to_json(report.classical)},
         {"quantum_fisher", matrix_to_json(report.quantum)},
         {"gill_massar", report.gm},
         {"gill_massar_bound", report.gm_bound},
         {"symmetry", report.symmetry},
         {"symmetry_floor", report.symmetry_floor},
         {"c_deviation_from_2id", report.c_deviation_from_2id},
         {"pfsic", pfsic_verdict_to_json(report.pfsic)},
         {"excluded_outcomes", report.excluded_outcomes}};
  if (report.fd) {
    j["fd_check"] = json{{"step", report.fd->step},
                         {"max_abs_deviation", report.fd->max_abs_deviation}};
  }
  return j;
}

json sim_report_to_json(const SimReport& report) {
  json j{{"dim", report.dim},
         {"n", report.n_outcomes},
         {"shots_per_trial", report.shots_per_trial},
         {"trials", report.trials},
         {"seed", report.seed},
         {"rng", report.rng},
         {"true_params", vector_to_json(report.true_params)},
         {"estimates", matrix_to_json(report.estimates)},
         {"empirical_mean", vector_to_json(report.empirical_mean)},
         {"predicted_cov", matrix_to_json(report.predicted_cov)},
         {"insufficient_trials", report.insufficient_trials}};
  if (!report.insufficient_trials) {
    j["empirical_cov"] = matrix_to_json(report.empirical_cov);
    j["max_relative_diag_error"] = report.max_relative_diag_error;
    j["offdiag_max_abs"] = report.offdiag_max_abs;
  }
  return j;
}

void write_estimates_csv(const SimReport& report, std::ostream& out) {
  const int d = report.dim;
  for (int k = 1; k < d; ++k) {
    for (int sigma = 0; sigma < 2; ++sigma) {
      if (k > 1 || sigma > 0) {
        out << ',';
      }
      out << "x_" << k << '_' << sigma;
    }
  }
  out << '\n';
  char buffer[64];
  for (Eigen::Index t = 0; t < report.estimates.rows(); ++t) {
    for (Eigen::Index a = 0; a < report.estimates.cols(); ++a) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", report.estimates(t, a));
      if (a > 0) {
        out << ',';
      }
      out << buffer;
    }
    out << '\n';
  }
}

RankOnePOVM povm_from_descriptor(const json& descriptor) {
  const std::string kind = descriptor.at("kind").get<std::string>();
  if (kind == "minimal") {
    return minimal_pfsic(descriptor.at("d").get<int>());
  }
  if (kind == "two_basis") {
    const int d = descriptor.at("d").get<int>();
    const double p_chi = descriptor.at("p_chi").get<double>();
    std::optional<RealBasisSpec> basis;
    if (descriptor.contains("basis")) {
      basis.emplace(matrix_from_json(descriptor.at("basis")));
    }
    return two_basis_pfsic(d, p_chi, basis);
  }
  if (kind == "mix") {
    const RankOnePOVM base = povm_from_descriptor(descriptor.at("base"));
    const auto seed = descriptor.at("seed").get<std::uint64_t>();
    const int size = descriptor.value("size", base.n_outcomes());
    const bool strict = descriptor.value("strict", true);
    SplitMix64 rng(seed);
    return orthogonal_mix(base, OrthogonalMatrix(random_orthogonal(size, rng)),
                          strict);
  }
  if (kind == "file") {
    return load_povm(descriptor.at("path").get<std::string>());
  }
  throw std::invalid_argument("unknown POVM descriptor kind: " + kind);
}

}  // namespace pfsic
