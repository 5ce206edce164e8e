#include "chanbound/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chanbound/errors.hpp"

namespace chanbound {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& member(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) fail(std::string(where) + ": missing \"" + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* where) {
  if (!j.is_number()) fail(std::string(where) + ": expected a number");
  return j.get<double>();
}

RealVector number_list(const Json& j, const char* where) {
  if (!j.is_array()) fail(std::string(where) + ": expected an array of numbers");
  RealVector out;
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

Eigen::MatrixXd real_matrix(const Json& j, const char* where) {
  if (!j.is_array() || j.empty()) fail(std::string(where) + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(std::string(where) + ": rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(std::string(where) + ": ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

Json real_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json attainer_to_json(const std::optional<Attainer>& a) {
  if (!a) return nullptr;
  Json j;
  j["spectrum"] = a->spectrum;
  j["source_order"] = a->source_order ? Json(*a->source_order) : Json(nullptr);
  j["alignment"] = a->alignment;
  return j;
}

std::optional<Attainer> attainer_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  Attainer a;
  a.spectrum = number_list(member(j, "spectrum", "attainer"), "attainer spectrum");
  const Json& order = member(j, "source_order", "attainer");
  if (!order.is_null()) {
    if (!order.is_array()) fail("attainer: source_order must be an array");
    std::vector<std::size_t> o;
    for (const auto& x : order) {
      if (!x.is_number_unsigned()) fail("attainer: source_order entries must be indices");
      o.push_back(x.get<std::size_t>());
    }
    a.source_order = std::move(o);
  }
  const Json& align = member(j, "alignment", "attainer");
  if (!align.is_string()) fail("attainer: alignment must be a string");
  a.alignment = align.get<std::string>();
  return a;
}

bool boolean(const Json& j, const char* key) {
  const Json& v = member(j, key, "report");
  if (!v.is_boolean()) fail(std::string("report: \"") + key + "\" must be a boolean");
  return v.get<bool>();
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Matrices and states

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["re"] = real_rows(m.real());
  j["im"] = real_rows(m.imag());
  return j;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::MatrixXd re = real_matrix(member(j, "re", "matrix"), "matrix re");
  Matrix m = re.cast<Complex>();
  if (j.contains("im")) {
    const Eigen::MatrixXd im = real_matrix(j.at("im"), "matrix im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) fail("matrix: re and im shapes differ");
    m.imag() = im;
  }
  return m;
}

DensityMatrix state_from_json(const Json& j) {
  if (!j.is_object()) fail("state: expected a JSON object");
  if (j.contains("eigenvalues")) {
    const RealVector ev = number_list(j.at("eigenvalues"), "state eigenvalues");
    if (ev.empty()) fail("state: eigenvalue list is empty");
    const auto n = static_cast<Eigen::Index>(ev.size());
    Matrix basis = Matrix::Identity(n, n);
    if (j.contains("basis")) {
      basis = matrix_from_json(j.at("basis"));
      if (basis.rows() != n || basis.cols() != n) fail("state: basis size does not match eigenvalues");
      if ((basis.adjoint() * basis - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > kEigenTolerance) {
        throw InvalidStateError("state basis is not unitary");
      }
    }
    return DensityMatrix::from_spectrum(ev, basis);
  }
  const Matrix m = matrix_from_json(j);
  if (m.rows() != m.cols()) fail("state: matrix is not square");
  if (j.contains("dim")) {
    const Json& d = j.at("dim");
    if (!d.is_number_integer() || d.get<Eigen::Index>() != m.rows()) {
      fail("state: \"dim\" does not match the matrix size");
    }
  }
  return DensityMatrix(m);
}

Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["dim"] = rho.dim();
  const Json m = matrix_to_json(rho.matrix());
  j["re"] = m["re"];
  j["im"] = m["im"];
  return j;
}

DensityMatrix load_state(const std::filesystem::path& path) {
  return state_from_json(load_json(path));
}

// ---------------------------------------------------------------------------
// Reports

Json extended_to_json(const ExtendedReal& x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  return x.value();
}

ExtendedReal extended_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return ExtendedReal::pos_inf();
    if (s == "-inf") return ExtendedReal::neg_inf();
    fail("expected a number, \"inf\" or \"-inf\", got \"" + s + "\"");
  }
  return number(j, "value");
}

Json report_to_json(const ReportFile& r) {
  const BoundReport& b = r.report;
  Json j;
  j["objective"] = b.objective;
  j["class"] = std::string(to_string(b.channel_class));
  j["lower"] = extended_to_json(b.lower);
  j["upper"] = extended_to_json(b.upper);
  j["lower_attained"] = b.lower_attained;
  j["upper_attained"] = b.upper_attained;
  j["lower_unique_up_to_degeneracy"] = b.lower_unique_up_to_degeneracy;
  j["upper_unique_up_to_degeneracy"] = b.upper_unique_up_to_degeneracy;
  j["lower_attainer"] = attainer_to_json(b.lower_attainer);
  j["upper_attainer"] = attainer_to_json(b.upper_attainer);
  j["log_base"] = r.log_base ? Json(*r.log_base) : Json(nullptr);
  j["channel_file"] = r.channel_file ? Json(*r.channel_file) : Json(nullptr);
  if (r.sampling) {
    const auto& s = *r.sampling;
    j["sampling"] = {{"seed", s.seed},
                     {"trials", s.trials},
                     {"violations", s.violations},
                     {"observed_min", extended_to_json(s.observed_min)},
                     {"observed_max", extended_to_json(s.observed_max)}};
  } else {
    j["sampling"] = nullptr;
  }
  return j;
}

ReportFile report_from_json(const Json& j) {
  if (!j.is_object()) fail("report: expected a JSON object");
  ReportFile r;
  BoundReport& b = r.report;
  const Json& obj = member(j, "objective", "report");
  if (!obj.is_string()) fail("report: objective must be a string");
  b.objective = obj.get<std::string>();
  const Json& cls = member(j, "class", "report");
  if (!cls.is_string()) fail("report: class must be a string");
  try {
    b.channel_class = parse_channel_class(cls.get<std::string>());
  } catch (const ParameterError& e) {
    fail(std::string("report: ") + e.what());
  }
  b.lower = extended_from_json(member(j, "lower", "report"));
  b.upper = extended_from_json(member(j, "upper", "report"));
  b.lower_attained = boolean(j, "lower_attained");
  b.upper_attained = boolean(j, "upper_attained");
  b.lower_unique_up_to_degeneracy = boolean(j, "lower_unique_up_to_degeneracy");
  b.upper_unique_up_to_degeneracy = boolean(j, "upper_unique_up_to_degeneracy");
  b.lower_attainer = attainer_from_json(member(j, "lower_attainer", "report"));
  b.upper_attainer = attainer_from_json(member(j, "upper_attainer", "report"));

  auto optional_string = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) fail(std::string("report: \"") + key + "\" must be a string");
    return j.at(key).get<std::string>();
  };
  r.log_base = optional_string("log_base");
  r.channel_file = optional_string("channel_file");
  if (j.contains("sampling") && !j.at("sampling").is_null()) {
    const Json& s = j.at("sampling");
    SamplingSummary out;
    auto count = [&](const char* key) {
      const Json& v = member(s, key, "sampling");
      if (!v.is_number_unsigned()) fail(std::string("sampling: \"") + key + "\" must be a count");
      return v.get<std::uint64_t>();
    };
    out.seed = count("seed");
    out.trials = count("trials");
    out.violations = count("violations");
    out.observed_min = extended_from_json(member(s, "observed_min", "sampling"));
    out.observed_max = extended_from_json(member(s, "observed_max", "sampling"));
    r.sampling = out;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Channels

Json channel_to_json(const KrausChannel& phi) {
  Json j;
  j["kind"] = "kraus";
  j["dim"] = phi.dim();
  j["ops"] = Json::array();
  for (const auto& f : phi.ops()) j["ops"].push_back(matrix_to_json(f));
  return j;
}

Json channel_to_json(const MixedUnitaryChannel& phi) {
  Json j;
  j["kind"] = "mixed_unitary";
  j["dim"] = phi.dim();
  j["ops"] = Json::array();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    Json op = matrix_to_json(phi.unitaries()[i]);
    op["weight"] = phi.weights()[i];
    j["ops"].push_back(std::move(op));
  }
  return j;
}

Json channel_to_json(const ConstructedChannel& phi) {
  return phi.mixed ? channel_to_json(*phi.mixed) : channel_to_json(phi.kraus);
}

KrausChannel channel_from_json(const Json& j) {
  const Json& kind = member(j, "kind", "channel");
  if (!kind.is_string()) fail("channel: kind must be a string");
  const auto k = kind.get<std::string>();
  if (k != "kraus" && k != "mixed_unitary") fail("channel: unknown kind \"" + k + "\"");
  const Json& ops = member(j, "ops", "channel");
  if (!ops.is_array() || ops.empty()) fail("channel: ops must be a nonempty array");

  std::vector<Matrix> out;
  for (const auto& op : ops) {
    Matrix m = matrix_from_json(op);
    if (k == "mixed_unitary") {
      const double w = number(member(op, "weight", "channel op"), "channel weight");
      if (w < 0.0) fail("channel: negative weight");
      m *= std::sqrt(w);
    }
    out.push_back(std::move(m));
  }
  if (j.contains("dim")) {
    const Json& d = j.at("dim");
    if (!d.is_number_integer() || d.get<Eigen::Index>() != out.front().rows()) {
      fail("channel: \"dim\" does not match the operator size");
    }
  }
  try {
    return KrausChannel::unchecked(std::move(out));
  } catch (const ParameterError& e) {
    fail(std::string("channel: ") + e.what());
  }
}

KrausChannel load_channel(const std::filesystem::path& path) {
  return channel_from_json(load_json(path));
}

}  // namespace chanbound
