#include "hermgen/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hermgen/errors.hpp"
#include "json_codec.hpp"

namespace hermgen {

namespace detail {

namespace {

json encode_matrix(const Eigen::MatrixXd& m, bool allow_identity) {
  if (allow_identity && m.rows() == m.cols() && m.rows() > 0 &&
      m == Eigen::MatrixXd::Identity(m.rows(), m.cols())) {
    return "identity";
  }
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json encode_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd decode_matrix(const json& j, const char* name, Index rows, Index cols) {
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") {
      throw ParameterError(std::string(name) + ": unknown token '" + j.get<std::string>() + "'");
    }
    if (rows != cols) {
      throw ParameterError(std::string(name) + ": 'identity' needs a square shape, got " +
                           std::to_string(rows) + "x" + std::to_string(cols));
    }
    return Eigen::MatrixXd::Identity(rows, cols);
  }
  if (!j.is_array()) throw ParameterError(std::string(name) + " must be a matrix or 'identity'");
  if (static_cast<Index>(j.size()) != rows) {
    throw ParameterError(std::string(name) + ": expected " + std::to_string(rows) + " rows, got " +
                         std::to_string(j.size()));
  }
  Eigen::MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw ParameterError(std::string(name) + ": row " + std::to_string(i) + " must have " +
                           std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Eigen::VectorXd decode_vector(const json& j, const char* name, Index size) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size) {
    throw ParameterError(std::string(name) + ": expected an array of length " +
                         std::to_string(size));
  }
  Eigen::VectorXd v(size);
  for (Index i = 0; i < size; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Index decode_dim(const json& j, const char* name) {
  if (!j.contains(name)) throw ParameterError(std::string("missing dimension '") + name + "'");
  const auto v = j.at(name).get<std::int64_t>();
  if (v < 1) throw ParameterError(std::string("dimension '") + name + "' must be >= 1");
  return static_cast<Index>(v);
}

}  // namespace

json parse_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string(what) + ": invalid JSON (" + e.what() + ")");
  }
}

json encode(const HermiteSeries& s) {
  return json{{"degree", s.degree()},
              {"coeffs", std::vector<double>(s.coeffs().begin(), s.coeffs().end())}};
}

HermiteSeries decode_series(const json& j) {
  try {
    if (j.is_array()) return HermiteSeries(j.get<std::vector<double>>());
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    if (j.contains("degree") && j.at("degree").get<std::int64_t>() + 1 !=
                                    static_cast<std::int64_t>(coeffs.size())) {
      throw ParameterError("series: degree does not match the number of coefficients");
    }
    return HermiteSeries(std::move(coeffs));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("series: ") + e.what());
  }
}

json encode(const CumulantVector& c) {
  return json{{"order", c.order()}, {"values", c.values}};
}

json encode(const MomentSummary& m) {
  return json{{"mean", encode_vector(m.mean)}, {"cov", encode_matrix(m.cov, false)}};
}

json encode(const GenModelParams& p) {
  return json{{"d", p.d()},
              {"k", p.k()},
              {"p", p.p()},
              {"W", encode_matrix(p.W, true)},
              {"F", encode_matrix(p.F, true)},
              {"b", encode_vector(p.b)},
              {"mu", encode_vector(p.mu)},
              {"Sigma", encode_matrix(p.Sigma, true)},
              {"series", encode(p.series)}};
}

GenModelParams decode_params(const json& j) {
  try {
    if (!j.is_object()) throw ParameterError("model parameters must be a JSON object");
    const Index d = decode_dim(j, "d");
    const Index k = decode_dim(j, "k");
    const Index p = decode_dim(j, "p");
    GenModelParams out;
    out.W = decode_matrix(j.at("W"), "W", d, k);
    out.F = decode_matrix(j.at("F"), "F", k, p);
    out.b = j.contains("b") ? decode_vector(j.at("b"), "b", k) : Eigen::VectorXd::Zero(k);
    out.mu = j.contains("mu") ? decode_vector(j.at("mu"), "mu", p) : Eigen::VectorXd::Zero(p);
    out.Sigma = j.contains("Sigma") ? decode_matrix(j.at("Sigma"), "Sigma", p, p)
                                    : Eigen::MatrixXd::Identity(p, p);
    out.series = decode_series(j.at("series"));
    out.validate();
    return out;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("model parameters: ") + e.what());
  }
}

json encode(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate},
              {"rate_scaling", std::string(to_string(cfg.rate_scaling))},
              {"steps", cfg.steps},
              {"checkpoints", cfg.checkpoints},
              {"n_test", cfg.n_test},
              {"seeds", cfg.seeds},
              {"hidden", cfg.hidden},
              {"init_scale", cfg.init_scale}};
}

TrainConfig decode_train_config(const json& j) {
  try {
    TrainConfig cfg;
    cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("rate_scaling")) {
      cfg.rate_scaling = rate_scaling_from_string(j.at("rate_scaling").get<std::string>());
    }
    cfg.steps = j.at("steps").get<std::int64_t>();
    cfg.checkpoints = j.contains("checkpoints")
                          ? j.at("checkpoints").get<std::vector<std::int64_t>>()
                          : log_checkpoints(cfg.steps);
    cfg.n_test = j.value("n_test", Index{2000});
    cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{1});
    cfg.hidden = j.value("hidden", Index{512});
    cfg.init_scale = j.value("init_scale", 1.0);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("train config: ") + e.what());
  }
}

}  // namespace detail

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string series_to_json(const HermiteSeries& s) { return detail::encode(s).dump(); }

HermiteSeries series_from_json(std::string_view text) {
  return detail::decode_series(detail::parse_text(text, "series"));
}

HermiteSeries load_series(const std::filesystem::path& path) {
  return series_from_json(read_text_file(path));
}

void save_series(const std::filesystem::path& path, const HermiteSeries& s) {
  write_text_file(path, series_to_json(s) + "\n");
}

std::string cumulants_to_json(const CumulantVector& c) { return detail::encode(c).dump(); }

std::string moments_to_json(const MomentSummary& m) { return detail::encode(m).dump(); }

std::string params_to_json(const GenModelParams& p) { return detail::encode(p).dump(2); }

GenModelParams params_from_json(std::string_view text) {
  return detail::decode_params(detail::parse_text(text, "model parameters"));
}

GenModelParams load_params(const std::filesystem::path& path) {
  return params_from_json(read_text_file(path));
}

void save_params(const std::filesystem::path& path, const GenModelParams& p) {
  write_text_file(path, params_to_json(p) + "\n");
}

namespace {

void write_header(std::ostream& os, Index d) {
  for (Index i = 0; i < d; ++i) os << (i ? "," : "") << 'x' << i;
}

void write_row(std::ostream& os, const RowMatrix& m, Index r) {
  for (Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << format_double(m(r, c));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  return out;
}

}  // namespace

void write_matrix_csv(std::ostream& os, const RowMatrix& m) {
  write_header(os, m.cols());
  os << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    write_row(os, m, r);
    os << '\n';
  }
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
  write_header(os, ds.dim());
  os << ",label\n";
  for (Index r = 0; r < ds.size(); ++r) {
    write_row(os, ds.features, r);
    os << ',' << ds.labels[static_cast<std::size_t>(r)] << '\n';
  }
}

void write_trace_csv(std::ostream& os, std::span<const TrainTrace> traces) {
  os << "step,loss_non_gaussian,loss_gauss_equiv,seed\n";
  for (const TrainTrace& t : traces) {
    for (const TracePoint& p : t.points) {
      os << p.step << ',' << format_double(p.loss_non_gaussian) << ','
         << format_double(p.loss_gauss_equiv) << ',' << t.seed << '\n';
    }
  }
}

std::vector<double> read_csv_column(std::istream& is, std::string_view column) {
  std::string line;
  if (!std::getline(is, line)) throw ParameterError("CSV input is empty");
  const auto header = split_csv_line(line);
  std::size_t index = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) index = i;
  }
  if (index == header.size()) {
    throw ParameterError("CSV has no column named '" + std::string(column) + "'");
  }
  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() <= index) {
      throw ParameterError("CSV line " + std::to_string(line_no) + " is too short");
    }
    double v = 0.0;
    const std::string& f = fields[index];
    const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
    if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
      throw ParameterError("CSV line " + std::to_string(line_no) + ": '" + f +
                           "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace hermgen
