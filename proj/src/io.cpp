#include "cfmimo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

namespace cfmimo {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IngestError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

int parse_index(const std::string& s, int line_no) {
  const double v = parse_double(s, line_no);
  if (v < 0 || v != std::floor(v) || v > 1e9) {
    throw IngestError("line " + std::to_string(line_no) + ": bad index '" + s + "'");
  }
  return static_cast<int>(v);
}

bool parse_flag(const std::string& s, int line_no) {
  if (s == "1" || s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "0" || s == "false" || s == "False" || s == "FALSE") return false;
  throw IngestError("line " + std::to_string(line_no) + ": bad valid flag '" + s + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

MeasurementTensor read_measurement_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty measurement file");
  const auto header = split_fields(line);
  const std::vector<std::string> expected{"instance", "ap", "ue", "re", "im", "valid"};
  if (header != expected) {
    throw IngestError("measurement header must be 'instance,ap,ue,re,im,valid'");
  }

  struct Row {
    int i, m, k;
    cplx v;
    bool ok;
  };
  std::vector<Row> rows;
  int f = 0, m_count = 0, k_count = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw IngestError("line " + std::to_string(line_no) + ": expected 6 fields");
    }
    Row r{parse_index(fields[0], line_no), parse_index(fields[1], line_no),
          parse_index(fields[2], line_no),
          cplx{parse_double(fields[3], line_no), parse_double(fields[4], line_no)},
          parse_flag(fields[5], line_no)};
    if (!std::isfinite(r.v.real()) || !std::isfinite(r.v.imag())) r.ok = false;
    f = std::max(f, r.i + 1);
    m_count = std::max(m_count, r.m + 1);
    k_count = std::max(k_count, r.k + 1);
    rows.push_back(r);
  }
  if (rows.empty()) throw IngestError("measurement file has no data rows");

  MeasurementTensor t(f, m_count, k_count);
  for (const auto& r : rows) t.set(r.i, r.m, r.k, r.v, r.ok);
  t.validate();
  return t;
}

MeasurementTensor read_measurement_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open measurement file '" + path + "'");
  return read_measurement_csv(in);
}

void write_beta_csv(std::ostream& out, const RMatrix& beta) {
  for (Eigen::Index m = 0; m < beta.rows(); ++m) {
    for (Eigen::Index k = 0; k < beta.cols(); ++k) {
      if (k) out << ',';
      out << format_number(beta(m, k));
    }
    out << '\n';
  }
}

void write_records_csv(std::ostream& out, const std::vector<MetricRecord>& records) {
  out << "realization,ue,algorithm,target_se,q,sinr,se_bits_s_hz,power_w,ee_bits_j\n";
  for (const auto& r : records) {
    out << r.realization << ',' << r.ue << ',' << to_string(r.algorithm) << ',';
    if (r.target_se) out << format_number(*r.target_se);
    if (r.feasible) {
      out << ',' << format_number(r.q) << ',' << format_number(r.sinr) << ','
          << format_number(r.se) << ',' << format_number(r.power_w) << ','
          << format_number(r.ee) << '\n';
    } else {
      out << ",nan,nan,nan,nan,nan\n";
    }
  }
}

void write_cdf_csv(std::ostream& out, const CdfSeries& cdf) {
  out << "value,cdf\n";
  for (const auto& p : cdf.points) {
    out << format_number(p.value) << ',' << format_number(p.probability) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p_bar_w,p_u_w,algorithm,median_se,median_ee\n";
  for (const auto& r : rows) {
    out << format_number(r.p_bar_w) << ',' << format_number(r.p_u_w) << ',' << r.algorithm << ','
        << format_number(r.median_se) << ',' << format_number(r.median_ee) << '\n';
  }
}

}  // namespace cfmimo
