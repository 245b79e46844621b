#include "vacpol/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vacpol/errors.hpp"

namespace vacpol {

std::string format_json_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_csv_real(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  os_ << '{';
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  os_ << '}';
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  os_ << '[';
  has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  os_ << ']';
  has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separate();
  escape(k);
  os_ << ':';
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  separate();
  escape(s);
  return *this;
}

JsonWriter& JsonWriter::value(const char* s) { return value(std::string(s)); }

JsonWriter& JsonWriter::value(Real x) {
  separate();
  os_ << format_json_real(x);
  return *this;
}

JsonWriter& JsonWriter::value(int x) {
  separate();
  os_ << x;
  return *this;
}

JsonWriter& JsonWriter::value(long long x) {
  separate();
  os_ << x;
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  os_ << (b ? "true" : "false");
  return *this;
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!has_item_.empty()) {
    if (has_item_.back()) os_ << ',';
    has_item_.back() = true;
  }
}

void JsonWriter::escape(const std::string& s) {
  os_ << '"';
  for (char c : s) {
    switch (c) {
      case '"': os_ << "\\\""; break;
      case '\\': os_ << "\\\\"; break;
      case '\n': os_ << "\\n"; break;
      case '\t': os_ << "\\t"; break;
      default: os_ << c;
    }
  }
  os_ << '"';
}

void write_density(const std::string& path, const ChargeDensity& rho,
                   const MomentumLattice& lat) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  JsonWriter w(os);
  w.begin_object();
  w.key("format").value("vacpol-density-v1");
  w.key("lattice").begin_object();
  w.key("L").value(lat.box_length());
  w.key("N").value(lat.max_index());
  w.key("Lambda").value(lat.cutoff());
  w.end_object();
  w.key("coefficients").begin_array();
  for (int i = 0; i < rho.size(); ++i) {
    const Complex c = rho.coeff[i];
    if (c == Complex(0.0, 0.0)) continue;
    const Vector3i d = lat.diff_vector(i);
    w.begin_array();
    w.value(d.x()).value(d.y()).value(d.z()).value(c.real()).value(c.imag());
    w.end_array();
  }
  w.end_array();
  w.end_object();
  os << '\n';
}

ChargeDensity read_density(const std::string& path, const MomentumLattice& lat) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, path + ": " + e.what());
  }
  const auto& jl = j.at("lattice");
  if (std::abs(jl.at("L").get<Real>() - lat.box_length()) > 1e-12 ||
      jl.at("N").get<int>() != lat.max_index() ||
      std::abs(jl.at("Lambda").get<Real>() - lat.cutoff()) > 1e-12)
    throw ValidationError("lattice", "density file lattice does not match the run lattice");

  ChargeDensity rho = ChargeDensity::zero(lat);
  for (const auto& t : j.at("coefficients")) {
    const Vector3i d(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>());
    if (!lat.diff_contains(d))
      throw ValidationError("coefficients", "mode outside the difference grid");
    rho.coeff[lat.diff_index(d)] = Complex(t.at(3).get<Real>(), t.at(4).get<Real>());
  }
  if (reality_defect(rho, lat) > 1e-12)
    throw ValidationError("coefficients", "density violates the reality constraint");
  return rho;
}

void write_checkpoint(const std::string& path, const VacuumState& state,
                      const MomentumLattice& lat, const CheckpointMeta& meta) {
  static_assert(sizeof(double) == 8);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  JsonWriter w(os);
  w.begin_object();
  w.key("format").value("vacpol-checkpoint-v1");
  w.key("L").value(lat.box_length());
  w.key("N").value(lat.max_index());
  w.key("Lambda").value(lat.cutoff());
  w.key("m").value(state.m);
  w.key("mu").value(meta.mu);
  w.key("iterations").value(meta.iterations);
  w.key("dim").value(static_cast<int>(state.Q.rows()));
  w.key("endian").value("little");
  w.end_object();
  os << '\n';

  const int n = static_cast<int>(state.Q.rows());
  std::vector<double> buf(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int jcol = 0; jcol < n; ++jcol) {
      buf[2 * jcol] = state.Q(i, jcol).real();
      buf[2 * jcol + 1] = state.Q(i, jcol).imag();
    }
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
}

VacuumState read_checkpoint(const std::string& path, const MomentumLattice& lat,
                            CheckpointMeta* meta) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string header;
  std::getline(is, header);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, path + ": bad checkpoint header: " + e.what());
  }
  if (j.at("format").get<std::string>() != "vacpol-checkpoint-v1")
    throw Error(ErrorCode::IoError, path + ": unknown checkpoint format");
  if (j.at("endian").get<std::string>() != "little")
    throw Error(ErrorCode::IoError, path + ": unsupported byte order");
  if (std::abs(j.at("L").get<Real>() - lat.box_length()) > 1e-12 ||
      j.at("N").get<int>() != lat.max_index() ||
      std::abs(j.at("Lambda").get<Real>() - lat.cutoff()) > 1e-12)
    throw ValidationError("checkpoint", "checkpoint lattice does not match the run lattice");
  const int n = j.at("dim").get<int>();
  if (n != lat.dim()) throw ValidationError("checkpoint", "dimension mismatch");

  VacuumState s;
  s.m = j.at("m").get<Real>();
  s.Q.resize(n, n);
  std::vector<double> buf(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
    if (!is) throw Error(ErrorCode::IoError, path + ": truncated checkpoint");
    for (int jcol = 0; jcol < n; ++jcol) s.Q(i, jcol) = Complex(buf[2 * jcol], buf[2 * jcol + 1]);
  }
  if (meta) {
    meta->mu = j.at("mu").get<Real>();
    meta->iterations = j.at("iterations").get<int>();
  }
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Real>>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_csv_real(row[i]);
    os << '\n';
  }
}

}  // namespace vacpol
