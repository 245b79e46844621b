#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "vacpol/lattice.hpp"
#include "vacpol/vacuum.hpp"

namespace vacpol {

/// Fixed float formats: 17 significant digits in JSON (round-trip exact),
/// 9 in CSV tables.
std::string format_json_real(Real x);
std::string format_csv_real(Real x);

/// Minimal streaming JSON emitter with insertion-ordered keys and fixed
/// float formatting, so identical runs produce byte-identical files.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s);
  JsonWriter& value(Real x);
  JsonWriter& value(int x);
  JsonWriter& value(long long x);
  JsonWriter& value(bool b);

 private:
  void separate();
  void escape(const std::string& s);

  std::ostream& os_;
  std::vector<bool> has_item_;  // per open container
  bool pending_key_ = false;
};

/// Density file: lattice parameters plus a flat list of
/// (n1, n2, n3, re, im) coefficient tuples in ascending grid order.
void write_density(const std::string& path, const ChargeDensity& rho,
                   const MomentumLattice& lat);

/// Read a density file; the embedded lattice parameters must match and the
/// reality constraint is enforced. Throws ValidationError or IoError.
ChargeDensity read_density(const std::string& path, const MomentumLattice& lat);

struct CheckpointMeta {
  Real mu = 0.0;
  int iterations = 0;
};

/// Checkpoint file: one-line JSON header, newline, then the state matrix as
/// row-major complex entries, 64-bit little-endian floats (re, im).
void write_checkpoint(const std::string& path, const VacuumState& state,
                      const MomentumLattice& lat, const CheckpointMeta& meta);

VacuumState read_checkpoint(const std::string& path, const MomentumLattice& lat,
                            CheckpointMeta* meta = nullptr);

/// CSV with a header row and fixed 9-digit float formatting.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Real>>& rows);

}  // namespace vacpol
