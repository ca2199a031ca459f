#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "scfem/harness.hpp"

namespace scfem {

namespace {

const char* kHeader = "m,h_minus,h_plus,h_y,N_minus,N_plus,M,rel_l2,rel_h1,min_gen_sv,min_abs_diag";

double parse_double(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') throw ConfigError("CSV: bad numeric field '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') throw ConfigError("CSV: bad integer field '" + tok + "'");
  return static_cast<int>(v);
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kHeader << '\n';
  char buf[512];
  for (const SweepRecord& r : records) {
    std::snprintf(buf, sizeof buf,
                  "%d,%.16e,%.16e,%.16e,%d,%d,%d,%.16e,%.16e,%.16e,%.16e\n", r.m_index,
                  r.h_minus, r.h_plus, r.h_y, r.n_minus, r.n_plus, r.big_m, r.rel_l2, r.rel_h1,
                  r.min_gen_sv, r.min_abs_diag);
    os << buf;
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader)
    throw ConfigError("CSV: missing or unexpected header");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> fields;
    while (std::getline(ls, tok, ',')) fields.push_back(tok);
    if (fields.size() != 11) throw ConfigError("CSV: expected 11 fields per row");
    SweepRecord r{};
    r.m_index = parse_int(fields[0]);
    r.h_minus = parse_double(fields[1]);
    r.h_plus = parse_double(fields[2]);
    r.h_y = parse_double(fields[3]);
    r.n_minus = parse_int(fields[4]);
    r.n_plus = parse_int(fields[5]);
    r.big_m = parse_int(fields[6]);
    r.rel_l2 = parse_double(fields[7]);
    r.rel_h1 = parse_double(fields[8]);
    r.min_gen_sv = parse_double(fields[9]);
    r.min_abs_diag = parse_double(fields[10]);
    out.push_back(r);
  }
  return out;
}

}  // namespace scfem
