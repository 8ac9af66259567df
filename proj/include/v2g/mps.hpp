#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "v2g/model.hpp"

namespace v2g {

namespace detail {

inline std::string mps_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string pad8(const std::string& s) {
  std::string out = s;
  if (out.size() < 8) out.resize(8, ' ');
  return out;
}

inline std::string mps_col_name(int j) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%07d", j + 1);
  return buf;
}

inline std::string mps_row_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "R%07d", i + 1);
  return buf;
}

}  // namespace detail

// Fixed-format MPS with integrality expressed through INTORG/INTEND markers.
// Columns are emitted in registry order, one (row, value) pair per line, and
// all names are mangled to <= 8 characters; the mangling table is written
// separately (see write_mps_names).
inline void write_mps(const LPProblem& lp, const std::vector<bool>& integer_cols,
                      std::ostream& os, const std::string& model_name = "V2G") {
  using detail::mps_col_name;
  using detail::mps_row_name;
  using detail::mps_value;
  using detail::pad8;

  os << "NAME          " << model_name << "\n";
  os << "ROWS\n";
  os << " N  OBJ\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    char type = lp.sense[i] == RowSense::LE ? 'L' : (lp.sense[i] == RowSense::GE ? 'G' : 'E');
    os << " " << type << "  " << mps_row_name(i) << "\n";
  }

  // entries grouped by column
  std::vector<std::vector<std::pair<int, double>>> col_entries(lp.num_cols());
  for (int i = 0; i < lp.num_rows(); ++i)
    for (std::size_t k = lp.row_start[i]; k < lp.row_start[i + 1]; ++k)
      col_entries[lp.row_col[k]].push_back({i, lp.row_val[k]});

  os << "COLUMNS\n";
  bool in_integer = false;
  for (int j = 0; j < lp.num_cols(); ++j) {
    bool is_int = !integer_cols.empty() && integer_cols[j];
    if (is_int && !in_integer) {
      os << "    MARKER" << std::string(17, ' ') << "'MARKER'" << std::string(17, ' ')
         << "'INTORG'\n";
      in_integer = true;
    } else if (!is_int && in_integer) {
      os << "    MARKER" << std::string(17, ' ') << "'MARKER'" << std::string(17, ' ')
         << "'INTEND'\n";
      in_integer = false;
    }
    if (lp.objective[j] != 0.0)
      os << "    " << pad8(mps_col_name(j)) << "  " << pad8("OBJ") << "  "
         << mps_value(lp.objective[j]) << "\n";
    for (auto [row, val] : col_entries[j])
      os << "    " << pad8(mps_col_name(j)) << "  " << pad8(mps_row_name(row)) << "  "
         << mps_value(val) << "\n";
    if (lp.objective[j] == 0.0 && col_entries[j].empty())
      os << "    " << pad8(mps_col_name(j)) << "  " << pad8("OBJ") << "  0\n"; // keep column
  }
  if (in_integer)
    os << "    MARKER" << std::string(17, ' ') << "'MARKER'" << std::string(17, ' ')
       << "'INTEND'\n";

  os << "RHS\n";
  for (int i = 0; i < lp.num_rows(); ++i)
    if (lp.rhs[i] != 0.0)
      os << "    " << pad8("RHS") << "  " << pad8(mps_row_name(i)) << "  " << mps_value(lp.rhs[i])
         << "\n";

  os << "RANGES\n"; // none produced by this writer

  os << "BOUNDS\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const std::string col = pad8(mps_col_name(j));
    double lo = lp.col_lower[j], hi = lp.col_upper[j];
    bool lfin = std::isfinite(lo), ufin = std::isfinite(hi);
    bool is_int = !integer_cols.empty() && integer_cols[j];
    if (is_int && lo == 0.0 && hi == 1.0) {
      os << " BV " << pad8("BND") << "  " << col << "\n";
      continue;
    }
    if (lfin && ufin && lo == hi) {
      os << " FX " << pad8("BND") << "  " << col << "  " << mps_value(lo) << "\n";
      continue;
    }
    if (!lfin && !ufin) {
      os << " FR " << pad8("BND") << "  " << col << "\n";
      continue;
    }
    if (!lfin)
      os << " MI " << pad8("BND") << "  " << col << "\n";
    else if (lo != 0.0)
      os << " LO " << pad8("BND") << "  " << col << "  " << mps_value(lo) << "\n";
    if (ufin) os << " UP " << pad8("BND") << "  " << col << "  " << mps_value(hi) << "\n";
  }
  os << "ENDATA\n";
}

// Sidecar table mapping mangled MPS names back to registry names.
inline void write_mps_names(const MILPModel& model, std::ostream& os) {
  for (int j = 0; j < model.lp.num_cols(); ++j)
    os << detail::mps_col_name(j) << " " << model.registry.name(j) << "\n";
  os << "OBJ objective\n";
  for (std::size_t i = 0; i < model.row_info.size(); ++i)
    os << detail::mps_row_name(static_cast<int>(i)) << " " << row_name(model.row_info[i]) << "\n";
}

inline std::string export_mps(const MILPModel& model, const std::string& name = "V2G") {
  std::ostringstream os;
  write_mps(model.lp, model.integer_cols, os, name);
  return os.str();
}

struct MpsModel {
  std::string name;
  LPProblem lp;
  std::vector<bool> integer_cols;
  std::vector<std::string> col_names;
  std::vector<std::string> row_names;
};

// Token-oriented reader for the format emitted by write_mps (also accepts the
// usual free-format variants: two pairs per data line, comment lines, RANGES).
inline MpsModel read_mps(std::istream& is) {
  MpsModel m;
  enum Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } section = None;

  std::map<std::string, int> row_index;   // constraint rows only
  std::vector<char> row_type;
  std::map<std::string, int> col_index;
  std::vector<std::vector<std::pair<int, double>>> row_entries;
  std::vector<double> rhs_values;
  std::vector<double> range_values;
  std::string obj_name;
  bool integer_mode = false;

  auto get_col = [&](const std::string& name) {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    int j = m.lp.add_column(0.0, kInf, 0.0);
    m.integer_cols.push_back(integer_mode);
    m.col_names.push_back(name);
    col_index[name] = j;
    return j;
  };

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    if (line[0] != ' ') {
      std::string keyword;
      ls >> keyword;
      if (keyword == "NAME") { ls >> m.name; continue; }
      if (keyword == "ROWS") { section = Rows; continue; }
      if (keyword == "COLUMNS") { section = Columns; continue; }
      if (keyword == "RHS") { section = Rhs; continue; }
      if (keyword == "RANGES") { section = Ranges; continue; }
      if (keyword == "BOUNDS") { section = Bounds; continue; }
      if (keyword == "ENDATA") { section = Done; break; }
      throw std::runtime_error("read_mps: unknown section " + keyword);
    }

    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    switch (section) {
      case Rows: {
        if (tok.size() < 2) throw std::runtime_error("read_mps: bad ROWS line");
        char type = tok[0][0];
        if (type == 'N') {
          if (obj_name.empty()) obj_name = tok[1];
          break; // extra free rows are ignored
        }
        row_index[tok[1]] = static_cast<int>(row_type.size());
        row_type.push_back(type);
        row_entries.emplace_back();
        rhs_values.push_back(0.0);
        range_values.push_back(0.0);
        m.row_names.push_back(tok[1]);
        break;
      }
      case Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") integer_mode = true;
          else if (tok[2] == "'INTEND'") integer_mode = false;
          break;
        }
        if (tok.size() < 3) throw std::runtime_error("read_mps: bad COLUMNS line");
        int j = get_col(tok[0]);
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          double val = std::stod(tok[k + 1]);
          if (tok[k] == obj_name) m.lp.objective[j] = val;
          else {
            auto it = row_index.find(tok[k]);
            if (it == row_index.end())
              throw std::runtime_error("read_mps: unknown row " + tok[k]);
            row_entries[it->second].push_back({j, val});
          }
        }
        break;
      }
      case Rhs: {
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          auto it = row_index.find(tok[k]);
          if (it == row_index.end()) continue; // objective-row rhs unsupported
          rhs_values[it->second] = std::stod(tok[k + 1]);
        }
        break;
      }
      case Ranges: {
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          auto it = row_index.find(tok[k]);
          if (it == row_index.end()) throw std::runtime_error("read_mps: unknown row in RANGES");
          range_values[it->second] = std::stod(tok[k + 1]);
        }
        break;
      }
      case Bounds: {
        if (tok.size() < 3) throw std::runtime_error("read_mps: bad BOUNDS line");
        const std::string& type = tok[0];
        int j = get_col(tok[2]);
        double val = tok.size() > 3 ? std::stod(tok[3]) : 0.0;
        if (type == "UP") m.lp.col_upper[j] = val;
        else if (type == "LO") m.lp.col_lower[j] = val;
        else if (type == "FX") m.lp.col_lower[j] = m.lp.col_upper[j] = val;
        else if (type == "FR") { m.lp.col_lower[j] = -kInf; m.lp.col_upper[j] = kInf; }
        else if (type == "MI") m.lp.col_lower[j] = -kInf;
        else if (type == "PL") m.lp.col_upper[j] = kInf;
        else if (type == "BV") { m.lp.col_lower[j] = 0.0; m.lp.col_upper[j] = 1.0; m.integer_cols[j] = true; }
        else if (type == "UI") { m.lp.col_upper[j] = val; m.integer_cols[j] = true; }
        else if (type == "LI") { m.lp.col_lower[j] = val; m.integer_cols[j] = true; }
        else throw std::runtime_error("read_mps: unknown bound type " + type);
        break;
      }
      default:
        throw std::runtime_error("read_mps: data before any section");
    }
  }

  // assemble rows in declaration order; a range turns one row into two
  for (std::size_t i = 0; i < row_type.size(); ++i) {
    RowSense sense = row_type[i] == 'L' ? RowSense::LE
                     : row_type[i] == 'G' ? RowSense::GE
                                          : RowSense::EQ;
    double r = range_values[i];
    if (r == 0.0) {
      m.lp.add_row(sense, rhs_values[i], row_entries[i]);
      continue;
    }
    double b = rhs_values[i];
    double lo, hi;
    if (sense == RowSense::LE) { lo = b - std::abs(r); hi = b; }
    else if (sense == RowSense::GE) { lo = b; hi = b + std::abs(r); }
    else { lo = std::min(b, b + r); hi = std::max(b, b + r); }
    m.lp.add_row(RowSense::GE, lo, row_entries[i]);
    m.lp.add_row(RowSense::LE, hi, row_entries[i]);
  }
  return m;
}

}  // namespace v2g
