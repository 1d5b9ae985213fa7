#pragma once

// CSV tables, scenario config documents and provenance headers.

#include "vpboot/errors.hpp"
#include "vpboot/synth.hpp"
#include "vpboot/tables.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#ifndef VPBOOT_VERSION
#define VPBOOT_VERSION "0.1.0"
#endif

namespace vpboot {

inline constexpr const char* kToolVersion = VPBOOT_VERSION;

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Metadata written as `# key: value` lines above every CSV header.
struct Provenance {
  std::uint64_t seed = 0;
  long long replicates = 0;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> extra;

  std::vector<std::pair<std::string, std::string>> fields() const {
    std::vector<std::pair<std::string, std::string>> f{
        {"tool", std::string("vpboot ") + kToolVersion},
        {"seed", std::to_string(seed)},
        {"replicates", std::to_string(replicates)},
        {"config_hash", config_hash}};
    f.insert(f.end(), extra.begin(), extra.end());
    return f;
  }
};

// ---------------------------------------------------------------------------
// CSV

/// Splits one RFC-4180 record. Quoted fields may contain commas and doubled quotes.
inline std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      field_was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && (s.empty() || s.front() != '#'))
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// A parsed CSV table: first row labels columns, first column labels sites.
struct LabeledMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Matrix values;
  std::vector<std::pair<std::string, std::string>> provenance;
};

inline LabeledMatrix parse_csv_table(std::istream& in, const std::string& source = "<csv>") {
  LabeledMatrix out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  std::unordered_set<std::string> seen_sites;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!have_header) {
      if (line.empty()) continue;
      if (line.front() == '#') {
        const auto colon = line.find(':');
        if (colon != std::string::npos)
          out.provenance.emplace_back(trim(std::string_view(line).substr(1, colon - 1)),
                                      trim(std::string_view(line).substr(colon + 1)));
        continue;
      }
      auto header = split_csv_record(line, line_no);
      out.col_labels.assign(header.begin() + 1, header.end());
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_csv_record(line, line_no);
    if (fields.size() != out.col_labels.size() + 1)
      throw InputError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(out.col_labels.size() + 1));
    const std::string& site = fields[0];
    if (!seen_sites.insert(site).second)
      throw InputError(source + ": line " + std::to_string(line_no) +
                       ": duplicate site label '" + site + "'");
    std::vector<double> row;
    row.reserve(out.col_labels.size());
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw InputError(source + ": line " + std::to_string(line_no) + ", column " +
                         std::to_string(c + 1) + " ('" + out.col_labels[c - 1] +
                         "'): non-numeric cell '" + fields[c] + "'");
      row.push_back(v);
    }
    out.row_labels.push_back(site);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(source + ": missing header row");
  out.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(out.col_labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return out;
}

inline LabeledMatrix read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_csv_table(in, path);
}

inline CommunityTable to_community(const LabeledMatrix& m, const std::string& source) {
  for (Index i = 0; i < m.values.rows(); ++i)
    for (Index j = 0; j < m.values.cols(); ++j) {
      const double v = m.values(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InputError(source + ": negative or non-finite abundance " + format_double(v) +
                         " at row " + std::to_string(i + 1) + " (site '" + m.row_labels[i] +
                         "'), column " + std::to_string(j + 1) + " (species '" +
                         m.col_labels[j] + "')");
    }
  return CommunityTable(m.row_labels, m.col_labels, m.values);
}

inline PredictorBlock to_predictors(const LabeledMatrix& m, std::string name,
                                    const std::string& source) {
  for (Index i = 0; i < m.values.rows(); ++i)
    for (Index j = 0; j < m.values.cols(); ++j)
      if (!std::isfinite(m.values(i, j)))
        throw InputError(source + ": non-finite predictor at row " + std::to_string(i + 1) +
                         " (site '" + m.row_labels[i] + "'), column " + std::to_string(j + 1) +
                         " ('" + m.col_labels[j] + "')");
  return PredictorBlock(std::move(name), m.row_labels, m.col_labels, m.values);
}

inline CommunityTable read_community_csv(const std::string& path) {
  return to_community(read_csv_table(path), path);
}

inline PredictorBlock read_predictor_csv(const std::string& path, std::string name) {
  return to_predictors(read_csv_table(path), std::move(name), path);
}

inline void write_provenance(std::ostream& out, const Provenance& p) {
  for (const auto& [k, v] : p.fields()) out << "# " << k << ": " << v << '\n';
}

inline void write_csv_table(std::ostream& out, const std::string& corner,
                            const std::vector<std::string>& row_labels,
                            const std::vector<std::string>& col_labels, const Matrix& values,
                            const Provenance* provenance = nullptr) {
  if (provenance) write_provenance(out, *provenance);
  out << quote_csv(corner);
  for (const auto& c : col_labels) out << ',' << quote_csv(c);
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << quote_csv(row_labels[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < values.cols(); ++j) out << ',' << format_double(values(i, j));
    out << '\n';
  }
}

inline void write_table_csv(std::ostream& out, const CommunityTable& t,
                            const Provenance* provenance = nullptr) {
  write_csv_table(out, "site", t.site_ids(), t.species_ids(), t.values(), provenance);
}

inline void write_table_csv(std::ostream& out, const PredictorBlock& b,
                            const Provenance* provenance = nullptr) {
  write_csv_table(out, "site", b.site_ids(), b.variable_ids(), b.values(), provenance);
}

template <typename Table>
void write_table_csv_file(const std::string& path, const Table& t,
                          const Provenance* provenance = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_table_csv(out, t, provenance);
  if (!out) throw InputError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Scenario config documents
//
//   # comment
//   n_sites = 100
//   sigma_noise = 0.05
//   seed = 7
//   [species]
//   x_opt = 0.5
//   y_opt = 0.0
//
// Keys are the ScenarioConfig field names. Each [species] section adds one
// niche; without any section the two-species defaults apply.

inline std::int64_t parse_int(const std::string& key, const std::string& value, std::size_t line) {
  std::int64_t v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw InputError("config line " + std::to_string(line) + ": '" + key +
                     "' expects an integer, got '" + value + "'");
  return v;
}

inline double parse_real(const std::string& key, const std::string& value, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw InputError("config line " + std::to_string(line) + ": '" + key +
                     "' expects a number, got '" + value + "'");
  return v;
}

inline ScenarioConfig parse_scenario_config(std::istream& in) {
  ScenarioConfig config;
  std::vector<SpeciesNiche> niches;
  bool in_species = false;
  bool have_seed = false;
  std::set<std::string> seen_top;
  std::set<std::string> seen_species;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[species]")
        throw InputError("config line " + std::to_string(line_no) + ": unknown section " + line);
      niches.emplace_back();
      in_species = true;
      seen_species.clear();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (in_species) {
      if (!seen_species.insert(key).second)
        throw InputError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                         "'");
      if (key == "x_opt") niches.back().x_opt = parse_real(key, value, line_no);
      else if (key == "y_opt") niches.back().y_opt = parse_real(key, value, line_no);
      else
        throw InputError("config line " + std::to_string(line_no) + ": unknown species key '" +
                         key + "'");
      continue;
    }
    if (!seen_top.insert(key).second)
      throw InputError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                       "'");
    if (key == "n_sites") config.n_sites = parse_int(key, value, line_no);
    else if (key == "sigma_niche") config.sigma_niche = parse_real(key, value, line_no);
    else if (key == "sigma_noise") config.sigma_noise = parse_real(key, value, line_no);
    else if (key == "y_max") config.y_max = parse_real(key, value, line_no);
    else if (key == "carrying_capacity") config.carrying_capacity = parse_int(key, value, line_no);
    else if (key == "replicates") config.replicates = parse_int(key, value, line_no);
    else if (key == "seed") {
      std::uint64_t s = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), s);
      if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size())
        throw InputError("config line " + std::to_string(line_no) +
                         ": 'seed' expects an unsigned 64-bit integer, got '" + value + "'");
      config.seed = s;
      have_seed = true;
    } else {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!have_seed) throw InputError("config: an explicit 'seed' is required");
  if (!niches.empty()) config.niches = std::move(niches);
  config.validate();
  return config;
}

inline ScenarioConfig parse_scenario_config(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario_config(in);
}

inline ScenarioConfig read_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_scenario_config(in);
}

/// Canonical text form; its hash identifies a configuration in provenance headers.
inline std::string canonical_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "n_sites = " << c.n_sites << '\n'
     << "sigma_niche = " << format_double(c.sigma_niche) << '\n'
     << "sigma_noise = " << format_double(c.sigma_noise) << '\n'
     << "y_max = " << format_double(c.y_max) << '\n'
     << "carrying_capacity = " << c.carrying_capacity << '\n'
     << "replicates = " << c.replicates << '\n'
     << "seed = " << c.seed << '\n';
  for (const auto& n : c.niches)
    os << "[species]\nx_opt = " << format_double(n.x_opt) << "\ny_opt = " << format_double(n.y_opt)
       << '\n';
  return os.str();
}

inline std::string config_hash(const ScenarioConfig& c) { return hex64(fnv1a64(canonical_config(c))); }

}  // namespace vpboot
